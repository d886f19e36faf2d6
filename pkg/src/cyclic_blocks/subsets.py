"""Subsets of ``[n]`` as bit vectors.

Positions are 1-based at every public boundary (``{1, ..., n}``); position
``p`` is stored in bit ``p - 1`` of an arbitrary-precision ``int``, which
acts as the packed word array.  Symmetric difference is XOR.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple

import numpy as np

from .euclid import DomainError


class EmptySetError(DomainError):
    """Raised by operations that have no meaning on the empty set."""


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_from_positions(positions: Iterable[int], n: int) -> int:
    bits = 0
    for p in positions:
        if not 1 <= p <= n:
            raise DomainError(f"position {p} outside [1, {n}]")
        bits |= 1 << (p - 1)
    return bits


def positions_of(bits: int) -> List[int]:
    """Ascending 1-based positions of the set bits."""
    out = []
    s = bin(bits)[:1:-1]
    idx = s.find("1")
    while idx != -1:
        out.append(idx + 1)
        idx = s.find("1", idx + 1)
    return out


def rotate(bits: int, n: int, shift: int) -> int:
    """Cyclic translate ``p -> ((p - 1 + shift) mod n) + 1`` on raw bits."""
    shift %= n
    if shift == 0:
        return bits
    return ((bits << shift) | (bits >> (n - shift))) & full_mask(n)


def _run_starts(zeros: int, n: int, length: int) -> int:
    """Bit ``p`` set iff bits ``p, p+1, ..., p+length-1`` (cyclic) are all set in ``zeros``."""
    mask = full_mask(n)

    def down(x: int, j: int) -> int:
        # bit p of the result is bit p + j (cyclic) of x
        if j == 0:
            return x
        return ((x >> j) | (x << (n - j))) & mask

    result = None
    acc_len = 0
    block, block_len = zeros, 1
    rem = length
    while rem:
        if rem & 1:
            if result is None:
                result, acc_len = block, block_len
            else:
                result &= down(block, acc_len)
                acc_len += block_len
            if not result:
                return 0
        rem >>= 1
        if rem:
            block &= down(block, block_len)
            block_len *= 2
    return result


def missed_windows(bits: int, n: int, t: int) -> int:
    """Bit ``p - 1`` set iff the window ``{p, ..., p+t-1}`` (mod n) avoids the set."""
    if not 1 <= t <= n:
        raise DomainError(f"t must satisfy 1 <= t <= n, got t={t}, n={n}")
    return _run_starts(~bits & full_mask(n), n, t)


def first_missed_window(bits: int, n: int, t: int) -> Optional[int]:
    """Smallest start ``p`` of a length-``t`` window disjoint from the set, or None."""
    w = missed_windows(bits, n, t)
    if not w:
        return None
    return (w & -w).bit_length()


@dataclass(frozen=True)
class SubsetMask:
    """A subset of ``[n]``; bit ``p - 1`` of ``bits`` is set iff ``p`` is a member."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"ground size must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise DomainError(f"bits outside [1, {self.n}]")

    @classmethod
    def from_positions(cls, positions: Iterable[int], n: int) -> "SubsetMask":
        return cls(n, mask_from_positions(positions, n))

    @classmethod
    def empty(cls, n: int) -> "SubsetMask":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "SubsetMask":
        return cls(n, full_mask(n))

    @classmethod
    def parse(cls, text: str, n: int) -> "SubsetMask":
        return cls.from_positions(parse_positions(text), n)

    def positions(self) -> List[int]:
        return positions_of(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.positions())

    def __contains__(self, p: int) -> bool:
        return 1 <= p <= self.n and bool(self.bits >> (p - 1) & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __xor__(self, other: "SubsetMask") -> "SubsetMask":
        return sym_diff(self, other)

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        _check_same_n(self, other)
        return SubsetMask(self.n, self.bits & other.bits)

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        _check_same_n(self, other)
        return SubsetMask(self.n, self.bits | other.bits)

    def issubset(self, other: "SubsetMask") -> bool:
        _check_same_n(self, other)
        return self.bits & ~other.bits == 0

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.n, ~self.bits & full_mask(self.n))

    def rotate(self, shift: int) -> "SubsetMask":
        return SubsetMask(self.n, rotate(self.bits, self.n, shift))

    def __str__(self) -> str:
        return format_positions(self.positions())

    def __repr__(self) -> str:
        return f"SubsetMask(n={self.n}, {self})"


def _check_same_n(a: SubsetMask, b: SubsetMask) -> None:
    if a.n != b.n:
        raise DomainError(f"ground sizes differ: {a.n} != {b.n}")


def sym_diff(a: SubsetMask, b: SubsetMask) -> SubsetMask:
    _check_same_n(a, b)
    return SubsetMask(a.n, a.bits ^ b.bits)


def max_cyclic_gap(s: SubsetMask) -> int:
    """Largest circular distance between consecutive members, wraparound included.

    A singleton has gap ``n``.  The empty set raises :class:`EmptySetError`.
    """
    if not s.bits:
        raise EmptySetError("max_cyclic_gap of the empty set")
    xs = positions_of(s.bits)
    gap = xs[0] + s.n - xs[-1]
    for a, b in zip(xs, xs[1:]):
        if b - a > gap:
            gap = b - a
    return gap


def hits_all_blocks(s: SubsetMask, t: int) -> bool:
    """True iff ``s`` meets every cyclic translate of ``[t]`` modulo ``s.n``."""
    if not 1 <= t <= s.n:
        raise DomainError(f"t must satisfy 1 <= t <= n, got t={t}, n={s.n}")
    return missed_windows(s.bits, s.n, t) == 0


def cyclic_translates(b: SubsetMask) -> List[SubsetMask]:
    """Distinct cyclic translates of ``b``, in order of first appearance by shift."""
    seen = {}
    for c in range(b.n):
        bits = rotate(b.bits, b.n, c)
        if bits not in seen:
            seen[bits] = SubsetMask(b.n, bits)
    return list(seen.values())


# --- text form -----------------------------------------------------------

_SET_RE = re.compile(r"^\s*\{?\s*([0-9,\s]*?)\s*\}?\s*$")


def format_positions(positions: Iterable[int]) -> str:
    return "{" + ",".join(str(p) for p in sorted(positions)) + "}"


def parse_positions(text: str) -> Tuple[int, ...]:
    """Parse ``"{1,6,11}"`` (braces optional) into ascending positions."""
    m = _SET_RE.match(text)
    if m is None:
        raise DomainError(f"not a subset literal: {text!r}")
    body = m.group(1).strip()
    if not body:
        return ()
    try:
        ps = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise DomainError(f"not a subset literal: {text!r}") from None
    if len(set(ps)) != len(ps):
        raise DomainError(f"repeated position in {text!r}")
    return tuple(sorted(ps))


# --- vectorized helpers for n <= 64 ----------------------------------------

def hits_all_blocks_u64(values: np.ndarray, n: int, t: int) -> np.ndarray:
    """Vectorized :func:`hits_all_blocks` over ``uint64`` masks with ``n <= 64``."""
    return missed_windows_u64(values, n, t) == 0


def missed_windows_u64(values: np.ndarray, n: int, t: int) -> np.ndarray:
    if not 1 <= n <= 64:
        raise DomainError(f"vectorized path needs n <= 64, got {n}")
    if not 1 <= t <= n:
        raise DomainError(f"t must satisfy 1 <= t <= n, got t={t}, n={n}")
    mask = np.uint64((1 << n) - 1)
    zeros = ~np.asarray(values, dtype=np.uint64) & mask

    def down(x, j):
        if j == 0:
            return x
        return ((x >> np.uint64(j)) | (x << np.uint64(n - j))) & mask

    result = None
    acc_len = 0
    block, block_len = zeros, 1
    rem = t
    while rem:
        if rem & 1:
            if result is None:
                result, acc_len = block, block_len
            else:
                result = result & down(block, acc_len)
                acc_len += block_len
        rem >>= 1
        if rem:
            block = block & down(block, block_len)
            block_len *= 2
    return result
