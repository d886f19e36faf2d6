"""Generators of the hitting subgroup ``G_{n,t}`` of ``(P[n], xor)``.

Generator ``g_i`` (``1 <= i <= t``) is assembled interval by interval from
the Euclid decomposition of ``(n, t)``.  With ``a`` the largest index such
that ``t_a < i``:

* for ``0 <= j <= a`` the segment on ``(n_j, n_{j+1}]`` is the residue
  class ``x - n_j = i - t_j (mod r_{2j})``;
* unless ``k = 2a + 1`` a single tail point ``n_{a+1} + [i - t_a]`` is
  added, the bracket being the least positive residue mod ``r_{2a+1}``.

Within positions ``1..t`` each ``g_j`` contains exactly ``j``, so the ``t``
generators are independent, and clearing positions ``1..t`` by XOR with the
matching generators canonicalizes any subset within its coset.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .euclid import DomainError, EuclidDecomposition, euclid_decompose, least_positive_residue
from .subsets import SubsetMask, positions_of


class TriangularityError(RuntimeError):
    """A generator set fails ``j in g_i  <=>  i == j`` on positions ``1..t``."""


# A ComboIndex is an int in [0, 2**t); bit i-1 set means g_i participates.
ComboIndex = int


def combo_from_indices(indices: Iterable[int]) -> ComboIndex:
    c = 0
    for i in indices:
        c |= 1 << (i - 1)
    return c


def combo_indices(c: ComboIndex) -> List[int]:
    return positions_of(c)


def generator_level(dec: EuclidDecomposition, i: int) -> int:
    """Largest ``a`` with ``t_a < i``."""
    if not 1 <= i <= dec.t:
        raise DomainError(f"generator index {i} outside [1, {dec.t}]")
    return bisect_left(dec.partial_t, i) - 1


@lru_cache(maxsize=4096)
def _segment_patterns(dec: EuclidDecomposition) -> Tuple[int, ...]:
    # pattern j: q_{2j+1} bits spaced r_{2j} apart, starting at bit 0
    pats = []
    for j in range(len(dec.partial_n) - 1):
        r = dec.remainders[2 * j]
        q = dec.quotients[2 * j]
        pats.append(((1 << (r * q)) - 1) // ((1 << r) - 1))
    return tuple(pats)


def _build_mask(dec: EuclidDecomposition, i: int, a: int, patterns: Sequence[int]) -> int:
    rem, pn, pt = dec.remainders, dec.partial_n, dec.partial_t
    bits = 0
    for j in range(a + 1):
        r = rem[2 * j]
        if r <= 0:
            raise AssertionError(f"zero modulus r_{2 * j} for i={i}, (n, t)=({dec.n}, {dec.t})")
        c = (i - pt[j] - 1) % r + 1
        bits |= patterns[j] << (pn[j] + c - 1)
    if dec.k != 2 * a + 1:
        tail = pn[a + 1] + least_positive_residue(i - pt[a], rem[2 * a + 1])
        bits |= 1 << (tail - 1)
    return bits


def build_generator(dec: EuclidDecomposition, i: int) -> SubsetMask:
    """The generator ``g_i`` as a subset of ``[n]``."""
    a = generator_level(dec, i)
    return SubsetMask(dec.n, _build_mask(dec, i, a, _segment_patterns(dec)))


def generator_masks(dec: EuclidDecomposition) -> List[int]:
    """Raw bitmasks of ``g_1..g_t``; the hot path behind :func:`build_generator_set`."""
    patterns = _segment_patterns(dec)
    pt = dec.partial_t
    out = []
    a = 0
    for i in range(1, dec.t + 1):
        while a + 1 < len(pt) and pt[a + 1] < i:
            a += 1
        out.append(_build_mask(dec, i, a, patterns))
    return out


def check_triangular(masks: Sequence[int], t: int) -> None:
    low = (1 << t) - 1
    if len(masks) != t:
        raise TriangularityError(f"expected {t} generators, got {len(masks)}")
    for j, m in enumerate(masks):
        if m & low != 1 << j:
            got = positions_of(m & low)
            raise TriangularityError(f"g_{j + 1} meets [1, {t}] in {got}, expected [{j + 1}]")


@dataclass(frozen=True)
class GeneratorSet:
    """The generators ``g_1..g_t`` with their Euclid metadata.

    Construction through ``__post_init__`` always re-checks triangularity.
    """

    dec: EuclidDecomposition
    masks: Tuple[int, ...]

    def __post_init__(self):
        n = self.dec.n
        for m in self.masks:
            if m < 0 or m >> n:
                raise DomainError(f"generator has positions outside [1, {n}]")
        check_triangular(self.masks, self.dec.t)

    @property
    def n(self) -> int:
        return self.dec.n

    @property
    def t(self) -> int:
        return self.dec.t

    @property
    def gens(self) -> Tuple[SubsetMask, ...]:
        return tuple(SubsetMask(self.n, m) for m in self.masks)

    def generator(self, i: int) -> SubsetMask:
        if not 1 <= i <= self.t:
            raise DomainError(f"generator index {i} outside [1, {self.t}]")
        return SubsetMask(self.n, self.masks[i - 1])

    @property
    def levels(self) -> Tuple[int, ...]:
        """The index ``a`` for each generator."""
        return tuple(generator_level(self.dec, i) for i in range(1, self.t + 1))

    def segments(self, i: int) -> List[Tuple[int, int, SubsetMask]]:
        """``(lo, hi, part)`` for each interval ``(lo, hi]`` used by ``g_i``.

        The last entry is the tail interval ``(n_{a+1}, n]``; its part may be
        empty.  Parts are read off the stored mask, so a corrupted generator
        shows its corruption here.
        """
        dec = self.dec
        a = generator_level(dec, i)
        bounds = list(dec.partial_n[: a + 2])
        if bounds[-1] != dec.n:
            bounds.append(dec.n)
        m = self.masks[i - 1]
        out = []
        for lo, hi in zip(bounds, bounds[1:]):
            window = ((1 << (hi - lo)) - 1) << lo
            out.append((lo, hi, SubsetMask(self.n, m & window)))
        return out

    def replace(self, i: int, mask: int) -> "GeneratorSet":
        """Copy with ``g_i`` replaced (used for corruption tests)."""
        masks = list(self.masks)
        masks[i - 1] = mask
        return GeneratorSet(self.dec, tuple(masks))

    def flip(self, i: int, position: int) -> "GeneratorSet":
        return self.replace(i, self.masks[i - 1] ^ (1 << (position - 1)))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "euclid": self.dec.to_dict(),
            "generators": [positions_of(m) for m in self.masks],
        }

    def to_json(self) -> str:
        return generator_set_to_json(self)


def build_generator_set(n: int, t: int) -> GeneratorSet:
    dec = euclid_decompose(n, t)
    return GeneratorSet(dec, tuple(generator_masks(dec)))


def _pack_rows(rows: np.ndarray) -> Tuple[int, ...]:
    packed = np.packbits(rows, axis=1, bitorder="little")
    return tuple(int.from_bytes(r.tobytes(), "little") for r in packed)


def closed_form_generators(n: int, t: int) -> Optional[GeneratorSet]:
    """Generators from the explicit formulas for Euclid depth ``k <= 3``.

    ``k = 1`` (``t | n``): ``g_i = {x : x = i mod t}``.

    ``k = 2`` (``n = qt + r`` with ``r | t``; ``r = 1`` is ``n = 1 mod t``):
    ``g_i = {x : x = i mod t, or x > n - r and x = i mod r}``.

    ``k = 3`` (``r`` does not divide ``t``, ``t = r' mod r`` with ``r' | r``):
    ``g_i = {x : x = i mod t, or x > qt and x - qt = i mod m}`` where ``m = r``
    for ``i <= t - r'`` and ``m = r'`` otherwise.

    Returns None for deeper decompositions.
    """
    dec = euclid_decompose(n, t)
    if dec.k > 3:
        return None
    x = np.arange(1, n + 1)[None, :]
    i = np.arange(1, t + 1)[:, None]
    member = (x - i) % t == 0
    if dec.k == 2:
        r = dec.remainders[1]
        member |= (x > n - r) & ((x - i) % r == 0)
    elif dec.k == 3:
        q, r, r2 = dec.quotients[0], dec.remainders[1], dec.remainders[2]
        modulus = np.where(i <= t - r2, r, r2)
        member |= (x > q * t) & ((x - q * t - i) % modulus == 0)
    return GeneratorSet(dec, _pack_rows(member))


def span_element(gs: GeneratorSet, c: ComboIndex) -> SubsetMask:
    return SubsetMask(gs.n, span_mask(gs.masks, c))


def span_mask(masks: Sequence[int], c: int) -> int:
    if c < 0 or c >> len(masks):
        raise DomainError(f"combo {c} outside [0, 2^{len(masks)})")
    bits = 0
    j = 0
    while c:
        if c & 1:
            bits ^= masks[j]
        c >>= 1
        j += 1
    return bits


def canonicalize(gs: GeneratorSet, s: SubsetMask) -> Tuple[SubsetMask, ComboIndex]:
    """Coset representative of ``s`` (disjoint from ``[t]``) and the combo removed."""
    if s.n != gs.n:
        raise DomainError(f"ground sizes differ: {s.n} != {gs.n}")
    c = s.bits & ((1 << gs.t) - 1)
    return SubsetMask(gs.n, s.bits ^ span_mask(gs.masks, c)), c


def span_u64(masks: Sequence[int]) -> np.ndarray:
    """All ``2^t`` span elements as ``uint64``, indexed by combo (needs ``n <= 64``)."""
    out = np.zeros(1 << len(masks), dtype=np.uint64)
    size = 1
    for m in masks:
        out[size : 2 * size] = out[:size] ^ np.uint64(m)
        size *= 2
    return out


# --- JSON ------------------------------------------------------------------

def generator_set_to_json(gs: GeneratorSet) -> str:
    return json.dumps(gs.to_dict(), indent=2)


def generator_set_from_json(text: str) -> GeneratorSet:
    """Inverse of :func:`generator_set_to_json`; rejects inconsistent Euclid data."""
    doc = json.loads(text)
    dec = euclid_decompose(int(doc["n"]), int(doc["t"]))
    if "euclid" in doc and doc["euclid"] != dec.to_dict():
        raise DomainError("euclid block does not match (n, t)")
    masks = []
    for ps in doc["generators"]:
        m = 0
        for p in ps:
            if not 1 <= p <= dec.n:
                raise DomainError(f"position {p} outside [1, {dec.n}]")
            m |= 1 << (p - 1)
        masks.append(m)
    return GeneratorSet(dec, tuple(masks))
