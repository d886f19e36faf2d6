"""Brute-force values of the two extremal quantities for cyclic translate families.

For a family ``B`` of subsets of ``[n]``:

* ``v``: largest family in which every pairwise intersection (a set with
  itself included) contains a member of ``B``;
* ``v_bar``: largest family in which every two sets agree on some member of
  ``B``, i.e. their symmetric difference misses it.

Both are maximum cliques in a compatibility graph on the ``2^n`` subsets.
The ``v_bar`` graph is a Cayley graph of ``(P[n], xor)``, so its search is
rooted at the empty set.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .clique import max_clique
from .euclid import DomainError
from .kernel import build_generator_set
from .subsets import SubsetMask, cyclic_translates, format_positions, full_mask, mask_from_positions, rotate
from .verifier import GuardError, verify_coset_partition


@dataclass(frozen=True)
class TranslateFamily:
    """All distinct cyclic translates of ``base`` modulo ``n``."""

    n: int
    base: SubsetMask
    members: Tuple[SubsetMask, ...]

    @classmethod
    def of(cls, base: SubsetMask) -> "TranslateFamily":
        return cls(base.n, base, tuple(cyclic_translates(base)))

    @classmethod
    def block(cls, n: int, t: int) -> "TranslateFamily":
        return cls.of(SubsetMask(n, full_mask(t)))

    @classmethod
    def from_positions(cls, positions: Iterable[int], n: int) -> "TranslateFamily":
        return cls.of(SubsetMask.from_positions(positions, n))

    @property
    def member_bits(self) -> List[int]:
        return [m.bits for m in self.members]

    def block_length(self) -> Optional[int]:
        """``t`` if the members are exactly the translates of ``[t]``, else None."""
        t = len(self.base)
        if t == 0:
            return None
        if any(rotate(self.base.bits, self.n, c) == full_mask(t) for c in range(self.n)):
            return t
        return None


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 8
    timeout: Optional[float] = None
    symmetry: bool = True


@dataclass
class OracleResult:
    quantity: str  # "v" | "v_bar"
    value: int
    witness: List[SubsetMask]
    nodes_explored: int
    timed_out: bool
    lower_bound: int = 0
    upper_bound: int = 0
    certificates: List[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.lower_bound == self.upper_bound

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "value": self.value,
            "exact": self.exact,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "timed_out": self.timed_out,
            "nodes_explored": self.nodes_explored,
            "certificates": list(self.certificates),
            "witness": [str(w) for w in self.witness],
        }


def kernel_family(n: int, base: SubsetMask) -> List[SubsetMask]:
    """All supersets of ``base`` in ``P[n]``."""
    if base.n != n:
        raise DomainError(f"base lives in [1, {base.n}], not [1, {n}]")
    if not base.bits:
        raise DomainError("kernel family of the empty set is all of P[n]; pass a nonempty base")
    free = [p for p in range(1, n + 1) if p not in base]
    out = []
    for r in range(len(free) + 1):
        for extra in combinations(free, r):
            out.append(SubsetMask(n, base.bits | mask_from_positions(extra, n)))
    return out


# --- independent condition checks -----------------------------------------

def intersecting_ok(a: int, b: int, members: Sequence[int]) -> bool:
    both = a & b
    return any(m & both == m for m in members)


def agreeing_ok(a: int, b: int, members: Sequence[int]) -> bool:
    diff = a ^ b
    return any(m & diff == 0 for m in members)


def family_is_valid(family: Sequence[SubsetMask], fam: TranslateFamily, quantity: str) -> bool:
    """Pairwise check (pairs with repetition) using plain Python sets."""
    members = [set(m) for m in fam.members]
    sets = [set(a) for a in family]
    if len({frozenset(s) for s in sets}) != len(sets):
        return False
    for x in range(len(sets)):
        for y in range(x, len(sets)):
            if quantity == "v":
                common = sets[x] & sets[y]
                if not any(m <= common for m in members):
                    return False
            else:
                diff = sets[x] ^ sets[y]
                if not any(not (m & diff) for m in members):
                    return False
    return True


# --- graphs -----------------------------------------------------------------

def _pack_adjacency(matrix: np.ndarray) -> List[int]:
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _agree_table(n: int, members: Sequence[int]) -> np.ndarray:
    """``ok[d]`` iff difference ``d`` misses some member."""
    d = np.arange(1 << n, dtype=np.int64)
    ok = np.zeros(1 << n, dtype=bool)
    for m in members:
        ok |= (d & m) == 0
    return ok


def _intersect_graph(n: int, members: Sequence[int]) -> Tuple[List[int], int]:
    size = 1 << n
    s = np.arange(size, dtype=np.int64)
    contains = np.zeros(size, dtype=bool)  # contains[x] iff x holds some member
    for m in members:
        contains |= (s & m) == m
    matrix = contains[s[:, None] & s[None, :]]
    np.fill_diagonal(matrix, False)
    admissible = int.from_bytes(np.packbits(contains, bitorder="little").tobytes(), "little")
    return _pack_adjacency(matrix), admissible


def _agree_graph(n: int, members: Sequence[int]) -> List[int]:
    size = 1 << n
    s = np.arange(size, dtype=np.int64)
    ok = _agree_table(n, members)
    matrix = ok[s[:, None] ^ s[None, :]]
    np.fill_diagonal(matrix, False)
    return _pack_adjacency(matrix)


def _check_guard(fam: TranslateFamily, budget: OracleBudget) -> None:
    if fam.n > budget.max_n:
        raise GuardError(f"n={fam.n} exceeds the oracle guard {budget.max_n}")


def _finish(quantity, fam, res, certificates=()) -> OracleResult:
    witness = [SubsetMask(fam.n, v) for v in sorted(res.clique)]
    if not family_is_valid(witness, fam, quantity):
        raise AssertionError(f"{quantity} search produced an invalid witness")
    lower, upper = len(witness), res.upper_bound
    out = OracleResult(quantity, lower, witness, res.nodes, res.timed_out, lower, upper)
    if res.timed_out:
        _apply_certificates(out, fam)
    return out


def oracle_v(fam: TranslateFamily, budget: Optional[OracleBudget] = None) -> OracleResult:
    """Exact ``v`` by clique search over the subsets containing some member."""
    budget = budget or OracleBudget()
    _check_guard(fam, budget)
    adj, admissible = _intersect_graph(fam.n, fam.member_bits)
    res = max_clique(adj, candidates=admissible, timeout=budget.timeout)
    return _finish("v", fam, res)


def oracle_vbar(fam: TranslateFamily, budget: Optional[OracleBudget] = None) -> OracleResult:
    """Exact ``v_bar``; with ``budget.symmetry`` cliques are rooted at the empty set."""
    budget = budget or OracleBudget()
    _check_guard(fam, budget)
    adj = _agree_graph(fam.n, fam.member_bits)
    root = (0,) if budget.symmetry else ()
    res = max_clique(adj, root=root, timeout=budget.timeout)
    return _finish("v_bar", fam, res)


def _apply_certificates(result: OracleResult, fam: TranslateFamily) -> None:
    """Tighten bounds of an unfinished search for block families.

    Lower: the kernel family of ``[t]`` (validated pairwise).  Upper: the
    coset partition by ``G_{n,t}``, each coset holding at most one member of
    an agreeing family; since ``v <= v_bar`` it bounds both quantities.
    """
    t = fam.block_length()
    if t is None:
        return
    n = fam.n
    kernel = kernel_family(n, SubsetMask(n, full_mask(t)))
    if len(kernel) > result.lower_bound and family_is_valid(kernel, fam, result.quantity):
        result.lower_bound = result.value = len(kernel)
        result.witness = kernel
        result.certificates.append("kernel_family")
    try:
        report = verify_coset_partition(build_generator_set(n, t))
    except GuardError:
        return
    if report.passed and report.coset_count < result.upper_bound:
        result.upper_bound = report.coset_count
        result.certificates.append("coset_partition")


def certified_vbar(fam: TranslateFamily, timeout: float = 1.0, max_n: int = 16) -> OracleResult:
    """``v_bar`` for larger ``n``: a time-boxed search completed by certificates."""
    return oracle_vbar(fam, OracleBudget(max_n=max_n, timeout=timeout))


# --- theorem sweep ----------------------------------------------------------

@dataclass
class TheoremRow:
    n: int
    t: int
    v: int
    v_bar: int
    predicted: int
    exact: bool
    elapsed: float

    @property
    def agree(self) -> bool:
        return self.exact and self.v == self.v_bar == self.predicted

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "v": self.v,
            "v_bar": self.v_bar,
            "predicted": self.predicted,
            "exact": self.exact,
            "agree": self.agree,
        }


def check_theorems(n_max: int, budget: Optional[OracleBudget] = None) -> List[TheoremRow]:
    """``v``, ``v_bar`` and ``2^(n-t)`` for every block family with ``t <= n <= n_max``."""
    budget = budget or OracleBudget()
    if n_max > budget.max_n:
        raise GuardError(f"n_max={n_max} exceeds the oracle guard {budget.max_n}")
    rows = []
    for n in range(1, n_max + 1):
        for t in range(1, n + 1):
            start = time.perf_counter()
            fam = TranslateFamily.block(n, t)
            v = oracle_v(fam, budget)
            vb = oracle_vbar(fam, budget)
            rows.append(
                TheoremRow(
                    n, t, v.value, vb.value, 1 << (n - t),
                    exact=v.exact and vb.exact,
                    elapsed=time.perf_counter() - start,
                )
            )
    return rows


def format_theorem_table(rows: Sequence[TheoremRow]) -> str:
    header = f"{'n':>3} {'t':>3} {'v':>6} {'v_bar':>6} {'2^(n-t)':>8} {'exact':>6} {'agree':>6}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.n:>3} {r.t:>3} {r.v:>6} {r.v_bar:>6} {r.predicted:>8} "
            f"{'yes' if r.exact else 'no':>6} {'yes' if r.agree else 'NO':>6}"
        )
    return "\n".join(lines)


def theorem_rows_json(rows: Sequence[TheoremRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)


def format_family(family: Sequence[SubsetMask]) -> List[str]:
    return [format_positions(s.positions()) for s in family]
