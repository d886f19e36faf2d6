"""Checking that every nonzero element of ``G_{n,t}`` meets every block translate.

Two independent routes are provided:

* :func:`verify_group` walks the span directly (every nonzero combo, or a
  seeded sample of them) and tests each element against all windows;
* :func:`verify_coset_partition` canonicalizes the whole power set, counts
  cosets, and tests the within-coset differences.

Work is split into contiguous combo ranges (exhaustive) or fixed-size sample
chunks (sampled); partial reports merge associatively, so the result does
not depend on the number of workers.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .euclid import DomainError
from .gf2 import gf2_rank
from .kernel import GeneratorSet, span_u64
from .subsets import first_missed_window, hits_all_blocks_u64, missed_windows, missed_windows_u64

SAMPLE_CHUNK = 8192
JOBS_ENV = "CYCLIC_BLOCKS_JOBS"


class GuardError(DomainError):
    """The instance is too large for an enumeration-based check."""


@dataclass(frozen=True)
class Failure:
    combo: int
    missed_start: int

    def to_dict(self) -> dict:
        return {"combo_bits": self.combo, "missed_start": self.missed_start}


@dataclass(frozen=True)
class Budget:
    max_exhaustive_t: int = 16
    sample_count: int = 100_000
    seed: int = 0


@dataclass
class VerificationReport:
    n: int
    t: int
    mode: str  # "exhaustive" | "sampled"
    combos_checked: int = 0
    failures: List[Failure] = field(default_factory=list)
    elapsed: float = 0.0
    group_order_confirmed: bool = False
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        if (self.n, self.t, self.mode) != (other.n, other.t, other.mode):
            raise ValueError("cannot merge reports for different instances")
        failures = sorted(self.failures + other.failures, key=lambda f: f.combo)
        return replace(
            self,
            combos_checked=self.combos_checked + other.combos_checked,
            failures=failures,
            elapsed=self.elapsed + other.elapsed,
            group_order_confirmed=self.group_order_confirmed and other.group_order_confirmed,
        )

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "t": self.t,
            "mode": self.mode,
            "combos_checked": self.combos_checked,
            "failures": [f.to_dict() for f in self.failures],
            "group_order_confirmed": self.group_order_confirmed,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }
        if self.seed is not None:
            d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


# --- exhaustive --------------------------------------------------------------

def _exhaustive_range(masks: Tuple[int, ...], n: int, lo: int, hi: int) -> List[Failure]:
    if n <= 64:
        return _exhaustive_u64(masks, n, lo, hi)
    return _exhaustive_bigint(masks, n, lo, hi)


def _exhaustive_u64(masks: Tuple[int, ...], n: int, lo: int, hi: int) -> List[Failure]:
    t = len(masks)
    values = span_u64(masks)[lo:hi]
    missed = missed_windows_u64(values, n, t)
    out = []
    for idx in np.nonzero(missed)[0]:
        w = int(missed[idx])
        out.append(Failure(lo + int(idx), (w & -w).bit_length()))
    return out


def _exhaustive_bigint(masks: Tuple[int, ...], n: int, lo: int, hi: int) -> List[Failure]:
    t = len(masks)
    # prefix[j] = g_1 ^ ... ^ g_{j+1}: stepping c -> c+1 flips the trailing ones and one zero
    prefix = []
    acc = 0
    for m in masks:
        acc ^= m
        prefix.append(acc)
    value = 0
    for j in range(t):
        if lo >> j & 1:
            value ^= masks[j]
    out = []
    for c in range(lo, hi):
        start = first_missed_window(value, n, t)
        if start is not None:
            out.append(Failure(c, start))
        trailing = (~c & (c + 1)).bit_length() - 1
        if trailing < t:
            value ^= prefix[trailing]
    return out


def _split(lo: int, hi: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    step, extra = divmod(hi - lo, parts)
    out = []
    start = lo
    for p in range(parts):
        end = start + step + (1 if p < extra else 0)
        out.append((start, end))
        start = end
    return out


# --- sampled -----------------------------------------------------------------

def sample_combos(t: int, seed: int, chunk: int, size: int) -> List[int]:
    """``size`` uniform nonzero combos for sample chunk ``chunk``.

    Each chunk owns its own Philox counter block keyed by ``seed``, so chunks
    are disjoint and reproducible regardless of which worker draws them.
    """
    rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, chunk, 0]))
    if t <= 63:
        return [int(v) for v in rng.integers(1, 1 << t, size=size, dtype=np.uint64)]
    words = (t + 63) // 64
    top = (1 << t) - 1
    out = []
    while len(out) < size:
        raw = rng.integers(0, 1 << 64, size=words, dtype=np.uint64, endpoint=False)
        v = 0
        for w in raw:
            v = (v << 64) | int(w)
        v &= top
        if v:
            out.append(v)
    return out


def _sampled_chunks(masks: Tuple[int, ...], n: int, seed: int, chunks: Sequence[Tuple[int, int]]) -> Tuple[int, List[Failure]]:
    t = len(masks)
    checked = 0
    out = []
    for chunk, size in chunks:
        combos = sample_combos(t, seed, chunk, size)
        checked += len(combos)
        if n <= 64:
            cs = np.array(combos, dtype=np.uint64)
            values = np.zeros(len(cs), dtype=np.uint64)
            for j, m in enumerate(masks):
                sel = ((cs >> np.uint64(j)) & np.uint64(1)).astype(bool)
                values[sel] ^= np.uint64(m)
            missed = missed_windows_u64(values, n, t)
            for idx in np.nonzero(missed)[0]:
                w = int(missed[idx])
                out.append(Failure(combos[idx], (w & -w).bit_length()))
            continue
        for c in combos:
            value = 0
            j = 0
            cc = c
            while cc:
                if cc & 1:
                    value ^= masks[j]
                cc >>= 1
                j += 1
            w = missed_windows(value, n, t)
            if w:
                out.append(Failure(c, (w & -w).bit_length()))
    return checked, out


# --- entry points ------------------------------------------------------------

def _run(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def verify_group(gs: GeneratorSet, budget: Optional[Budget] = None, jobs: Optional[int] = None) -> VerificationReport:
    """Test nonzero span elements of ``gs`` against every cyclic window of length ``t``.

    Exhaustive when ``t <= budget.max_exhaustive_t``, otherwise
    ``budget.sample_count`` seeded uniform nonzero combos.  Each failure
    records the combo and the smallest start of a missed window.
    """
    budget = budget or Budget()
    jobs = default_jobs() if jobs is None else max(1, jobs)
    n, t, masks = gs.n, gs.t, gs.masks
    start = time.perf_counter()
    rank_ok = gf2_rank(masks) == t

    if t <= budget.max_exhaustive_t:
        total = 1 << t
        tasks = [(masks, n, lo, hi) for lo, hi in _split(1, total, jobs)]
        parts = _run(_exhaustive_range, tasks, jobs)
        failures = sorted((f for p in parts for f in p), key=lambda f: f.combo)
        if n <= 64:
            distinct = len(np.unique(span_u64(masks))) == total
        else:
            distinct = _distinct_span_count(masks) == total
        report = VerificationReport(
            n, t, "exhaustive", total - 1, failures,
            group_order_confirmed=rank_ok and distinct,
        )
    else:
        chunks = []
        remaining, idx = budget.sample_count, 0
        while remaining > 0:
            size = min(SAMPLE_CHUNK, remaining)
            chunks.append((idx, size))
            remaining -= size
            idx += 1
        groups = [chunks[lo:hi] for lo, hi in _split(0, len(chunks), jobs)] if chunks else []
        tasks = [(masks, n, budget.seed, g) for g in groups]
        parts = _run(_sampled_chunks, tasks, jobs)
        checked = sum(p[0] for p in parts)
        failures = sorted((f for p in parts for f in p[1]), key=lambda f: f.combo)
        report = VerificationReport(
            n, t, "sampled", checked, failures,
            group_order_confirmed=rank_ok, seed=budget.seed,
        )
    report.elapsed = time.perf_counter() - start
    return report


def _distinct_span_count(masks: Sequence[int]) -> int:
    seen = {0}
    for m in masks:
        seen |= {v ^ m for v in seen}
    return len(seen)


@dataclass(frozen=True)
class CosetReport:
    n: int
    t: int
    coset_count: int
    agreement_violations: int
    uniform_coset_size: bool

    @property
    def expected_cosets(self) -> int:
        return 1 << (self.n - self.t)

    @property
    def passed(self) -> bool:
        return (
            self.coset_count == self.expected_cosets
            and self.agreement_violations == 0
            and self.uniform_coset_size
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "coset_count": self.coset_count,
            "expected_cosets": self.expected_cosets,
            "agreement_violations": self.agreement_violations,
            "uniform_coset_size": self.uniform_coset_size,
        }


def verify_coset_partition(gs: GeneratorSet, max_n: int = 20) -> CosetReport:
    """Canonicalize all of ``P[n]`` and check that no coset holds an agreeing pair.

    Within each coset the members are XORed against the coset's smallest
    member; ``agreement_violations`` counts nonzero differences that avoid
    some window of length ``t``.
    """
    n, t = gs.n, gs.t
    if n > max_n:
        raise GuardError(f"n={n} exceeds the enumeration guard {max_n}")
    subsets = np.arange(1 << n, dtype=np.uint64)
    lookup = span_u64(gs.masks)
    reps = subsets ^ lookup[(subsets & np.uint64((1 << t) - 1)).astype(np.int64)]
    if np.any(reps & np.uint64((1 << t) - 1)):
        raise AssertionError("representative meets [1, t]; generators are not triangular")

    order = np.argsort(reps, kind="stable")
    sorted_reps = reps[order]
    starts = np.flatnonzero(np.r_[True, sorted_reps[1:] != sorted_reps[:-1]])
    sizes = np.diff(np.r_[starts, len(sorted_reps)])
    anchors = np.repeat(subsets[order][starts], sizes)
    diffs = subsets[order] ^ anchors
    diffs = diffs[diffs != 0]
    violations = int(np.count_nonzero(~hits_all_blocks_u64(diffs, n, t))) if len(diffs) else 0
    return CosetReport(
        n=n,
        t=t,
        coset_count=len(starts),
        agreement_violations=violations,
        uniform_coset_size=bool(np.all(sizes == (1 << t))),
    )
