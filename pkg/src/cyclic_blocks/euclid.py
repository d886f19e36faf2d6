"""Euclid decomposition of ``(n, t)`` and the alternating partial sums.

Running Euclid on ``n`` and ``t`` gives quotients ``q_1..q_k`` and
remainders ``t = r_0 > r_1 > ... > r_{k-1} > r_k = 0``.  The partial sums

    n_m = q_1 r_0 + q_3 r_2 + ... + q_{2m-1} r_{2m-2}     (2m - 1 <= k)
    t_m = q_2 r_1 + q_4 r_3 + ... + q_{2m}   r_{2m-1}     (2m <= k)

satisfy ``n = n_m + r_{2m-1}`` and ``t = t_m + r_{2m}``; they delimit the
intervals on which the generators of the hitting subgroup are defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class EuclidDecomposition:
    n: int
    t: int
    k: int
    quotients: Tuple[int, ...]  # q_1..q_k, stored 0-based
    remainders: Tuple[int, ...]  # r_0..r_k
    partial_n: Tuple[int, ...]  # n_0..n_M with 2M - 1 <= k
    partial_t: Tuple[int, ...]  # t_0..t_M with 2M <= k

    def q(self, i: int) -> int:
        """Quotient ``q_i`` with the 1-based index used in the recurrence."""
        if not 1 <= i <= self.k:
            raise IndexError(f"q_{i} undefined for k={self.k}")
        return self.quotients[i - 1]

    def r(self, i: int) -> int:
        if not 0 <= i <= self.k:
            raise IndexError(f"r_{i} undefined for k={self.k}")
        return self.remainders[i]

    @property
    def gcd(self) -> int:
        return self.remainders[self.k - 1]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "quotients": list(self.quotients),
            "remainders": list(self.remainders),
            "partial_n": list(self.partial_n),
            "partial_t": list(self.partial_t),
        }


def euclid_decompose(n: int, t: int) -> EuclidDecomposition:
    """Run Euclid's algorithm on ``(n, t)`` and materialize the partial sums.

    >>> d = euclid_decompose(13, 5)
    >>> d.quotients, d.remainders, d.partial_n, d.partial_t
    ((2, 1, 1, 2), (5, 3, 2, 1, 0), (0, 10, 12), (0, 3, 5))
    """
    if isinstance(n, bool) or isinstance(t, bool) or not isinstance(n, int) or not isinstance(t, int):
        raise DomainError(f"n and t must be integers, got n={n!r}, t={t!r}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 1 <= t <= n:
        raise DomainError(f"t must satisfy 1 <= t <= n, got t={t}, n={n}")

    quotients = []
    remainders = [t]
    dividend, divisor = n, t
    while True:
        q, r = divmod(dividend, divisor)
        quotients.append(q)
        remainders.append(r)
        if r == 0:
            break
        dividend, divisor = divisor, r
    k = len(quotients)

    partial_n = [0]
    m = 1
    while 2 * m - 1 <= k:
        partial_n.append(partial_n[-1] + quotients[2 * m - 2] * remainders[2 * m - 2])
        m += 1
    partial_t = [0]
    m = 1
    while 2 * m <= k:
        partial_t.append(partial_t[-1] + quotients[2 * m - 1] * remainders[2 * m - 1])
        m += 1

    return EuclidDecomposition(
        n=n,
        t=t,
        k=k,
        quotients=tuple(quotients),
        remainders=tuple(remainders),
        partial_n=tuple(partial_n),
        partial_t=tuple(partial_t),
    )


def least_positive_residue(y: int, z: int) -> int:
    """Least strictly positive residue of ``y`` modulo ``z``; lies in ``[1, z]``."""
    if z <= 0:
        raise DomainError(f"modulus must be positive, got {z}")
    return (y - 1) % z + 1
