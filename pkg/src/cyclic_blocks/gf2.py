"""Rank over GF(2) for rows packed into ``int`` bitsets."""

from __future__ import annotations

from typing import Iterable


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank of the row space over GF(2).

    Each row is reduced against a basis keyed by lowest set bit, so a row
    is independent iff it does not reduce to zero.
    """
    basis = {}
    for row in rows:
        while row:
            low = row & -row
            pivot = basis.get(low)
            if pivot is None:
                basis[low] = row
                break
            row ^= pivot
    return len(basis)
