"""Exact maximum clique by branch and bound with greedy-coloring bounds.

Graphs are adjacency bitsets (``adj[v]`` has bit ``u`` set iff ``u ~ v``).
Vertices are renumbered by descending degree so that the coloring pass picks
high-degree vertices first; each branch is bounded by the number of color
classes left in its candidate set.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Optional, Sequence


class _Timeout(Exception):
    pass


@dataclass
class CliqueResult:
    clique: List[int]
    upper_bound: int
    nodes: int
    timed_out: bool


def _color_sort(P: int, adj: Sequence[int]):
    """Greedy sequential coloring of ``P``; returns (vertices, colors) by ascending color."""
    verts = []
    colors = []
    U = P
    k = 0
    while U:
        k += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            U ^= low
            Q &= ~adj[v]
            Q &= ~low
            verts.append(v)
            colors.append(k)
    return verts, colors


def max_clique(
    adj: Sequence[int],
    candidates: Optional[int] = None,
    root: Sequence[int] = (),
    timeout: Optional[float] = None,
    check_every: int = 256,
) -> CliqueResult:
    """Largest clique containing ``root`` and otherwise drawn from ``candidates``.

    ``candidates`` defaults to all vertices adjacent to every root vertex.
    On timeout the best clique found so far is returned together with the
    coloring bound of the root candidate set.
    """
    nv = len(adj)
    if candidates is None:
        candidates = (1 << nv) - 1
    for r in root:
        candidates &= adj[r]

    cand = [v for v in range(nv) if candidates >> v & 1]
    cand.sort(key=lambda v: (-(adj[v] & candidates).bit_count(), v))
    index = {v: i for i, v in enumerate(cand)}
    local = []
    for v in cand:
        row = adj[v] & candidates
        bits = 0
        while row:
            low = row & -row
            bits |= 1 << index[low.bit_length() - 1]
            row ^= low
        local.append(bits)

    deadline = None if timeout is None else time.perf_counter() + timeout
    best: List[int] = []
    nodes = 0
    full = (1 << len(cand)) - 1

    # greedy seed so the first bound is meaningful
    P = full
    seed = []
    while P:
        v = (P & -P).bit_length() - 1
        seed.append(v)
        P &= local[v]
    best = seed

    root_bound = len(root) + (max(_color_sort(full, local)[1]) if cand else 0)

    def expand(R: List[int], P: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if deadline is not None and nodes % check_every == 0 and time.perf_counter() > deadline:
            raise _Timeout
        verts, colors = _color_sort(P, local)
        for idx in range(len(verts) - 1, -1, -1):
            if len(R) + colors[idx] <= len(best):
                return
            v = verts[idx]
            newP = P & local[v]
            R.append(v)
            if newP:
                expand(R, newP)
            elif len(R) > len(best):
                best = list(R)
            R.pop()
            P &= ~(1 << v)

    timed_out = False
    if cand and len(best) < root_bound - len(root):
        try:
            expand([], full)
        except _Timeout:
            timed_out = True

    clique = list(root) + [cand[v] for v in best]
    upper = root_bound if timed_out else len(clique)
    return CliqueResult(clique=clique, upper_bound=upper, nodes=nodes, timed_out=timed_out)
