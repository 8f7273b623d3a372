"""Exact strong chromatic index on small graphs, plus a clique lower bound.

The strong chromatic index of ``G`` is the chromatic number of its conflict
graph (edges of ``G`` adjacent when one lies in the other's conflict set),
so the exact search is DSATUR branch-and-bound on that graph.
"""

from __future__ import annotations

import time

from .coloring import Coloring, greedy_color
from .errors import ResourceLimitError
from .graph import Edge, Graph, n2_edges

DEFAULT_MAX_EDGES = 16


def conflict_graph(g: Graph) -> tuple[list[Edge], list[set[int]]]:
    """Edges of ``g`` (sorted) and, per edge index, the indices of conflicting edges."""
    edges = g.edges()
    index = {e: i for i, e in enumerate(edges)}
    return edges, [{index[f] for f in n2_edges(g, e)} for e in edges]


def conflict_clique_lower_bound(g: Graph) -> int:
    """Size of a greedily grown clique in the conflict graph.

    Tries every edge as a seed and repeatedly adds the candidate with the
    most conflicts inside the remaining candidate set.
    """
    edges, nbr = conflict_graph(g)
    best = 0
    for seed in range(len(edges)):
        size = 1
        cand = set(nbr[seed])
        while cand:
            x = max(cand, key=lambda y: (len(nbr[y] & cand), -y))
            size += 1
            cand &= nbr[x]
        best = max(best, size)
    return best


def exact_strong_index(
    g: Graph, max_edges: int = DEFAULT_MAX_EDGES, time_budget: float | None = None
) -> tuple[int, Coloring]:
    """Minimum number of colors in a strong edge-coloring, with a witness.

    Raises ResourceLimitError when ``g`` has more than ``max_edges`` edges
    or the search exceeds ``time_budget`` seconds; the error carries the
    best bounds known at that point.
    """
    m = g.number_of_edges()
    lower = conflict_clique_lower_bound(g) if m else 0
    greedy = greedy_color(g)
    upper = greedy.num_colors()
    if m > max_edges:
        raise ResourceLimitError(f"{m} edges exceeds the limit of {max_edges}", lower, upper)
    if lower == upper:
        return upper, greedy
    edges, nbr = conflict_graph(g)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    best = [upper, [greedy[e] for e in edges]]
    color = [0] * m
    # sat[i][c] counts colored conflict-neighbors of i holding color c
    sat = [[0] * (upper + 2) for _ in range(m)]
    nsat = [0] * m
    ticks = [0]

    def pick() -> int:
        i_best, key_best = -1, None
        for i in range(m):
            if color[i] == 0:
                key = (nsat[i], len(nbr[i]), -i)
                if key_best is None or key > key_best:
                    i_best, key_best = i, key
        return i_best

    def set_color(i: int, c: int, delta: int) -> None:
        for j in nbr[i]:
            row = sat[j]
            if delta > 0:
                if row[c] == 0:
                    nsat[j] += 1
                row[c] += 1
            else:
                row[c] -= 1
                if row[c] == 0:
                    nsat[j] -= 1

    def search(done: int, used: int) -> None:
        ticks[0] += 1
        if deadline is not None and ticks[0] % 1024 == 1 and time.monotonic() > deadline:
            raise ResourceLimitError("time budget exhausted", lower, best[0])
        if done == m:
            best[0], best[1] = used, list(color)
            return
        i = pick()
        for c in range(1, min(used + 1, best[0] - 1) + 1):
            if sat[i][c]:
                continue
            color[i] = c
            set_color(i, c, 1)
            search(done + 1, max(used, c))
            set_color(i, c, -1)
            color[i] = 0
            if best[0] == lower:
                return

    search(0, 0)
    return best[0], Coloring(dict(zip(edges, best[1]))) if m else Coloring()
