"""Simple undirected graphs and the structural queries the reduction relies on.

Vertices are non-negative integers. An edge is the canonical pair ``(a, b)``
with ``a < b``; use :func:`edge` to build one from endpoints in any order.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .errors import InputError, UsageError

if TYPE_CHECKING:
    from .coloring import Params

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Mutable simple graph backed by adjacency sets.

    Removing an edge or vertex never renumbers anything else, so ids held by
    callers stay valid across unrelated mutations.
    """

    __slots__ = ("_adj", "_m", "_next", "_big")

    def __init__(self, edges: Iterable[tuple[int, int]] = (), vertices: Iterable[int] = ()):
        self._adj: dict[int, set[int]] = {}
        self._m = 0
        self._next = 0
        self._big = 0  # vertices of degree >= 2, kept current by every mutation
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    # -- mutation -------------------------------------------------------
    def add_vertex(self, v: int) -> None:
        if v not in self._adj:
            if not isinstance(v, int) or v < 0:
                raise InputError(f"vertex ids must be non-negative integers, got {v!r}")
            self._adj[v] = set()
            if v >= self._next:
                self._next = v + 1

    def new_vertex(self) -> int:
        """Add and return a vertex with an id never used by this graph."""
        v = self._next
        self._adj[v] = set()
        self._next = v + 1
        return v

    def add_edge(self, u: int, v: int) -> bool:
        """Add ``uv``; returns False if it was already present."""
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        self.add_vertex(u)
        self.add_vertex(v)
        if v in self._adj[u]:
            return False
        au, av = self._adj[u], self._adj[v]
        au.add(v)
        av.add(u)
        self._m += 1
        self._big += (len(au) == 2) + (len(av) == 2)
        return True

    def remove_edge(self, u: int, v: int) -> None:
        try:
            self._adj[u].remove(v)
        except KeyError:
            raise UsageError(f"edge {edge(u, v)} not in graph") from None
        self._adj[v].discard(u)
        self._m -= 1
        self._big -= (len(self._adj[u]) == 1) + (len(self._adj[v]) == 1)

    def remove_vertex(self, v: int) -> None:
        for x in list(self._adj[v]):
            self.remove_edge(v, x)
        del self._adj[v]

    # -- queries --------------------------------------------------------
    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(n={self.number_of_vertices()}, m={self._m})"

    def has_edge(self, u: int, v: int) -> bool:
        nb = self._adj.get(u)
        return nb is not None and v in nb

    def neighbors(self, v: int) -> set[int]:
        """The live neighbor set of ``v``; do not mutate it."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def edges(self) -> list[Edge]:
        return sorted((u, v) for u, nb in self._adj.items() for v in nb if u < v)

    def number_of_vertices(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return self._m

    def max_degree(self) -> int:
        return max(map(len, self._adj.values()), default=0)

    def measure(self) -> int:
        """Number of vertices of degree at least two (the induction measure)."""
        return self._big

    def leaf_neighbors(self, v: int) -> list[int]:
        adj = self._adj
        return sorted(x for x in adj[v] if len(adj[x]) == 1)

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g._adj = {v: set(nb) for v, nb in self._adj.items()}
        g._m = self._m
        g._next = self._next
        g._big = self._big
        return g


def build_graph(edge_list: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> Graph:
    """Deduplicate ``edge_list`` into a simple graph; self-loops are rejected."""
    return Graph(edge_list, vertices)


# -- degeneracy ------------------------------------------------------------

def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Min-degree peeling. Returns ``(k, order)``.

    Every vertex has at most ``k`` neighbors that appear later in ``order``.
    Ties are broken by smallest id so the order is reproducible.
    """
    adj = g._adj
    deg = {v: len(nb) for v, nb in adj.items()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed: set[int] = set()
    order: list[int] = []
    k = 0
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue  # stale entry
        k = max(k, d)
        order.append(v)
        removed.add(v)
        for x in adj[v]:
            if x not in removed:
                deg[x] -= 1
                heapq.heappush(heap, (deg[x], x))
    return k, order


def _peels_at(adj: dict[int, set[int]], k: int) -> bool:
    """True if repeatedly deleting vertices of degree <= k empties the graph."""
    deg = {v: len(nb) for v, nb in adj.items()}
    queue = deque(v for v, d in deg.items() if d <= k)
    gone = 0
    while queue:
        v = queue.popleft()
        gone += 1
        for x in adj[v]:
            d = deg[x]
            deg[x] = d - 1
            if d == k + 1:
                queue.append(x)
    return gone == len(adj)


def _is_forest(g: Graph) -> bool:
    n, m = g.number_of_vertices(), g.number_of_edges()
    if m > n - 1:
        return False
    parent = {v: v for v in g._adj}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, nb in g._adj.items():
        for v in nb:
            if u < v:
                a, b = find(u), find(v)
                if a == b:
                    return False
                parent[a] = b
    return True


def degeneracy_number(g: Graph) -> int:
    """The degeneracy alone; cheaper than :func:`degeneracy` for small values."""
    if not _peels_at(g._adj, 2):
        return degeneracy(g)[0]
    if g.number_of_edges() == 0:
        return 0
    return 1 if _is_forest(g) else 2


def is_two_degenerate(g: Graph) -> bool:
    return _peels_at(g._adj, 2)


# -- distance-two neighbourhoods ------------------------------------------

def n2_edges(g: Graph, e: Edge) -> set[Edge]:
    """Edges ``xy != e`` with an endpoint adjacent to an endpoint of ``e``.

    This is the conflict set of ``e``: a strong edge-coloring must give ``e``
    a color absent from all of these.
    """
    u, v = e
    if not g.has_edge(u, v):
        raise UsageError(f"edge {e} not in graph")
    adj = g._adj
    out = set()
    for x in adj[u] | adj[v]:
        for y in adj[x]:
            out.add((x, y) if x < y else (y, x))
    out.discard(edge(u, v))
    return out


# -- special vertices and capacity ----------------------------------------

def _is_special(adj: dict[int, set[int]], v: int) -> bool:
    nb = adj[v]
    if len(nb) <= 2:
        return bool(nb)
    big = 0
    for x in nb:
        if len(adj[x]) > 2:
            big += 1
            if big > 2:
                return False
    return True


def is_special(g: Graph, v: int) -> bool:
    return _is_special(g._adj, v)


def special_vertices(g: Graph) -> set[int]:
    """Vertices (of positive degree) with at most two neighbors of degree > 2."""
    adj = g._adj
    return {v for v in adj if _is_special(adj, v)}


@dataclass(frozen=True)
class SpecialContext:
    """A special vertex ``u`` with its degree-2 neighbors grouped by far end.

    ``groups[i]`` lists the common 2-neighbors of ``u`` and ``sharers[i]``;
    groups are sorted by size, largest first, so ``t[0]`` is the capacity
    realized at ``u``. ``leaves`` holds any leaf neighbors of ``u`` (the
    reducer only dispatches on contexts without them).
    """

    u: int
    big: tuple[int, ...]
    sharers: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]
    leaves: tuple[int, ...] = ()
    overlap: bool = field(default=False)

    @property
    def t(self) -> tuple[int, ...]:
        return tuple(len(gr) for gr in self.groups)

    @property
    def t1(self) -> int:
        return len(self.groups[0]) if self.groups else 0

    @property
    def s(self) -> int:
        return len(self.groups)

    def group_edges(self) -> list[Edge]:
        return [edge(self.u, v) for gr in self.groups for v in gr]

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "big": list(self.big),
            "sharers": list(self.sharers),
            "groups": [list(gr) for gr in self.groups],
            "t": list(self.t),
            "overlap": self.overlap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SpecialContext:
        return cls(
            u=d["u"],
            big=tuple(d["big"]),
            sharers=tuple(d["sharers"]),
            groups=tuple(tuple(gr) for gr in d["groups"]),
            overlap=d.get("overlap", False),
        )


def context_at(g: Graph, u: int) -> SpecialContext:
    """Group the neighbors of ``u`` into big neighbors, leaves and sharer groups."""
    adj = g._adj
    big, leaves = [], []
    by_w: dict[int, list[int]] = {}
    for v in adj[u]:
        d = len(adj[v])
        if d > 2:
            big.append(v)
        elif d == 1:
            leaves.append(v)
        else:
            a, b = adj[v]
            w = b if a == u else a
            by_w.setdefault(w, []).append(v)
    if len(big) > 2:
        raise UsageError(f"vertex {u} is not special")
    sharers = sorted(by_w, key=lambda w: (-len(by_w[w]), w))
    big.sort()
    return SpecialContext(
        u=u,
        big=tuple(big),
        sharers=tuple(sharers),
        groups=tuple(tuple(sorted(by_w[w])) for w in sharers),
        leaves=tuple(sorted(leaves)),
        overlap=any(w in big for w in sharers),
    )


def _share_counts(g: Graph) -> dict[int, int]:
    """Map each special ``u`` with a 2-neighbor to its best sharing count."""
    adj = g._adj
    pairs: dict[tuple[int, int], int] = {}
    for v, nb in adj.items():
        if len(nb) == 2:
            a, b = nb
            pairs[(a, b)] = pairs.get((a, b), 0) + 1
            pairs[(b, a)] = pairs.get((b, a), 0) + 1
    best: dict[int, int] = {}
    special: dict[int, bool] = {}
    for (u, _), c in pairs.items():
        ok = special.get(u)
        if ok is None:
            ok = special[u] = _is_special(adj, u)
        if ok and c > best.get(u, 0):
            best[u] = c
    return best


def capacity(g: Graph) -> int:
    """Largest number of 2-neighbors a special vertex shares with one other vertex."""
    return max(_share_counts(g).values(), default=0)


def capacity_context(g: Graph) -> SpecialContext | None:
    """Context at a special vertex realizing the capacity, or None if it is 0.

    Among vertices realizing it, the one of smallest degree wins, then the
    smallest id.
    """
    best = None
    for u, c in _share_counts(g).items():
        key = (-c, len(g._adj[u]), u)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return context_at(g, best[2])


# -- theorem hypotheses ---------------------------------------------------

@dataclass
class ClassReport:
    in_class: bool
    reasons: list[str]
    capacity: int
    delta: int
    degeneracy: int

    def __bool__(self) -> bool:
        return self.in_class


def class_check(g: Graph, p: Params) -> ClassReport:
    """Check the hypotheses of the bound for ``g`` under ``p``.

    2-degeneracy; every vertex of degree ``d > D`` has at least ``d - D``
    leaf neighbors; and the max degree is at most ``D + 2`` when the capacity
    reaches the threshold, at most ``D + tau`` otherwise.
    """
    reasons = []
    k = degeneracy_number(g)
    if k > 2:
        reasons.append(f"not 2-degenerate (degeneracy {k})")
    adj = g._adj
    for v in sorted(adj):
        d = len(adj[v])
        if d > p.D:
            leaves = sum(1 for x in adj[v] if len(adj[x]) == 1)
            if leaves < d - p.D:
                reasons.append(f"vertex {v} has degree {d} > D={p.D} but only {leaves} leaves")
    cap = capacity(g)
    delta = g.max_degree()
    if p.reaches_tau(cap):
        if delta > p.D + 2:
            reasons.append(f"capacity {cap} >= tau but max degree {delta} > D+2={p.D + 2}")
    elif delta > p.low_capacity_degree_cap:
        reasons.append(
            f"capacity {cap} < tau but max degree {delta} > D+tau (cap {p.low_capacity_degree_cap})"
        )
    return ClassReport(not reasons, reasons, cap, delta, k)


# -- incremental structure ------------------------------------------------

class WatchedGraph(Graph):
    """A graph that reports each edge mutation to an attached index."""

    __slots__ = ("_watch",)

    @classmethod
    def adopt(cls, g: Graph) -> WatchedGraph:
        h = cls.__new__(cls)
        h._adj, h._m, h._next, h._big = g._adj, g._m, g._next, g._big
        h._watch = None
        return h

    def add_edge(self, u: int, v: int) -> bool:
        w = self._watch
        if w is None:
            return super().add_edge(u, v)
        adj = self._adj
        du = len(adj[u]) if u in adj else 0
        dv = len(adj[v]) if v in adj else 0
        added = super().add_edge(u, v)
        if added:
            w._changed(u, v, du, dv, +1)
        return added

    def remove_edge(self, u: int, v: int) -> None:
        w = self._watch
        if w is None:
            return super().remove_edge(u, v)
        adj = self._adj
        du, dv = len(adj.get(u, ())), len(adj.get(v, ()))
        super().remove_edge(u, v)
        w._changed(u, v, du, dv, -1)

    def detach(self) -> None:
        self._watch = None


class StructureIndex:
    """Specialness, sharing counts, pendant hosts and degree facts of a graph.

    After an edge ``ab`` changes, only ``a``, ``b`` and their neighbors can
    change specialness, best sharing count, pendant-host status or the leaf
    condition, so :meth:`refresh` recomputes just those vertices. The
    degeneracy stays at most two while every added edge hangs a new leaf,
    which is all the reduction ever adds; any other insertion forces a full
    recheck.
    """

    def __init__(self, g: WatchedGraph, D: int | None = None):
        self.g = g
        self.D = D
        adj = g._adj
        self.hist: dict[int, int] = {}
        for nb in adj.values():
            if nb:
                self.hist[len(nb)] = self.hist.get(len(nb), 0) + 1
        self.top = max(self.hist, default=0)
        self.special: dict[int, bool] = {}
        self.best: dict[int, int] = {}
        self.heap: list[tuple[int, int, int]] = []
        self.hosts: set[int] = set()
        self.short: set[int] = set()
        self.degenerate_ok: bool | None = None
        self.dirty: set[int] = set(adj)
        g._watch = self
        self.refresh()

    def _changed(self, u: int, v: int, du: int, dv: int, sign: int) -> None:
        hist = self.hist
        for d in (du, dv):
            if d:
                hist[d] -= 1
            nd = d + sign
            if nd:
                hist[nd] = hist.get(nd, 0) + 1
                if nd > self.top:
                    self.top = nd
        if sign > 0 and du and dv:
            self.degenerate_ok = None
        adj = self.g._adj
        dirty = self.dirty
        dirty.add(u)
        dirty.add(v)
        dirty.update(adj[u])
        dirty.update(adj[v])

    def refresh(self) -> None:
        if not self.dirty:
            return
        dirty, self.dirty = self.dirty, set()
        adj = self.g._adj
        special, best, hosts, short = self.special, self.best, self.hosts, self.short
        live = []
        for x in dirty:
            if x in adj:
                special[x] = _is_special(adj, x)
                live.append(x)
            else:
                special.pop(x, None)
                best.pop(x, None)
                hosts.discard(x)
                short.discard(x)
        D = self.D
        for x in live:
            nb = adj[x]
            c = 0
            if special[x]:
                counts: dict[int, int] = {}
                for v in nb:
                    vn = adj[v]
                    if len(vn) == 2:
                        a, b = vn
                        w = b if a == x else a
                        counts[w] = counts.get(w, 0) + 1
                if counts:
                    c = max(counts.values())
            if c:
                heapq.heappush(self.heap, (-c, len(nb), x))
                best[x] = c
            else:
                best.pop(x, None)
            leaves = sum(1 for y in nb if len(adj[y]) == 1)
            if special[x] and len(nb) >= 2 and leaves:
                hosts.add(x)
            else:
                hosts.discard(x)
            if D is not None and len(nb) > D and leaves < len(nb) - D:
                short.add(x)
            else:
                short.discard(x)

    # -- queries ------------------------------------------------------------
    def max_degree(self) -> int:
        hist = self.hist
        while self.top > 0 and not hist.get(self.top):
            self.top -= 1
        return self.top

    def _top_key(self) -> tuple[int, int, int] | None:
        self.refresh()
        adj, best, heap = self.g._adj, self.best, self.heap
        while heap:
            negc, d, u = heap[0]
            if best.get(u) == -negc and u in adj and len(adj[u]) == d:
                return heap[0]
            heapq.heappop(heap)
        return None

    def capacity(self) -> int:
        key = self._top_key()
        return -key[0] if key else 0

    def capacity_context(self) -> SpecialContext | None:
        key = self._top_key()
        return context_at(self.g, key[2]) if key else None

    def peel_batch(self) -> list[Edge]:
        self.refresh()
        adj = self.g._adj
        return sorted(edge(x, y) for y in self.hosts for x in adj[y] if len(adj[x]) == 1)

    def in_class(self, p: Params) -> bool:
        """Fast form of ``class_check(g, p).in_class``."""
        self.refresh()
        if self.degenerate_ok is None:
            self.degenerate_ok = is_two_degenerate(self.g)
        if not self.degenerate_ok or self.short:
            return False
        cap = self.capacity()
        limit = p.D + 2 if p.reaches_tau(cap) else p.low_capacity_degree_cap
        return self.max_degree() <= limit
