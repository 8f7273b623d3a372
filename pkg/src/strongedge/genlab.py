"""Seeded generators for 2-degenerate graphs and theorem-class instances.

All randomness comes from :class:`SplitMix64` (Steele, Lea and Flood's
64-bit generator: state increment ``0x9E3779B97F4A7C15``, finalizer
multipliers ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``). Bounded
draws use rejection sampling, so a given seed yields the same graph on any
platform and in any language that reimplements the same steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import Params
from .errors import InputError
from .graph import Graph, capacity, class_check, context_at, special_vertices

_MASK = (1 << 64) - 1

RANDOM2DEG, NAMED, CLASS = "Random2Deg", "Named", "ClassInstance"
CASE1_RICH, CASE2_RICH = "Case1Rich", "Case2Rich"
NAMED_KINDS = ("path", "cycle", "star", "k2n", "theta", "book")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: list, k: int) -> list:
        """``k`` distinct elements by a partial Fisher-Yates pass over a copy."""
        pool = list(items)
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int = 0
    m: int | None = None
    seed: int = 0
    regime: str | None = None
    params: Params | None = None
    kind: str | None = None


def generate(spec: GenSpec) -> Graph:
    if spec.model == RANDOM2DEG:
        return gen_random_2deg(spec.n, spec.m, spec.seed)
    if spec.model == NAMED:
        return gen_named(spec.kind, spec.n)
    if spec.model == CLASS:
        if spec.params is None or spec.regime is None:
            raise InputError("class instances need params and a regime")
        return gen_class_instance(spec.params, spec.regime, spec.seed, spec.n or None)
    raise InputError(f"unknown model {spec.model!r}")


def gen_random_2deg(n: int, m: int | None, seed: int) -> Graph:
    """Random 2-degenerate graph on ``n`` vertices with exactly ``m`` edges.

    Vertex ``k`` joins ``c_k <= min(k, 2)`` distinct earlier vertices; the
    ``m`` attachment slots are a uniform subset of all available slots.
    ``m=None`` draws ``m`` uniformly from the feasible range.
    """
    if n < 0:
        raise InputError("n must be non-negative")
    max_m = 0 if n < 2 else 2 * n - 3
    rng = SplitMix64(seed)
    if m is None:
        m = rng.below(max_m + 1)
    if not 0 <= m <= max_m:
        raise InputError(f"m={m} infeasible for n={n} (need 0 <= m <= {max_m})")
    slots = [k for k in range(n) for _ in range(min(k, 2))]
    rng.shuffle(slots)
    counts = [0] * n
    for k in slots[:m]:
        counts[k] += 1
    g = Graph(vertices=range(n))
    for k in range(n):
        for x in rng.sample(list(range(k)), counts[k]):
            g.add_edge(k, x)
    return g


def gen_named(kind: str, n: int) -> Graph:
    """Fixture graphs.

    ``path`` P_n, ``cycle`` C_n, ``star`` K_{1,n} (center 0), ``k2n`` K_{2,n}
    (hubs 0 and 1), ``theta`` three internally disjoint hub-to-hub paths of
    length ``n`` (``theta 2`` is K_{2,3}), ``book`` n triangles on spine 0-1.
    """
    if kind == "path":
        _need(n >= 1, kind, n)
        return Graph([(i, i + 1) for i in range(n - 1)], range(n))
    if kind == "cycle":
        _need(n >= 3, kind, n)
        return Graph([(i, (i + 1) % n) for i in range(n)])
    if kind == "star":
        _need(n >= 0, kind, n)
        return Graph([(0, i) for i in range(1, n + 1)], [0])
    if kind == "k2n":
        _need(n >= 1, kind, n)
        return Graph([(h, i) for h in (0, 1) for i in range(2, n + 2)])
    if kind == "theta":
        _need(n >= 2, kind, n)
        g = Graph()
        nxt = 2
        for _ in range(3):
            prev = 0
            for _ in range(n - 1):
                g.add_edge(prev, nxt)
                prev, nxt = nxt, nxt + 1
            g.add_edge(prev, 1)
        return g
    if kind == "book":
        _need(n >= 1, kind, n)
        return Graph([(0, 1)] + [(h, i) for i in range(2, n + 2) for h in (0, 1)])
    raise InputError(f"unknown named graph {kind!r}; expected one of {', '.join(NAMED_KINDS)}")


def _need(ok: bool, kind: str, n: int) -> None:
    if not ok:
        raise InputError(f"n={n} out of range for {kind}")


def _regime_code(regime: str) -> int:
    if regime == CASE1_RICH:
        return 1
    if regime == CASE2_RICH:
        return 2
    raise InputError(f"unknown regime {regime!r}")


def gen_class_instance(p: Params, regime: str, seed: int, n: int | None = None) -> Graph:
    """A graph satisfying the hypotheses for ``p`` that steers the reduction.

    ``Case2Rich`` plants sites where a special vertex shares at least
    ``ceil(tau)`` 2-neighbors with one partner; ``Case1Rich`` keeps every
    such sharing below tau (possible only when tau > 1). Some instances
    decorate a high-degree vertex with leaves past ``D`` as far as the
    degree caps allow. ``n`` defaults to a draw from ``[10, 200]``.
    """
    code = _regime_code(regime)
    if code == 1 and p.tau_ceil <= 1:
        raise InputError("Case1Rich needs tau > 1 (eps < 1/2)")
    rng = SplitMix64((seed * 0x2545F4914F6CDD1D) ^ (p.D << 40) ^ (code << 60))
    if n is None:
        n = 10 + rng.below(191)
    site = 2 + p.tau_ceil
    if n < 4 or (code == 2 and n < site):
        raise InputError(f"n={n} too small for {regime} (need at least {max(4, site if code == 2 else 4)})")
    D = p.D
    g = Graph(vertices=[0])
    closed: set[int] = set()

    def open_vertices(room: int = 1) -> list[int]:
        return [v for v in g.vertices() if v not in closed and g.degree(v) + room <= D]

    sites = 0
    want_sites = max(3, n // 30) if code == 2 else 0
    leaf_budget = n // 8 if rng.chance(1, 2) else 0
    body = max(n - leaf_budget, site if code == 2 else 0)
    leaf_budget = n - body
    if code == 2:
        # the first site goes in before anything can crowd it out
        sites += _plant_site(g, rng, p, closed, open_vertices, body)
    while g.number_of_vertices() < body:
        left = body - g.number_of_vertices()
        plant = code == 2 and left >= site and sites < want_sites and (
            rng.chance(1, 4) or left <= (want_sites - sites) * site + 2
        )
        if plant and _plant_site(g, rng, p, closed, open_vertices, left):
            sites += 1
            continue
        v = g.new_vertex()
        cands = open_vertices()
        cands.remove(v)
        k = min(len(cands), 2 if rng.chance(3, 4) else 1)
        for x in rng.sample(cands, k):
            g.add_edge(v, x)

    if code == 1:
        _cap_sharing(g, p)
    cap2 = D + 2 if code == 2 else p.low_capacity_degree_cap
    while leaf_budget > 0:
        hubs = [v for v in g.vertices() if g.degree(v) >= 3 and v not in closed and g.degree(v) < cap2]
        if not hubs:
            break
        v = max(hubs, key=lambda x: (g.degree(x), -x))
        while leaf_budget > 0 and g.degree(v) < cap2:
            g.add_edge(v, g.new_vertex())
            leaf_budget -= 1
        closed.add(v)
    while leaf_budget > 0:
        # spend leftover vertex budget on isolated-edge padding kept away from hubs
        a, b = g.new_vertex(), g.new_vertex()
        g.add_edge(a, b)
        leaf_budget -= 2

    rep = class_check(g, p)
    if not rep.in_class:  # pragma: no cover - construction invariant
        raise AssertionError(f"generator produced an out-of-class graph: {rep.reasons}")
    if code == 2 and not p.reaches_tau(rep.capacity):  # pragma: no cover
        raise AssertionError("Case2Rich instance without a planted site")
    return g


def _plant_site(g: Graph, rng: SplitMix64, p: Params, closed: set[int], open_vertices, left: int) -> bool:
    """Hub ``a`` (attached by <= 2 edges, then closed) sharing >= ceil(tau) 2-neighbors with ``b``."""
    size = p.tau_ceil + rng.below(2)
    size = min(size, left - 2)
    partners = open_vertices(size)
    if size < p.tau_ceil or not partners:
        return False
    b = partners[rng.below(len(partners))]
    anchors = [x for x in open_vertices() if x != b]
    a = g.new_vertex()
    for x in rng.sample(anchors, min(len(anchors), rng.below(3))):
        g.add_edge(a, x)
    for _ in range(size):
        v = g.new_vertex()
        g.add_edge(v, a)
        g.add_edge(v, b)
        closed.add(v)
    closed.add(a)
    return True


def _cap_sharing(g: Graph, p: Params) -> None:
    """Attach a leaf to surplus common 2-neighbors until the capacity is below tau."""
    limit = p.tau_ceil - 1
    while p.reaches_tau(capacity(g)):
        for u in sorted(special_vertices(g)):
            ctx = context_at(g, u)
            if ctx.groups and len(ctx.groups[0]) > limit:
                v = ctx.groups[0][-1]
                g.add_edge(v, g.new_vertex())
                break
