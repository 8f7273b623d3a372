"""Constructive strong edge-coloring of 2-degenerate graphs within ``5D - tau + 2`` colors.

The graph is reduced one step at a time until no vertex has degree two or
more. Each step either peels pendant edges hanging off special vertices or
performs one of two surgeries around the special vertex realizing the
capacity:

* ``Case1`` (capacity below tau): delete every edge from ``u`` to its shared
  2-neighbors and pad each sharer with pendant leaves;
* ``Case2`` (capacity at least tau): delete a single such edge and pad the
  first sharer up to three pendant edges.

The base graph is a matching and takes color 1. The steps are then unwound
in reverse, extending the coloring of each reduced graph to its predecessor
by pendant color swaps followed by least-available-color assignments. Every
assignment is checked against the counting bounds that guarantee a free
color; a failed bound or an exhausted palette produces a certificate and
the run finishes with overflow colors above ``K`` rather than aborting.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .coloring import Coloring, Params, blocked_colors, least_free, verify_strong
from .errors import PreconditionError, ReplayError, UsageError
from .graph import (
    Edge,
    Graph,
    SpecialContext,
    StructureIndex,
    WatchedGraph,
    capacity,
    capacity_context,
    class_check,
    edge,
    n2_edges,
    is_special,
)

PEEL, CASE1, CASE2, BASE = "PendantPeel", "Case1", "Case2", "Base"

_MASK = (1 << 64) - 1


def _mix(u: int, v: int, c: int) -> int:
    z = (u * 0x9E3779B97F4A7C15 + v * 0xC2B2AE3D27D4EB4F + c * 0x165667B19E3779F9) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def coloring_digest(colors: dict[Edge, int]) -> str:
    """Order-independent fingerprint of a coloring."""
    return format(sum(_mix(u, v, c) for (u, v), c in colors.items()) & _MASK, "016x")


def graph_digest(g: Graph) -> str:
    h = hashlib.sha256()
    h.update(f"{g.number_of_vertices()};".encode())
    for u, v in g.edges():
        h.update(f"{u},{v};".encode())
    return h.hexdigest()[:16]


class _Tracked:
    """A coloring whose fingerprint is maintained under every update."""

    def __init__(self, col: Coloring):
        self.col = col
        self.fp = 0
        for (u, v), c in col.colors.items():
            self.fp = (self.fp + _mix(u, v, c)) & _MASK

    @property
    def colors(self) -> dict[Edge, int]:
        return self.col.colors

    def set(self, e: Edge, c: int) -> None:
        old = self.col.colors.get(e)
        if old is not None:
            self.fp = (self.fp - _mix(e[0], e[1], old)) & _MASK
        self.col.colors[e] = c
        self.fp = (self.fp + _mix(e[0], e[1], c)) & _MASK

    def unset(self, e: Edge) -> None:
        old = self.col.colors.pop(e, None)
        if old is not None:
            self.fp = (self.fp - _mix(e[0], e[1], old)) & _MASK

    def swap(self, e: Edge, f: Edge) -> None:
        a, b = self.col.colors[e], self.col.colors[f]
        self.set(e, b)
        self.set(f, a)

    def digest(self) -> str:
        return format(self.fp, "016x")


@dataclass
class ReductionStep:
    index: int
    kind: str
    context: SpecialContext | None = None
    peeled: list[Edge] = field(default_factory=list)
    removed_edges: list[Edge] = field(default_factory=list)
    added_pendants: dict[int, list[int]] = field(default_factory=dict)
    measure_before: int = 0
    measure_after: int = 0
    delta_before: int = 0
    subcase: str | None = None
    swaps: list[tuple[Edge, Edge]] = field(default_factory=list)
    uncolored: list[Edge] = field(default_factory=list)
    recolored: list[tuple[Edge, int]] = field(default_factory=list)
    checks: list[list] = field(default_factory=list)
    certificates: list[dict] = field(default_factory=list)
    digest: str = ""

    def added_vertices(self) -> list[int]:
        return [x for w in self.added_pendants for x in self.added_pendants[w]]


@dataclass
class RunResult:
    coloring: Coloring | None
    colors_used: int
    budget_met: bool
    trace: list[ReductionStep]
    diagnostics: list[dict]
    params: Params
    graph_digest: str

    def count(self, kind: str) -> int:
        return sum(1 for st in self.trace if st.kind == kind)


def dispatch(ctx: SpecialContext, p: Params) -> str:
    if ctx.t1 < 1:
        raise UsageError("context has no shared 2-neighbors")
    return CASE2 if p.reaches_tau(ctx.t1) else CASE1


# -- reduction surgery ----------------------------------------------------

def _peel_batch(g: Graph) -> list[Edge]:
    adj = g._adj
    batch = []
    ok: dict[int, bool] = {}
    for x, nb in adj.items():
        if len(nb) == 1:
            (y,) = nb
            if len(adj[y]) < 2:
                continue
            s = ok.get(y)
            if s is None:
                s = ok[y] = is_special(g, y)
            if s:
                batch.append(edge(x, y))
    batch.sort()
    return batch


def _peel_in_place(g: Graph, idx: StructureIndex | None = None) -> list[Edge]:
    """Strip pendant edges at special vertices of degree >= 2.

    Repeats while the measure is unchanged, so either the measure has dropped
    or no special vertex of degree >= 2 keeps a leaf.
    """
    m0 = g.measure()
    peeled: list[Edge] = []
    while True:
        batch = idx.peel_batch() if idx else _peel_batch(g)
        if not batch:
            break
        for e in batch:
            g.remove_edge(*e)
        peeled.extend(batch)
        if g.measure() < m0:
            break
    return peeled


def pendant_peel(g: Graph, p: Params | None = None) -> tuple[Graph, ReductionStep] | None:
    """Peel pendant edges at special vertices; None if there are none."""
    h = g.copy()
    before = g.measure()
    peeled = _peel_in_place(h)
    if not peeled:
        return None
    step = ReductionStep(
        index=0,
        kind=PEEL,
        peeled=peeled,
        measure_before=before,
        measure_after=h.measure(),
        delta_before=g.max_degree(),
    )
    return h, step


def _pad(g: Graph, w: int, k: int) -> list[int]:
    leaves = []
    for _ in range(k):
        x = g.new_vertex()
        g.add_edge(w, x)
        leaves.append(x)
    return leaves


def _case1_in_place(g: Graph, ctx: SpecialContext, p: Params, step: ReductionStep) -> None:
    adj = g._adj
    removed = ctx.group_edges()
    for e in removed:
        g.remove_edge(*e)
    step.removed_edges = removed
    cap = p.low_capacity_degree_cap
    for w, group in zip(ctx.sharers, ctx.groups):
        members = set(group)
        own = sum(1 for x in adj[w] if len(adj[x]) == 1 and x not in members)
        k = min(max(0, p.tau_ceil - own), max(0, cap - len(adj[w])))
        if k:
            step.added_pendants[w] = _pad(g, w, k)
        total = sum(1 for x in adj[w] if len(adj[x]) == 1)
        if total < p.tau_ceil:
            step.certificates.append(
                {"kind": "pendant_quota", "vertex": w, "pendants": total, "quota": p.tau_ceil,
                 "degree": len(adj[w]), "cap": cap}
            )


def _case2_in_place(g: Graph, ctx: SpecialContext, p: Params, step: ReductionStep) -> None:
    adj = g._adj
    w1, v11 = ctx.sharers[0], ctx.groups[0][0]
    g.remove_edge(ctx.u, v11)
    step.removed_edges = [edge(ctx.u, v11)]
    pend = sum(1 for x in adj[w1] if len(adj[x]) == 1)
    k = min(max(0, 3 - pend), 2, max(0, p.D + 2 - len(adj[w1])))
    if k:
        step.added_pendants[w1] = _pad(g, w1, k)
    if pend + k < 3:
        step.certificates.append(
            {"kind": "pendant_quota", "vertex": w1, "pendants": pend + k, "quota": 3,
             "degree": len(adj[w1]), "cap": p.D + 2}
        )


def build_gprime_case1(g: Graph, ctx: SpecialContext, p: Params) -> tuple[Graph, ReductionStep]:
    h = g.copy()
    step = ReductionStep(index=0, kind=CASE1, context=ctx, measure_before=g.measure(),
                         delta_before=g.max_degree())
    _case1_in_place(h, ctx, p, step)
    step.measure_after = h.measure()
    return h, step


def build_gprime_case2(g: Graph, ctx: SpecialContext, p: Params) -> tuple[Graph, ReductionStep]:
    h = g.copy()
    step = ReductionStep(index=0, kind=CASE2, context=ctx, measure_before=g.measure(),
                         delta_before=g.max_degree())
    _case2_in_place(h, ctx, p, step)
    step.measure_after = h.measure()
    return h, step


def _reduce_once(work: Graph, p: Params, index: int, idx: StructureIndex) -> ReductionStep:
    before = work.measure()
    delta = idx.max_degree()
    peeled = _peel_in_place(work, idx)
    after_peel = work.measure()
    if peeled and after_peel < before:
        return ReductionStep(index=index, kind=PEEL, peeled=peeled, measure_before=before,
                             measure_after=after_peel, delta_before=delta)
    ctx = idx.capacity_context()
    if ctx is None:
        # Every 2-degenerate graph without pendants at special vertices has a
        # shared 2-neighbor; reaching here means that claim failed.
        step = ReductionStep(index=index, kind=BASE, peeled=peeled, measure_before=before,
                             measure_after=after_peel, delta_before=delta)
        step.certificates.append({"kind": "no_context", "measure": after_peel})
        return step
    kind = dispatch(ctx, p)
    step = ReductionStep(index=index, kind=kind, context=ctx, peeled=peeled,
                         measure_before=before, delta_before=delta)
    if kind == CASE1:
        _case1_in_place(work, ctx, p, step)
    else:
        _case2_in_place(work, ctx, p, step)
    step.measure_after = work.measure()
    return step


# -- counting certificates ------------------------------------------------

@dataclass
class CountState:
    """Quantities around one Case 1 assignment to ``u v_{i,j}`` (1-based i, j)."""

    edge: Edge
    i: int
    j: int
    n2: int
    distinct: int
    d_u: int
    d_big: tuple[int, ...]
    d_w: int
    delta: int


@dataclass
class CountLine:
    label: str
    lhs: float
    rhs: float
    holds: bool


@dataclass
class CountReport:
    edge: Edge
    directly_colorable: bool
    lines: list[CountLine]
    first_failure: str | None

    def to_dict(self) -> dict:
        return {
            "edge": list(self.edge),
            "direct": self.directly_colorable,
            "lines": [[ln.label, ln.lhs, ln.rhs, ln.holds] for ln in self.lines],
            "firstFailure": self.first_failure,
        }


def raw_n2_bound(st: CountState, t: tuple[int, ...]) -> int:
    """Colored edges that can sit in the conflict set of ``u v_{i,j}``.

    Edges at the big neighbors and at ``w_i``, the other edges at ``u``, the
    sharer-side edges of the other groups, less the ``u``-edges still
    uncolored when edges are colored from the last group backwards.
    """
    b = len(st.d_big)
    pending = sum(t[: st.i - 1]) + (st.j - 1)
    return sum(st.d_big) + st.d_w + (st.d_u - 1 - b) + (st.d_u - b - t[st.i - 1]) - pending


def certify_case1_counts(st: CountState, ctx: SpecialContext, p: Params) -> CountReport:
    """Evaluate the chain bounding the distinct colors blocked at ``u v_{i,j}``.

    The chain is only needed when the raw count of colored conflicting edges
    reaches ``K``; otherwise the edge is directly colorable.
    """
    t = ctx.t
    s = ctx.s
    tau, D = p.tau, p.D
    eps = 1e-9
    lines: list[CountLine] = []

    def add(label, lhs, rhs):
        lines.append(CountLine(label, float(lhs), float(rhs), lhs <= rhs + eps))

    raw = raw_n2_bound(st, t)
    add("n₂(uv)", st.n2, raw)
    if st.n2 < p.K:
        first = next((ln.label for ln in lines if not ln.holds), None)
        return CountReport(st.edge, True, lines, first)

    b = len(st.d_big)
    big5 = 5 * p.upper
    n2 = st.n2
    a = n2 - (n2 + tau * (s - 1) - (5 * D - tau + 2)) / tau
    bb = n2 * (1 - 1 / tau) - (s - 1) + big5 - 1 + 2 / tau
    bracket = sum(st.d_big) + st.d_w + (st.d_u - 1 - b) + (st.d_u - b) - t[0]
    c = bracket * (1 - 1 / tau) - (st.d_u - 2) / tau + big5 + 2 / tau
    d = 3 * st.delta * (1 - 1 / tau) + st.d_u * (2 - 3 / tau) + big5 - 5 + 9 / tau
    e = 3 * (D + tau) * (1 - 1 / tau) + D * (2 - 3 / tau) + big5 - 5 + 9 / tau
    f = 5 * D + 3 * tau - p.upper - 8 + 9 / tau
    g = 5 * D - tau + 1
    add("distinct blocked", st.distinct, a)
    add("n₂ − repeats", a, bb)
    add("n₂(1 − 1/τ) − (s − 1)", bb, c)
    add("(d(u₁) + d(u₂) + 2d(u) − 5 + d(wᵢ) − t₁)(1 − 1/τ)", c, d)
    add("3Δ(1 − 1/τ)", d, e)
    add("3(D + τ)(1 − 1/τ)", e, f)
    add("5D + 3τ − D^(1/2+ε)", f, g)
    first = next((ln.label for ln in lines if not ln.holds), None)
    return CountReport(st.edge, False, lines, first)


# -- extension --------------------------------------------------------------

def _clash(g: Graph, colors: dict[Edge, int], e: Edge) -> bool:
    c = colors.get(e)
    if c is None:
        return False
    return any(colors.get(f) == c for f in n2_edges(g, e))


class _Extender:
    """Unwinds reduction steps on one working graph and tracked coloring."""

    def __init__(self, work: Graph, col: _Tracked, p: Params, debug: bool = False):
        self.work = work
        self.col = col
        self.p = p
        self.debug = debug

    # shared helpers
    def _assign(self, step: ReductionStep, e: Edge, extra: dict | None = None) -> int:
        blocked = blocked_colors(self.work, self.col.col, e)
        c = least_free(blocked, self.p.K)
        if c is None:
            c = least_free(blocked)
            cert = {"kind": "no_color", "edge": list(e), "blocked": len(blocked), "color": c}
            if extra:
                cert.update(extra)
            step.certificates.append(cert)
        self.col.set(e, c)
        step.recolored.append((e, c))
        return c

    def _try_swap(self, step, e: Edge, f: Edge, guarded: set[Edge], ucols: set[int]) -> bool:
        """Swap if both edges stay clash-free; ``guarded`` edges must also avoid ``ucols``."""
        colors = self.col.colors
        if e not in colors or f not in colors:
            return False
        self.col.swap(e, f)
        ok = not _clash(self.work, colors, e) and not _clash(self.work, colors, f)
        if ok:
            ok = not (e in guarded and colors[e] in ucols) and not (f in guarded and colors[f] in ucols)
        if ok:
            step.swaps.append((e, f))
        else:
            self.col.swap(e, f)
        return ok

    def _pendants(self, w: int, exclude: set[int]) -> list[Edge]:
        adj = self.work._adj
        return sorted(edge(w, x) for x in adj[w] if len(adj[x]) == 1 and x not in exclude)

    def _u_colors(self, u: int) -> set[int]:
        colors = self.col.colors
        return {colors[edge(u, x)] for x in self.work._adj[u] if edge(u, x) in colors}

    def _drop_pendants(self, step: ReductionStep) -> None:
        for w, leaves in step.added_pendants.items():
            for x in leaves:
                self.col.unset(edge(w, x))
                self.work.remove_vertex(x)

    def _restore_peeled(self, step: ReductionStep) -> None:
        for e in reversed(step.peeled):
            self.work.add_edge(*e)
            size = len(n2_edges(self.work, e))
            bound = 4 * step.delta_before - 4
            step.checks.append(["pendant", list(e), size, bound])
            if size > bound:
                step.certificates.append({"kind": "pendant_bound", "edge": list(e), "n2": size,
                                          "bound": bound})
            self._assign(step, e)

    # Case 1 ----------------------------------------------------------------
    def case1(self, step: ReductionStep) -> None:
        ctx = step.context
        u, work, colors = ctx.u, self.work, self.col.colors
        groups = [[edge(w, v) for v in gr] for w, gr in zip(ctx.sharers, ctx.groups)]
        guarded = {e for gr in groups for e in gr}
        donors = [self._pendants(w, set(gr)) for w, gr in zip(ctx.sharers, ctx.groups)]
        ucols = self._u_colors(u)

        # (1) group edges may not repeat a color of u u_k once u v_{i,j} returns
        repair: list[Edge] = []
        for i, gr in enumerate(groups):
            for e in gr:
                if colors.get(e) in ucols:
                    if not any(self._try_swap(step, e, f, guarded, ucols) for f in donors[i]):
                        step.certificates.append({"kind": "donor_missing", "edge": list(e), "phase": 1})
                        self.col.unset(e)
                        step.uncolored.append(e)
                        repair.append(e)

        # (2) pull colors shared with edges at u_1, u_2 onto group edges
        locked: set[Edge] = set()
        big_cols = {
            colors[edge(b, x)] for b in ctx.big for x in work._adj[b]
            if x != u and edge(b, x) in colors
        }
        for i, gr in enumerate(groups):
            for f in donors[i]:
                if colors.get(f) in big_cols:
                    for e in gr:
                        if e not in locked and self._try_swap(step, e, f, guarded, ucols):
                            locked.add(e)
                            break

        # (3) a color on pendants of two or more sharers goes onto their group edges
        holders: dict[int, dict[int, Edge]] = {}
        for i, gr in enumerate(groups):
            for f in gr + donors[i]:
                c = colors.get(f)
                if c is not None:
                    holders.setdefault(c, {}).setdefault(i, f)
        for c in sorted(holders):
            if len(holders[c]) < 2:
                continue
            for i, f in sorted(holders[c].items()):
                if colors.get(f) != c:
                    continue
                if f in guarded:
                    locked.add(f)
                    continue
                for e in groups[i]:
                    if e not in locked and self._try_swap(step, e, f, guarded, ucols):
                        locked.add(e)
                        break

        for e in step.removed_edges:
            work.add_edge(*e)
        self._drop_pendants(step)
        if self.debug:
            self._check_partial(step)

        for e in repair:
            self._assign(step, e)
        # (4) color u v_{i,j} from the last group backwards
        d_big = tuple(work.degree(b) for b in ctx.big)
        order = [(i, j) for i in range(ctx.s) for j in range(len(ctx.groups[i]))]
        for i, j in reversed(order):
            e = edge(u, ctx.groups[i][j])
            conflict = n2_edges(work, e)
            blocked = [colors[f] for f in conflict if f in colors]
            st = CountState(
                edge=e, i=i + 1, j=j + 1, n2=len(blocked), distinct=len(set(blocked)),
                d_u=work.degree(u), d_big=d_big, d_w=work.degree(ctx.sharers[i]),
                delta=step.delta_before,
            )
            report = certify_case1_counts(st, ctx, self.p)
            step.checks.append(["count", list(e), st.n2, raw_n2_bound(st, ctx.t), st.distinct,
                                "direct" if report.directly_colorable else "chain"])
            if report.first_failure is not None:
                step.certificates.append({"kind": "case1_counts", "edge": list(e),
                                          "line": report.first_failure, "report": report.to_dict()})
            self._assign(step, e, {"report": report.to_dict()})

    # Case 2 ----------------------------------------------------------------
    def case2(self, step: ReductionStep) -> None:
        ctx = step.context
        u, work, colors = ctx.u, self.work, self.col.colors
        w1, v11 = ctx.sharers[0], ctx.groups[0][0]
        e0, target = edge(v11, w1), edge(u, v11)
        donors = self._pendants(w1, {v11})
        owner = {colors[edge(u, x)]: edge(u, x) for x in work._adj[u] if edge(u, x) in colors}
        big_edges = {edge(u, b) for b in ctx.big}
        group_of = {edge(u, v): i for i, gr in enumerate(ctx.groups) for v in gr}

        for v in ctx.groups[0][1:]:
            if colors.get(edge(u, v)) == colors.get(e0):
                step.certificates.append({"kind": "exhaustiveness", "edge": [u, v]})

        repair: list[Edge] = []
        a = colors.get(e0)
        clash_edge = owner.get(a)
        if clash_edge is None:
            step.subcase = "2.1"
        elif clash_edge in big_edges:
            step.subcase = "2.2"
            ucols = set(owner)
            done = any(
                colors[f] not in ucols and self._try_swap(step, e0, f, {e0}, ucols) for f in donors
            )
            if not done:
                big_cols = {colors[b] for b in big_edges if b in colors}
                done = any(
                    colors[f] not in big_cols and self._try_swap(step, e0, f, set(), set())
                    for f in donors
                )
                if done:
                    clash_edge = owner.get(colors[e0])
                    if clash_edge is not None:
                        step.subcase = "2.2+2.3"
            if not done:
                step.certificates.append({"kind": "donor_missing", "edge": list(e0), "phase": 2})
                self.col.unset(e0)
                step.uncolored.append(e0)
                repair.append(e0)
        else:
            step.subcase = "2.3"

        work.add_edge(*step.removed_edges[0])
        self._drop_pendants(step)

        sequence = [target]
        if step.subcase in ("2.3", "2.2+2.3"):
            tail = [edge(u, v) for v in ctx.groups[0][1:]]
            for e in [clash_edge] + tail:
                self.col.unset(e)
                step.uncolored.append(e)
            sequence = [clash_edge, target] + tail
        for e in sequence + repair:
            size = len(n2_edges(work, e))
            i = group_of.get(e)
            if i is not None:
                bound = 5 * self.p.D + 1 - ctx.t[i]
                step.checks.append(["eq1", list(e), size, bound])
                if size > bound:
                    step.certificates.append({"kind": "eq1", "edge": list(e), "n2": size, "bound": bound})
            self._assign(step, e, {"subcase": step.subcase})

    # generic ---------------------------------------------------------------
    def unwind(self, step: ReductionStep) -> None:
        if step.kind == CASE1:
            self.case1(step)
        elif step.kind == CASE2:
            self.case2(step)
        self._restore_peeled(step)
        if self.debug:
            self._check_partial(step)
        step.digest = self.col.digest()

    def _check_partial(self, step: ReductionStep) -> None:
        colors = self.col.colors
        for e in list(colors):
            if _clash(self.work, colors, e):
                raise AssertionError(f"step {step.index}: coloring invalid at {e}")


def _base(work: Graph, step: ReductionStep, col: _Tracked) -> None:
    """Color the base graph: a matching gets color 1; anything else is greedy."""
    if step.kind != BASE:
        raise UsageError("not a base step")
    for e in work.edges():
        c = least_free(blocked_colors(work, col.col, e))
        col.set(e, c)
        step.recolored.append((e, c))
    step.digest = col.digest()


def _check_index(work: Graph, idx: StructureIndex, p: Params) -> None:
    """Debug cross-check of the incremental index against full scans."""
    assert idx.max_degree() == work.max_degree()
    assert idx.peel_batch() == _peel_batch(work)
    assert idx.capacity() == capacity(work)
    assert idx.capacity_context() == capacity_context(work)
    assert idx.in_class(p) == class_check(work, p).in_class


def strong_color(g: Graph, p: Params, *, audit: bool = True, debug: bool = False) -> RunResult:
    """Strong edge-color ``g`` by reduction, recording a replayable trace.

    ``audit`` re-runs the hypothesis check on every reduced graph and logs
    a ``class_closure`` certificate when one falls outside the class.
    ``debug`` re-verifies the partial coloring after every extension.
    """
    report = class_check(g, p)
    if not report.in_class:
        raise PreconditionError("graph outside the theorem class: " + "; ".join(report.reasons))
    work = WatchedGraph.adopt(g.copy())
    idx = StructureIndex(work, p.D)
    steps: list[ReductionStep] = []
    while work.measure() > 0:
        if debug:
            _check_index(work, idx, p)
        step = _reduce_once(work, p, len(steps), idx)
        steps.append(step)
        if step.kind == BASE:
            break
        if audit and not idx.in_class(p):
            rep = class_check(work, p)
            step.certificates.append({"kind": "class_closure", "reasons": rep.reasons})
        if debug and audit:
            _check_index(work, idx, p)
    work.detach()
    if not steps or steps[-1].kind != BASE:
        steps.append(ReductionStep(index=len(steps), kind=BASE, measure_before=work.measure(),
                                   measure_after=work.measure(), delta_before=work.max_degree()))

    col = _Tracked(Coloring())
    _base(work, steps[-1], col)
    ext = _Extender(work, col, p, debug=debug)
    if steps[-1].peeled:
        ext._restore_peeled(steps[-1])
        steps[-1].digest = col.digest()
    for step in reversed(steps[:-1]):
        ext.unwind(step)

    coloring = col.col
    diagnostics = [dict(c, step=st.index) for st in steps for c in st.certificates]
    bad = verify_strong(g, coloring)
    if bad is not None:  # pragma: no cover - defensive; extension checks every assignment
        raise AssertionError(f"internal error: invalid coloring {bad}")
    used = coloring.num_colors()
    return RunResult(
        coloring=Coloring(coloring.colors, K=None),
        colors_used=used,
        budget_met=coloring.max_color() <= p.K,
        trace=steps,
        diagnostics=diagnostics,
        params=p,
        graph_digest=graph_digest(g),
    )


# -- public single-step extension wrappers ---------------------------------

def _step_from(g: Graph, gprime: Graph, ctx: SpecialContext, kind: str) -> ReductionStep:
    removed = ctx.group_edges() if kind == CASE1 else [edge(ctx.u, ctx.groups[0][0])]
    added: dict[int, list[int]] = {}
    for w in ctx.sharers:
        new = sorted(x for x in gprime.neighbors(w) if x not in g)
        if new:
            added[w] = new
    return ReductionStep(index=0, kind=kind, context=ctx, removed_edges=removed,
                         added_pendants=added, delta_before=g.max_degree())


def _extend(kind, g, gprime, cprime, ctx, p, debug):
    bad = verify_strong(gprime, cprime)
    if bad is not None:
        raise UsageError(f"coloring of the reduced graph is invalid: {bad}")
    step = _step_from(g, gprime, ctx, kind)
    work = gprime.copy()
    col = _Tracked(cprime.copy())
    ext = _Extender(work, col, p, debug=debug)
    (ext.case1 if kind == CASE1 else ext.case2)(step)
    out = col.col
    out.K = None
    return out, step


def extend_case1(g: Graph, gprime: Graph, cprime: Coloring, ctx: SpecialContext, p: Params,
                 *, debug: bool = False) -> tuple[Coloring, ReductionStep]:
    """Extend a coloring of the Case 1 reduced graph to ``g``.

    Returns the coloring and the step record holding swaps, assignments,
    count checks and any certificates.
    """
    return _extend(CASE1, g, gprime, cprime, ctx, p, debug)


def extend_case2(g: Graph, gprime: Graph, cprime: Coloring, ctx: SpecialContext, p: Params,
                 *, debug: bool = False) -> tuple[Coloring, ReductionStep]:
    return _extend(CASE2, g, gprime, cprime, ctx, p, debug)


# -- replay -------------------------------------------------------------------

def replay_trace(g: Graph, r: RunResult) -> None:
    """Re-run the reduction recorded in ``r`` against ``g``; raise ReplayError on any mismatch.

    Checks that the trace belongs to ``g``, that each step's surgery is
    applicable and strictly lowers the measure, that every reduced graph is
    in class (or the trace says otherwise), that every swap and assignment
    keeps the coloring valid, and that each level's coloring matches the
    recorded digest.
    """
    p = r.params
    steps = r.trace
    if not steps or steps[-1].kind != BASE:
        raise ReplayError(0, "trace does not end in a base step")
    if graph_digest(g) != r.graph_digest:
        raise ReplayError(0, "graph mismatch", "digest differs")
    work = g.copy()
    for k, st in enumerate(steps[:-1]):
        if st.index != k:
            raise ReplayError(k, "step index", f"recorded {st.index}")
        before = work.measure()
        if before != st.measure_before:
            raise ReplayError(k, "pre-graph mismatch", f"measure {before} != {st.measure_before}")
        adj = work._adj
        for e in st.peeled:
            if not work.has_edge(*e) or min(len(adj[e[0]]), len(adj[e[1]])) != 1:
                raise ReplayError(k, "peeled edge is not pendant", str(e))
            work.remove_edge(*e)
        for e in st.removed_edges:
            if not work.has_edge(*e):
                raise ReplayError(k, "removed edge missing", str(e))
            work.remove_edge(*e)
        for w, leaves in st.added_pendants.items():
            for x in leaves:
                if x in work:
                    raise ReplayError(k, "pendant id reused", str(x))
                work.add_edge(w, x)
        after = work.measure()
        if after != st.measure_after or after >= before:
            raise ReplayError(k, "measure did not strictly decrease", f"{before} -> {after}")
        rep = class_check(work, p)
        acknowledged = any(c.get("kind") == "class_closure" for c in st.certificates)
        if not rep.in_class and not acknowledged:
            raise ReplayError(k, "class closure", "; ".join(rep.reasons))
        if rep.in_class and acknowledged:
            raise ReplayError(k, "spurious class-closure certificate")

    base = steps[-1]
    last = len(steps) - 1
    fallback = any(c.get("kind") == "no_context" for c in base.certificates)
    for e in base.peeled:
        if not work.has_edge(*e):
            raise ReplayError(last, "peeled edge missing", str(e))
        work.remove_edge(*e)
    if work.measure() != 0 and not fallback:
        raise ReplayError(last, "base graph is not a matching")
    col = _Tracked(Coloring())
    peeled = set(base.peeled)
    for e, c in base.recolored:
        if e in peeled:
            continue
        if not work.has_edge(*e):
            raise ReplayError(last, "base colors an edge not in the graph", str(e))
        col.set(e, c)
    if len(col.colors) != work.number_of_edges() or verify_strong(work, col.col) is not None:
        raise ReplayError(last, "base coloring invalid")
    _replay_peeled(work, col, base, last)
    if col.digest() != base.digest:
        raise ReplayError(last, "coloring digest")

    for k in range(last - 1, -1, -1):
        st = steps[k]
        colors = col.colors
        for e, f in st.swaps:
            if e not in colors or f not in colors:
                raise ReplayError(k, "swap of uncolored edge", f"{e} {f}")
            col.swap(e, f)
            if _clash(work, colors, e) or _clash(work, colors, f):
                raise ReplayError(k, "swap broke validity", f"{e} {f}")
        for e in st.uncolored:
            col.unset(e)
        for e in st.removed_edges:
            work.add_edge(*e)
        for w, leaves in st.added_pendants.items():
            for x in leaves:
                col.unset(edge(w, x))
                work.remove_vertex(x)
        touched = [e for e, _ in st.swaps] + [f for _, f in st.swaps]
        eq1 = {tuple(ch[1]): ch for ch in st.checks if ch and ch[0] == "eq1"}
        t_of = {}
        if st.context is not None:
            ctx = st.context
            t_of = {edge(ctx.u, v): len(gr) for gr in ctx.groups for v in gr}
        for e, c in st.recolored:
            if e in st.peeled:
                work.add_edge(*e)
            elif not work.has_edge(*e):
                raise ReplayError(k, "recolored edge not in graph", str(e))
            ch = eq1.get(e)
            if ch is not None:
                size = len(n2_edges(work, e))
                if ch[2] != size or ch[3] != 5 * p.D + 1 - t_of.get(e, 0):
                    raise ReplayError(k, "eq1 record does not match the graph", str(e))
            col.set(e, c)
            touched.append(e)
        if len(colors) != work.number_of_edges():
            raise ReplayError(k, "coloring not total", f"{len(colors)} of {work.number_of_edges()}")
        near = set(touched)
        for x, y in st.removed_edges + st.peeled:
            near.update(edge(x, z) for z in work._adj[x])
            near.update(edge(y, z) for z in work._adj[y])
        for e in sorted(near):
            if e in colors and _clash(work, colors, e):
                raise ReplayError(k, "coloring invalid after extension", str(e))
        if col.digest() != st.digest:
            raise ReplayError(k, "coloring digest")

    if work != g:
        raise ReplayError(0, "unwound graph differs from input")
    if verify_strong(g, col.col) is not None:
        raise ReplayError(0, "final coloring invalid")
    if r.coloring is not None and col.col.colors != r.coloring.colors:
        raise ReplayError(0, "final coloring differs from the recorded result")


def _replay_peeled(work: Graph, col: _Tracked, st: ReductionStep, k: int) -> None:
    for e, c in st.recolored:
        if e in st.peeled:
            work.add_edge(*e)
            col.set(e, c)
            if _clash(work, col.colors, e):
                raise ReplayError(k, "coloring invalid after extension", str(e))
