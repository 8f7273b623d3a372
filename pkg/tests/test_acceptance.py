"""Acceptance criteria, one test each.

Every test records a one-line verdict in ``RESULTS``; the pytest summary and
``python3 tests/test_acceptance.py`` both print them. Corpus runs are cached
per process so criteria 5 to 8 reuse the runs of criteria 3 and 4.
"""

from __future__ import annotations

import hashlib
import io
import json
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from test_oracle import exhaustive_index  # noqa: E402

from strongedge import (  # noqa: E402
    Coloring,
    Graph,
    greedy_color,
    make_params,
    replay_trace,
    strong_color,
    verify_strong,
)
from strongedge.cli import build_report  # noqa: E402
from strongedge.coloring import greedy_bound  # noqa: E402
from strongedge.genlab import CASE1_RICH, CASE2_RICH, gen_class_instance, gen_named, gen_random_2deg  # noqa: E402
from strongedge.oracle import conflict_clique_lower_bound, exact_strong_index  # noqa: E402
from strongedge.reducer import CASE1, CASE2  # noqa: E402
from strongedge.trace import dump_trace  # noqa: E402

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, text: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}"
    RESULTS[n] = line
    print(line)


@dataclass
class Corpus:
    label: str
    runs: list = field(default_factory=list)  # (D, regime, seed, graph, result, runtime_ms)
    seconds: float = 0.0

    def digest(self) -> str:
        """sha256 over every trace and report, with runtimes zeroed."""
        h = hashlib.sha256()
        for D, regime, seed, g, r, ms in self.runs:
            buf = io.StringIO()
            dump_trace(r, g.number_of_vertices(), g.number_of_edges(), buf)
            h.update(buf.getvalue().encode())
            rep = build_report(g, r.params, r, ms)
            rep["runtimeMs"] = 0
            h.update(json.dumps(rep, sort_keys=False).encode())
        return h.hexdigest()


def run_corpus(label: str, eps: str, d_list, regimes, seeds) -> Corpus:
    out = Corpus(label)
    t0 = time.perf_counter()
    for D in d_list:
        p = make_params(D, eps)
        for regime in regimes:
            for seed in seeds:
                g = gen_class_instance(p, regime, seed)
                s0 = time.perf_counter()
                r = strong_color(g, p)
                out.runs.append((D, regime, seed, g, r, (time.perf_counter() - s0) * 1000))
    out.seconds = time.perf_counter() - t0
    return out


@lru_cache(maxsize=None)
def corpus3() -> Corpus:
    return run_corpus("eps=1/2", "1/2", (4, 9, 16), (CASE2_RICH,), range(1, 501))


@lru_cache(maxsize=None)
def corpus4() -> Corpus:
    return run_corpus("eps=1/4", "1/4", (16, 25, 36), (CASE1_RICH, CASE2_RICH), range(1, 201))


@lru_cache(maxsize=None)
def replayed() -> tuple[int, int, list[str]]:
    """Replay every criterion 3 and 4 run; returns (passed, total, failures)."""
    ok, fails = 0, []
    runs = corpus3().runs + corpus4().runs
    for D, regime, seed, g, r, _ in runs:
        try:
            replay_trace(g, r)
            ok += 1
        except Exception as exc:  # noqa: BLE001 - any failure counts against the criterion
            fails.append(f"D={D} {regime} seed={seed}: {exc}")
    return ok, len(runs), fails


# -- 1 ------------------------------------------------------------------------

def test_criterion_1_oracle_fixtures():
    fixtures = [
        ("P4", gen_named("path", 4), 3), ("C5", gen_named("cycle", 5), 5),
        ("K1,3", gen_named("star", 3), 3), ("K1,6", gen_named("star", 6), 6),
        ("K1,9", gen_named("star", 9), 9), ("K2,3", gen_named("k2n", 3), 6),
        ("C6", gen_named("cycle", 6), 3), ("C7", gen_named("cycle", 7), 4),
    ]
    bad = []
    slowest = 0.0
    for name, g, want in fixtures:
        t0 = time.perf_counter()
        got, _ = exact_strong_index(g)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if got != want or dt >= 1.0:
            bad.append(f"{name}: {got} in {dt:.3f}s")
        if g.number_of_edges() <= 8 and exhaustive_index(g) != got:
            bad.append(f"{name}: enumeration disagrees")
    record(1, not bad, f"{len(fixtures)} fixtures exact, slowest {slowest * 1000:.1f} ms"
           + (f"; mismatches {bad}" if bad else ""))
    assert not bad


# -- 2 ------------------------------------------------------------------------

def brute_valid(g: Graph, c: Coloring) -> bool:
    for e, f in combinations(g.edges(), 2):
        if c[e] == c[f] and (set(e) & set(f) or any(g.has_edge(x, y) for x in e for y in f)):
            return False
    return True


def random_pair(rng: random.Random) -> tuple[Graph, Coloring]:
    n = rng.randint(2, 12)
    pairs = list(combinations(range(n), 2))
    m = rng.randint(0, min(20, len(pairs)))
    g = Graph(rng.sample(pairs, m), range(n))
    es = g.edges()
    mode = rng.random()
    if mode < 0.5 or not es:
        k = rng.randint(1, max(1, m))
        return g, Coloring({e: rng.randint(1, k) for e in es})
    order = es[:]
    rng.shuffle(order)
    c = greedy_color(g, order)
    if mode >= 0.75:
        e = rng.choice(es)
        c.colors[e] = rng.randint(1, c.max_color())
    return g, c


def test_criterion_2_checker_soundness():
    rng = random.Random(20240601)
    disagree = 0
    valid = 0
    for _ in range(10_000):
        g, c = random_pair(rng)
        truth = brute_valid(g, c)
        valid += truth
        disagree += (verify_strong(g, c) is None) != truth
    record(2, disagree == 0, f"10000 pairs ({valid} valid, {10_000 - valid} invalid), "
           f"{disagree} disagreements")
    assert disagree == 0


# -- 3 ------------------------------------------------------------------------

def test_criterion_3_budget_eps_half():
    c = corpus3()
    total = len(c.runs)
    bad = [(D, s) for D, _, s, g, r, _ in c.runs
           if not (r.budget_met and r.colors_used <= 5 * D + 1 and verify_strong(g, r.coloring) is None)]
    worst = {D: max(r.colors_used for d, _, _, _, r, _ in c.runs if d == D) for D in (4, 9, 16)}
    ok = not bad and c.seconds < 60
    record(3, ok, f"{total - len(bad)}/{total} valid within 5D+1, max colorsUsed {worst}, "
           f"{c.seconds:.1f} s (limit 60 s)")
    assert not bad
    assert c.seconds < 60


# -- 4 ------------------------------------------------------------------------

def test_criterion_4_budget_eps_quarter():
    c = corpus4()
    ok_runs, total, _ = replayed()
    bad = [(D, reg, s) for D, reg, s, g, r, _ in c.runs
           if not (r.budget_met and r.colors_used <= r.params.K and verify_strong(g, r.coloring) is None)]
    kinds = Counter(st.kind for *_, r, _ in c.runs for st in r.trace)
    all_replayed = ok_runs == total
    ok = not bad and all_replayed and kinds[CASE1] >= 50 and kinds[CASE2] >= 50
    record(4, ok, f"{len(c.runs) - len(bad)}/{len(c.runs)} within K, "
           f"case1 steps {kinds[CASE1]}, case2 steps {kinds[CASE2]} (traces replayed: {all_replayed})")
    assert not bad and all_replayed
    assert kinds[CASE1] >= 50 and kinds[CASE2] >= 50


# -- 5 ------------------------------------------------------------------------

def sandwich(g: Graph, used: int) -> list[str]:
    lb = conflict_clique_lower_bound(g)
    ex, _ = exact_strong_index(g, max_edges=14)
    gr = greedy_color(g).num_colors()
    cap = greedy_bound(g.max_degree())
    names = ["clique", "exact", "strong_color", "greedy", "2Δ(Δ−1)+1"]
    vals = [lb, ex, used, gr, cap]
    return [f"{names[i]}={vals[i]} > {names[i + 1]}={vals[i + 1]}"
            for i in range(4) if vals[i] > vals[i + 1]]


def sandwich_side_counts() -> str:
    """Same chain off the corpus, for the record only."""
    viol = checked = 0
    for kind, n in [("cycle", k) for k in range(3, 15)] + [("path", 6), ("k2n", 3), ("theta", 3)]:
        g = gen_named(kind, n)
        p = make_params(max(4, g.max_degree()), "1/2")
        checked += 1
        viol += bool(sandwich(g, strong_color(g, p).colors_used))
    for seed in range(1, 101):
        g = gen_random_2deg(10, 14, seed)
        p = make_params(max(4, g.max_degree()), "1/2")
        checked += 1
        viol += bool(sandwich(g, strong_color(g, p).colors_used))
    return f"off-corpus fixtures and random graphs: {viol}/{checked} break strong_color ≤ greedy"


def test_criterion_5_sandwich():
    small = [(D, reg, s, g, r) for D, reg, s, g, r, _ in corpus3().runs + corpus4().runs
             if g.number_of_edges() <= 14]
    bad = []
    for D, reg, s, g, r in small:
        for v in sandwich(g, r.colors_used):
            bad.append(f"D={D} {reg} seed={s}: {v}")
    record(5, not bad, f"{len(small)} corpus graphs with ≤14 edges, {len(bad)} violations "
           f"[{sandwich_side_counts()}]")
    assert not bad, bad[:5]


# -- 6 ------------------------------------------------------------------------

def test_criterion_6_induction_audit():
    ok_runs, total, fails = replayed()
    certs = Counter()
    runs_with = 0
    for *_, g, r, _ in corpus3().runs + corpus4().runs:
        closure = [d for d in r.diagnostics if d["kind"] == "class_closure"]
        certs.update(d["kind"] for d in r.diagnostics)
        runs_with += bool(closure)
    record(6, ok_runs == total,
           f"replay {ok_runs}/{total}; class-closure certificates {certs['class_closure']} "
           f"in {runs_with} runs; all certificates {dict(certs) or 0}"
           + (f"; first failure {fails[0]}" if fails else ""))
    assert ok_runs == total, fails[:5]


# -- 7 ------------------------------------------------------------------------

def test_criterion_7_eq1():
    checks = [ch for *_, r, _ in corpus3().runs + corpus4().runs
              for st in r.trace for ch in st.checks if ch[0] == "eq1"]
    viol = [ch for ch in checks if ch[2] > ch[3]]
    slack = min((ch[3] - ch[2] for ch in checks), default=None)
    record(7, not viol and bool(checks),
           f"{len(checks)} case-2 assignments checked, {len(viol)} violations, min slack {slack}")
    assert checks and not viol


# -- 8 ------------------------------------------------------------------------

def test_criterion_8_determinism():
    first = corpus3().digest()
    again = run_corpus("eps=1/2 rerun", "1/2", (4, 9, 16), (CASE2_RICH,), range(1, 501)).digest()
    record(8, first == again, f"traces+reports sha256 {first[:16]} vs {again[:16]}")
    assert first == again


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    print()
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(1 if failed else 0)
