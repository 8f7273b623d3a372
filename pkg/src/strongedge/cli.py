"""Command-line entry point: gen, color, verify, exact, replay, bench.

Exit codes: 0 success, 1 input or parse error, 2 verification failure or
budget missed, 3 a diagnostic certificate was emitted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from multiprocessing import Pool
from pathlib import Path

from .coloring import make_params, verify_strong
from .errors import InputError, PreconditionError, ReplayError, ResourceLimitError
from .genlab import CASE2_RICH, NAMED_KINDS, gen_class_instance, gen_named, gen_random_2deg
from .graph import Graph, capacity, degeneracy_number
from .io import format_coloring, format_edge_list, read_coloring, read_edge_list, write_edge_list
from .oracle import DEFAULT_MAX_EDGES, exact_strong_index
from .reducer import replay_trace, strong_color
from .trace import read_trace, write_trace

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_CERT = 0, 1, 2, 3
WORKERS_ENV = "STRONGEDGE_WORKERS"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def parse_seeds(text: str) -> list[int]:
    """``a..b`` (inclusive), a comma list, or one integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad seed list {text!r}") from None


def build_report(g: Graph, p, r, runtime_ms: float, trace_path: str | None = None) -> dict:
    """Report fields in a fixed order so reports diff cleanly."""
    valid = r.coloring is not None and verify_strong(g, r.coloring) is None
    rep = {
        "n": g.number_of_vertices(),
        "m": g.number_of_edges(),
        "delta": g.max_degree(),
        "degeneracy": degeneracy_number(g),
        "capacity": capacity(g),
        "D": p.D,
        "eps": str(p.eps),
        "K": p.K,
        "colorsUsed": r.colors_used,
        "budgetMet": r.budget_met,
        "valid": valid,
        "runtimeMs": round(runtime_ms, 3),
    }
    if trace_path:
        rep["tracePath"] = trace_path
    if r.diagnostics:
        rep["diagnostics"] = r.diagnostics
    return rep


def exit_code(rep: dict) -> int:
    if not rep["valid"] or not rep["budgetMet"]:
        return EXIT_VERIFY
    if rep.get("diagnostics"):
        return EXIT_CERT
    return EXIT_OK


# -- subcommands --------------------------------------------------------------

def cmd_gen(a) -> int:
    model = a.model.lower()
    if model in ("random2deg", "random"):
        g = gen_random_2deg(a.n, a.m, a.seed)
        note = f"Random2Deg n={a.n} m={a.m} seed={a.seed}"
    elif model in ("classinstance", "class"):
        if a.D is None or a.eps is None or a.regime is None:
            raise InputError("class instances need --D, --eps and --regime")
        p = make_params(a.D, a.eps)
        g = gen_class_instance(p, a.regime, a.seed, a.n or None)
        note = f"ClassInstance {a.regime} D={p.D} eps={p.eps} seed={a.seed}"
    else:
        kind = a.kind if model == "named" else model
        if kind is None:
            raise InputError("--model named needs --kind")
        if kind not in NAMED_KINDS:
            raise InputError(f"unknown model {a.model!r}")
        g = gen_named(kind, a.n)
        note = f"{kind} n={a.n}"
    _emit(format_edge_list(g, note), a.output)
    return EXIT_OK


def cmd_color(a) -> int:
    g, names = read_edge_list(a.input)
    p = make_params(a.D, a.eps)
    t0 = time.perf_counter()
    r = strong_color(g, p)
    ms = (time.perf_counter() - t0) * 1000
    if a.trace:
        write_trace(r, g.number_of_vertices(), g.number_of_edges(), a.trace)
    if a.coloring:
        Path(a.coloring).write_text(format_coloring(r.coloring, names), encoding="utf-8")
    rep = build_report(g, p, r, ms, a.trace)
    _emit(_dump(rep), a.report)
    return exit_code(rep)


def cmd_verify(a) -> int:
    g, names = read_edge_list(a.input)
    c = read_coloring(a.coloring, g, names)
    missing = [e for e in g.edges() if e not in c]
    if missing:
        u, v = missing[0]
        print(f"uncolored: {len(missing)} edges, e.g. {names.name(u)} {names.name(v)}")
        return EXIT_VERIFY
    bad = verify_strong(g, c)
    if bad is None:
        print(f"ok: {c.num_colors()} colors")
        return EXIT_OK
    nm = names.name
    (a1, b1), (a2, b2) = bad.edge_a, bad.edge_b
    if bad.witness[0] == "shared":
        why = f"share vertex {nm(bad.witness[1])}"
    else:
        why = f"joined by edge {nm(bad.witness[1])} {nm(bad.witness[2])}"
    print(f"violation: edges {nm(a1)} {nm(b1)} and {nm(a2)} {nm(b2)} both have color {bad.color} and {why}")
    return EXIT_VERIFY


def cmd_exact(a) -> int:
    g, names = read_edge_list(a.input)
    try:
        k, witness = exact_strong_index(g, a.max_edges, a.time_budget)
    except ResourceLimitError as exc:
        print(f"error: {exc}; bounds {exc.lower} <= index <= {exc.upper}", file=sys.stderr)
        return EXIT_INPUT
    print(k)
    if a.output:
        Path(a.output).write_text(format_coloring(witness, names), encoding="utf-8")
    return EXIT_OK


def cmd_replay(a) -> int:
    g, _ = read_edge_list(a.input)
    try:
        _, r = read_trace(a.trace)
    except (ValueError, OSError) as exc:
        raise InputError(f"cannot read trace: {exc}") from None
    try:
        replay_trace(g, r)
    except ReplayError as exc:
        print(f"replay failed: {exc}")
        return EXIT_VERIFY
    print(f"ok: {len(r.trace)} steps")
    return EXIT_OK


def _bench_one(job: tuple) -> dict:
    D, eps, regime, seed, corpus = job
    p = make_params(D, eps)
    path = Path(corpus) / f"{regime}_D{D}_s{seed}.el" if corpus else None
    if path is not None and path.exists():
        g, _ = read_edge_list(path)
    else:
        g = gen_class_instance(p, regime, seed)
        if path is not None:
            write_edge_list(g, path, f"ClassInstance {regime} D={D} eps={p.eps} seed={seed}")
    t0 = time.perf_counter()
    r = strong_color(g, p)
    ms = (time.perf_counter() - t0) * 1000
    rep = build_report(g, p, r, ms)
    return {"seed": seed, **rep}


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise InputError(f"{WORKERS_ENV} must be an integer") from None


def cmd_bench(a) -> int:
    try:
        d_list = [int(x) for x in a.D_list.split(",")]
    except ValueError:
        raise InputError(f"bad --D-list {a.D_list!r}") from None
    seeds = parse_seeds(a.seeds)
    for D in d_list:
        make_params(D, a.eps)
    if a.corpus:
        Path(a.corpus).mkdir(parents=True, exist_ok=True)
    jobs = [(D, a.eps, a.regime, s, a.corpus) for D in d_list for s in seeds]
    workers = a.workers or default_workers()
    t0 = time.perf_counter()
    if workers > 1:
        with Pool(workers) as pool:
            runs = pool.map(_bench_one, jobs, chunksize=8)
    else:
        runs = [_bench_one(j) for j in jobs]
    total = (time.perf_counter() - t0) * 1000
    per_d = []
    for D in d_list:
        rs = [x for x in runs if x["D"] == D]
        per_d.append({
            "D": D,
            "K": rs[0]["K"] if rs else None,
            "instances": len(rs),
            "valid": sum(x["valid"] for x in rs),
            "budgetMet": sum(x["budgetMet"] for x in rs),
            "maxColorsUsed": max((x["colorsUsed"] for x in rs), default=0),
            "certificates": sum(len(x.get("diagnostics", [])) for x in rs),
        })
    out = {
        "regime": a.regime,
        "eps": a.eps,
        "seeds": a.seeds,
        "instances": len(runs),
        "valid": sum(x["valid"] for x in runs),
        "budgetMet": sum(x["budgetMet"] for x in runs),
        "certificates": sum(len(x.get("diagnostics", [])) for x in runs),
        "runtimeMs": round(total, 3),
        "byD": per_d,
        "runs": runs,
    }
    _emit(_dump(out), a.report)
    if out["valid"] < len(runs) or out["budgetMet"] < len(runs):
        return EXIT_VERIFY
    return EXIT_CERT if out["certificates"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strongedge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen", help="generate a graph")
    s.add_argument("--model", required=True,
                   help="Random2Deg, ClassInstance, Named (with --kind) or a named kind directly")
    s.add_argument("--kind", choices=NAMED_KINDS)
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--D", type=int)
    s.add_argument("--eps")
    s.add_argument("--regime", choices=("Case1Rich", "Case2Rich"))
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("color", help="strong edge-color a graph within the budget")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--eps", required=True, help="decimal or p/q")
    s.add_argument("--trace")
    s.add_argument("--report")
    s.add_argument("-c", "--coloring", help="write the coloring here")
    s.set_defaults(fn=cmd_color)

    s = sub.add_parser("verify", help="check a coloring file")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-c", "--coloring", required=True)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("exact", help="exact strong chromatic index")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    s.add_argument("--time-budget", type=float)
    s.add_argument("-o", "--output", help="write a witness coloring here")
    s.set_defaults(fn=cmd_exact)

    s = sub.add_parser("replay", help="audit a trace against its graph")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("--trace", required=True)
    s.set_defaults(fn=cmd_replay)

    s = sub.add_parser("bench", help="run a class-instance corpus")
    s.add_argument("--corpus", help="directory caching the generated edge lists")
    s.add_argument("--D-list", dest="D_list", default="4,9,16")
    s.add_argument("--eps", default="0.5")
    s.add_argument("--seeds", default="1..500")
    s.add_argument("--regime", default=CASE2_RICH, choices=("Case1Rich", "Case2Rich"))
    s.add_argument("--workers", type=int, help=f"default from ${WORKERS_ENV}, else 1")
    s.add_argument("--report")
    s.set_defaults(fn=cmd_bench)
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return a.fn(a)
    except (InputError, PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
