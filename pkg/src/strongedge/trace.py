"""Line-delimited JSON traces: one header record, then one record per step."""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO

from .coloring import make_params
from .graph import SpecialContext
from .reducer import ReductionStep, RunResult

VERSION = 1


def _pairs(edges) -> list[list[int]]:
    return [list(e) for e in edges]


def step_record(st: ReductionStep) -> dict:
    return {
        "type": "step",
        "index": st.index,
        "kind": st.kind,
        "context": st.context.to_dict() if st.context else None,
        "subcase": st.subcase,
        "measureBefore": st.measure_before,
        "measureAfter": st.measure_after,
        "deltaBefore": st.delta_before,
        "peeled": _pairs(st.peeled),
        "removedEdges": _pairs(st.removed_edges),
        "addedPendants": [[w, list(xs)] for w, xs in st.added_pendants.items()],
        "swaps": [[list(e), list(f)] for e, f in st.swaps],
        "uncolored": _pairs(st.uncolored),
        "recoloredEdges": [[e[0], e[1], c] for e, c in st.recolored],
        "checks": st.checks,
        "certificates": st.certificates,
        "digest": st.digest,
    }


def header_record(r: RunResult, n: int, m: int) -> dict:
    p = r.params
    return {
        "type": "header",
        "version": VERSION,
        "D": p.D,
        "eps": str(p.eps),
        "K": p.K,
        "tau": p.tau,
        "n": n,
        "m": m,
        "graphDigest": r.graph_digest,
        "colorsUsed": r.colors_used,
        "budgetMet": r.budget_met,
    }


def dump_trace(r: RunResult, n: int, m: int, fh: IO[str]) -> None:
    fh.write(json.dumps(header_record(r, n, m)) + "\n")
    for st in r.trace:
        fh.write(json.dumps(step_record(st)) + "\n")


def write_trace(r: RunResult, n: int, m: int, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_trace(r, n, m, fh)


def _edge(x) -> tuple[int, int]:
    return (int(x[0]), int(x[1]))


def step_from_record(d: dict) -> ReductionStep:
    ctx = d.get("context")
    return ReductionStep(
        index=d["index"],
        kind=d["kind"],
        context=SpecialContext.from_dict(ctx) if ctx else None,
        peeled=[_edge(e) for e in d["peeled"]],
        removed_edges=[_edge(e) for e in d["removedEdges"]],
        added_pendants={int(w): [int(x) for x in xs] for w, xs in d["addedPendants"]},
        measure_before=d["measureBefore"],
        measure_after=d["measureAfter"],
        delta_before=d["deltaBefore"],
        subcase=d.get("subcase"),
        swaps=[(_edge(e), _edge(f)) for e, f in d["swaps"]],
        uncolored=[_edge(e) for e in d["uncolored"]],
        recolored=[((int(a), int(b)), int(c)) for a, b, c in d["recoloredEdges"]],
        checks=d.get("checks", []),
        certificates=d.get("certificates", []),
        digest=d["digest"],
    )


def read_trace(path: str | Path) -> tuple[dict, RunResult]:
    """Parse a trace file. The returned result carries no coloring.

    Raises ValueError (via json or KeyError wrapping) on malformed input.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    if not lines:
        raise ValueError("empty trace file")
    try:
        head = json.loads(lines[0])
        if head.get("type") != "header":
            raise ValueError("first record is not a header")
        steps = []
        for ln in lines[1:]:
            d = json.loads(ln)
            if d.get("type") != "step":
                raise ValueError(f"unexpected record type {d.get('type')!r}")
            steps.append(step_from_record(d))
        p = make_params(int(head["D"]), head["eps"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed trace record: {exc}") from None
    diagnostics = [dict(c, step=st.index) for st in steps for c in st.certificates]
    r = RunResult(
        coloring=None,
        colors_used=head["colorsUsed"],
        budget_met=head["budgetMet"],
        trace=steps,
        diagnostics=diagnostics,
        params=p,
        graph_digest=head["graphDigest"],
    )
    return head, r
