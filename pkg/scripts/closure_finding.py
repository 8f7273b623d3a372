"""Where reduced graphs leave the class, and why.

For every run that logs a class_closure certificate, report the step, the
max degree and capacity of the reduced graph, and the step kinds leading up
to it. Defaults match the eps = 1/2 corpus.
"""

import argparse
from collections import Counter

from strongedge import make_params, strong_color
from strongedge.cli import parse_seeds
from strongedge.genlab import CASE2_RICH, gen_class_instance


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", default="1/2")
    ap.add_argument("--D-list", dest="D_list", default="4,9,16")
    ap.add_argument("--seeds", default="1..500")
    ap.add_argument("--regime", default=CASE2_RICH)
    ap.add_argument("--show", type=int, default=3, help="example runs to print per D")
    a = ap.parse_args()
    for D in (int(x) for x in a.D_list.split(",")):
        p = make_params(D, a.eps)
        reasons, prior, runs, shown = Counter(), Counter(), 0, 0
        budget_ok = True
        for s in parse_seeds(a.seeds):
            r = strong_color(gen_class_instance(p, a.regime, s), p)
            budget_ok &= r.budget_met
            hits = [d for d in r.diagnostics if d["kind"] == "class_closure"]
            if not hits:
                continue
            runs += 1
            for d in hits:
                reasons.update(d["reasons"])
                prior[r.trace[d["step"]].kind] += 1
            if shown < a.show:
                shown += 1
                st = r.trace[hits[0]["step"]]
                print(f"  D={D} seed={s}: first at step {st.index} ({st.kind}), "
                      f"delta before {st.delta_before}, colorsUsed {r.colors_used} / K={p.K}")
        print(f"D={D} tau={p.tau:.3f}: {sum(prior.values())} certificates in {runs} runs, "
              f"all budgets met: {budget_ok}")
        for why, k in reasons.most_common():
            print(f"    {k:>5}  {why}")
        print(f"    step kinds: {dict(prior)}")


if __name__ == "__main__":
    main()
