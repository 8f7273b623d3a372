"""Summary table for class-instance corpora.

    python3 scripts/run_corpus.py --eps 1/4 --D-list 16,25,36 --seeds 1..200
"""

import argparse
import time
from collections import Counter

from strongedge import make_params, strong_color, verify_strong
from strongedge.cli import parse_seeds
from strongedge.genlab import CASE1_RICH, CASE2_RICH, gen_class_instance
from strongedge.reducer import CASE1, CASE2


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--eps", default="1/2")
    ap.add_argument("--D-list", dest="D_list", default="4,9,16")
    ap.add_argument("--seeds", default="1..100")
    ap.add_argument("--regimes", default=f"{CASE1_RICH},{CASE2_RICH}")
    a = ap.parse_args()
    seeds = parse_seeds(a.seeds)
    hdr = f"{'D':>3} {'regime':<10} {'K':>4} {'runs':>5} {'maxUsed':>7} {'meanUsed':>8} " \
          f"{'case1':>6} {'case2':>6} {'certs':>5} {'sec':>6}"
    print(hdr)
    for D in (int(x) for x in a.D_list.split(",")):
        p = make_params(D, a.eps)
        for regime in a.regimes.split(","):
            if regime == CASE1_RICH and p.tau <= 1:
                continue
            t0 = time.perf_counter()
            used, kinds, certs = [], Counter(), 0
            for s in seeds:
                g = gen_class_instance(p, regime, s)
                r = strong_color(g, p)
                assert verify_strong(g, r.coloring) is None
                used.append(r.colors_used)
                kinds.update(st.kind for st in r.trace)
                certs += len(r.diagnostics)
            print(f"{D:>3} {regime:<10} {p.K:>4} {len(seeds):>5} {max(used):>7} "
                  f"{sum(used) / len(used):>8.1f} {kinds[CASE1]:>6} {kinds[CASE2]:>6} {certs:>5} "
                  f"{time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    main()
