"""Wall time of a 64-point angle sweep against worker count.

Every point runs the same timing and Hartman work as the single-point baseline.
"""

import argparse
import os
import time

from evanesim.cli.config import build_config
from evanesim.cli.run import run


def timed(cfg, workers):
    t0 = time.perf_counter()
    run(cfg, workers=workers)
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4])
    args = ap.parse_args()
    single_cfg = build_config("ftir", outputs="timing,hartman")
    single = min(timed(single_cfg, 1) for _ in range(5))
    sweep = build_config("ftir", sweep=f"angle:40deg:80deg:{args.points}", outputs="timing,hartman")
    print(f"cpus {os.cpu_count()}, single point {single * 1e3:.1f} ms")
    for w in args.workers:
        t = timed(sweep, w)
        budget = 1.3 * args.points / w * single
        print(f"workers {w}: {t:.3f} s (budget {budget:.3f} s) {'ok' if t <= budget else 'over'}")


if __name__ == "__main__":
    main()
