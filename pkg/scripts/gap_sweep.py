"""Worst-case cooling probability when the excited oracle levels are split by r.

The minimum runs over the 12 corner assignments of the two levels next to
the answer and the three bulk patterns.

    python scripts/gap_sweep.py --M 2 4 8
"""

import argparse
import math

import numpy as np

from gscqc.optimizer import optimize_params
from gscqc.protocol import gap_assignments, gap_model_probability
from gscqc.thermal import ThermalSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=float, default=1e23)
    ap.add_argument("--dT", type=float, default=0.0)
    ap.add_argument("--M", type=int, nargs="+", default=[4])
    ap.add_argument("--r-max", type=float, default=0.3)
    ap.add_argument("--points", type=int, default=31)
    args = ap.parse_args()

    params = optimize_params(2 * math.pi, 1).params
    print("r,M,min_cooling_probability,worst_assignment")
    for r in np.linspace(0.0, args.r_max, args.points):
        r = float(r)
        for M in args.M:
            results = [
                (gap_model_probability(ThermalSpec(args.N, args.dT, spectrum=sm), params, M), sm)
                for sm in gap_assignments(r)
            ]
            value, sm = min(results, key=lambda x: x[0])
            label = f"{sm.left.name}/{sm.right.name}/{sm.bulk.name}"
            print(f"{r:.4f},{M},{value:.12g},{label}")


if __name__ == "__main__":
    main()
