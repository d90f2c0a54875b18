"""Random survey of the two-step swap protocol.

For each configuration compares the exact success probability with the
closed-form two-step formula and with the simple one-coupling lower bound,
and counts how often each relation holds.

    python scripts/strategy_one_survey.py --configs 5000 --seed 1
"""

import argparse

import numpy as np

from gscqc.protocol import StrategyOneConfig, closed_form_lower_bound, strategy_one
from gscqc.thermal import ThermalSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", type=int, default=2000)
    ap.add_argument("--delta-max", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", action="store_true", help="print every configuration")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    formula_gap = []
    bound_holds = 0
    if args.csv:
        print("p0,delta1,delta2,j1,j2,p_success,formula,lower_bound")
    for _ in range(args.configs):
        p0 = float(rng.uniform(0.01, 0.99))
        cfg = StrategyOneConfig(
            float(rng.uniform(1e-3, args.delta_max)), float(rng.uniform(1e-3, args.delta_max)),
            int(rng.integers(0, 3)), int(rng.integers(0, 3)),
        )
        rep = strategy_one(ThermalSpec(8, p0_override=p0), cfg)
        lb = closed_form_lower_bound(p0, cfg)
        formula_gap.append(rep.p_success - rep.closed_form_value)
        bound_holds += rep.p_success >= lb - 1e-15
        if args.csv:
            print(f"{p0:.6g},{cfg.delta1:.6g},{cfg.delta2:.6g},{cfg.j1},{cfg.j2},"
                  f"{rep.p_success:.12g},{rep.closed_form_value:.12g},{lb:.12g}")

    gaps = np.array(formula_gap)
    print(f"configs                     {args.configs}")
    print(f"exact - formula             min {gaps.min():.3e}  max {gaps.max():.3e}")
    print(f"exact >= lower bound        {bound_holds}/{args.configs}")


if __name__ == "__main__":
    main()
