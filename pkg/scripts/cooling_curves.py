"""Cooling and survival probability against the number of measurements.

Prints one CSV block per temperature and a table of the measurement count
needed to hit each target probability, next to its closed-form bound.

    python scripts/cooling_curves.py --N 1e23 --M 12
"""

import argparse
import math

from gscqc.optimizer import optimize_params
from gscqc.protocol import ProtocolError, cooling_report, measurement_bound, min_measurements
from gscqc.thermal import ThermalSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=float, default=1e23)
    ap.add_argument("--M", type=int, default=12)
    ap.add_argument("--dT", type=float, nargs="+", default=[0.0, 1.0, 3.0, 9.0])
    ap.add_argument("--targets", type=float, nargs="+", default=[0.5, 0.9, 0.99])
    args = ap.parse_args()

    opt = optimize_params(2 * math.pi, 1)
    print(f"# gamma={opt.gamma:.7f} delta={opt.delta:.7f} b1={opt.b1:.6f} b2={opt.b2:.6f}")
    print("dT_ratio,M,cooling_probability,survival_probability")
    for dT in args.dT:
        for m, w0, surv in cooling_report(ThermalSpec(args.N, dT), opt.params, args.M).trace:
            print(f"{dT:g},{m},{w0:.12g},{surv:.12g}")

    print()
    print("dT_ratio,P_target,M_min,bound")
    for dT in args.dT:
        spec = ThermalSpec(args.N, dT)
        for P in args.targets:
            try:
                m_min = str(min_measurements(spec, opt.params, P))
            except ProtocolError:
                m_min = "unreachable"
            try:
                bound = f"{measurement_bound(spec, opt.b2, P):.4f}"
            except ProtocolError:
                bound = "n/a"
            print(f"{dT:g},{P:g},{m_min},{bound}")


if __name__ == "__main__":
    main()
