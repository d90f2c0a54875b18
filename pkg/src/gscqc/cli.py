"""Command-line experiment runner.

Subcommands
-----------
optimize     optimal (gamma, delta) for a given evolution time t
fig2         cooling and survival probability vs number of measurements M
fig4         worst-case cooling probability vs excited-state gap r
strategy1    exact two-step swap protocol beside its closed-form estimate
trajectory   reset-on-failure Monte Carlo trajectories (full simulator)
verify       block analytics vs full simulator, randomized

Parameters come from an optional JSON file (``--config``) overridden by
flags.  Results are CSV, on stdout or written atomically to ``--out``.
Exit codes: 0 success, 1 computation failure, 2 usage or config error.

Examples::

    gscqc optimize --t 6.283185307
    gscqc fig2 --N 1e23 --dT-ratio 0,1,3,9 --M 10 --P-target 0.9
    gscqc fig4 --N 1e23 --dT-ratio 0 --M 4 --r 0,0.05,0.1,0.2,0.3
    gscqc strategy1 --p0 0.6 --delta1 0.1 --delta2 0.1
    gscqc trajectory --N 16 --M 3 --trials 10000 --seed 42
    gscqc verify --n 16 --cases 100
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, fields, replace

from . import fullsim, protocol, verify
from .blockmath import BlockType, block_for_type, survival_prob
from .optimizer import TWO_PI, InfeasibleError, constrained_delta, optimize_params
from .protocol import CoolingParams, StrategyOneConfig, cooling_report
from .thermal import ThermalSpec

log = logging.getLogger(__name__)

COMMANDS = ("optimize", "fig2", "fig4", "strategy1", "trajectory", "verify")
DEFAULT_R_GRID = (0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    N: float | None = None
    dT_ratio: tuple[float, ...] | None = None
    p0: float | None = None
    gamma: float | None = None
    delta: float | None = None
    t: float | None = None
    M: int | None = None
    strategy: int = 2
    delta1: float | None = None
    delta2: float | None = None
    j1: int = 0
    j2: int = 0
    r_grid: tuple[float, ...] | None = None
    trials: int = 10_000
    seed: int = 0
    fullsim_N: int | None = None
    w: int = 0
    P_target: float | None = None
    output_path: str | None = None
    branch: int = 1
    cases: int = 100


# config-file aliases for fields whose flag name differs
_ALIASES = {"M_max": "M", "r": "r_grid", "out": "output_path", "n": "fullsim_N"}
_TUPLE_FIELDS = {"dT_ratio", "r_grid"}
_INT_FIELDS = {"M", "strategy", "j1", "j2", "trials", "seed", "fullsim_N", "w", "branch", "cases"}


def _coerce(name: str, value):
    if value is None:
        return None
    if name in _TUPLE_FIELDS:
        items = value if isinstance(value, (list, tuple)) else [value]
        try:
            return tuple(float(v) for v in items)
        except (TypeError, ValueError):
            raise ConfigError(f"field '{name}': expected a number or list of numbers, got {value!r}")
    if name == "output_path":
        return str(value)
    if name in _INT_FIELDS:
        if isinstance(value, bool) or not float(value).is_integer():
            raise ConfigError(f"field '{name}': expected an integer, got {value!r}")
        return int(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{name}': expected a number, got {value!r}")
    return float(value)


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for key, value in raw.items():
        name = _ALIASES.get(key, key)
        if name not in known:
            raise ConfigError(f"{path}: unknown field '{key}'")
        try:
            out[name] = _coerce(name, value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: {exc}")
    return out


def _csv_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with experiment parameters")
    common.add_argument("--N", type=float, help="database size, e.g. 1e23")
    common.add_argument("--dT-ratio", dest="dT_ratio", type=_csv_floats, help="dT/T0 values, comma-separated")
    common.add_argument("--p0", type=float, help="initial ground-state population (overrides dT/T0)")
    common.add_argument("--gamma", type=float, help="ancilla splitting")
    common.add_argument("--delta", type=float, help="ancilla-oracle coupling")
    common.add_argument("--t", type=float, help="evolution time between measurements (default 2 pi)")
    common.add_argument("--M", type=int, help="number of measurements (maximum for fig2)")
    common.add_argument("--P-target", dest="P_target", type=float, help="target cooling probability")
    common.add_argument("--r", dest="r_grid", type=_csv_floats, help="gap values, comma-separated")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", dest="output_path", help="output CSV path (default stdout)")
    common.add_argument("--branch", type=int, help="constraint branch n (default 1)")
    common.add_argument("--strategy", type=int, choices=(1, 2))
    common.add_argument("--delta1", type=float)
    common.add_argument("--delta2", type=float)
    common.add_argument("--j1", type=int)
    common.add_argument("--j2", type=int)
    common.add_argument("--w", type=int, help="answer index for full simulations")
    common.add_argument("--n", dest="fullsim_N", type=int, help="largest N for verify")
    common.add_argument("--cases", type=int, help="random cases per verify suite")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="gscqc",
        description="Ground-state cooling of a Grover oracle by conditioned ancilla measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "optimize": "optimal gamma, delta at time t",
        "fig2": "cooling/survival probability vs M",
        "fig4": "worst-case cooling probability vs gap r",
        "strategy1": "two-step swap protocol",
        "trajectory": "Monte Carlo trajectories with resets",
        "verify": "block analytics vs full simulator",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values = load_config(args.config) if args.config else {}
    for f in fields(ExperimentConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = _coerce(f.name, flag)
    cfg = ExperimentConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    def bad(field, msg):
        raise ConfigError(f"field '{field}': {msg}")

    if cfg.N is not None and not cfg.N >= 2:
        bad("N", f"database size must be at least 2, got {cfg.N}")
    if cfg.p0 is not None and not 0 < cfg.p0 <= 1:
        bad("p0", f"must lie in (0, 1], got {cfg.p0}")
    for x in cfg.dT_ratio or ():
        if not x >= 0:
            bad("dT_ratio", f"must be nonnegative, got {x}")
    for r in cfg.r_grid or ():
        if not 0 <= r < 1:
            bad("r_grid", f"gap r must lie in [0, 1), got {r}")
    if cfg.delta is not None and cfg.delta < 0:
        bad("delta", f"must be nonnegative, got {cfg.delta}")
    if cfg.t is not None and not cfg.t > 0:
        bad("t", f"must be positive, got {cfg.t}")
    if cfg.M is not None and cfg.M < 0:
        bad("M", f"must be nonnegative, got {cfg.M}")
    if cfg.P_target is not None and not 0 < cfg.P_target < 1:
        bad("P_target", f"must lie in (0, 1), got {cfg.P_target}")
    if cfg.branch < 1:
        bad("branch", f"must be a positive integer, got {cfg.branch}")
    if cfg.trials < 1:
        bad("trials", f"must be positive, got {cfg.trials}")
    if cfg.cases < 1:
        bad("cases", f"must be positive, got {cfg.cases}")
    for name in ("delta1", "delta2"):
        v = getattr(cfg, name)
        if v is not None and not v > 0:
            bad(name, f"must be positive, got {v}")
    if cfg.j1 < 0 or cfg.j2 < 0:
        bad("j1/j2", "must be nonnegative")
    if cfg.fullsim_N is not None and not 4 <= cfg.fullsim_N <= fullsim.MAX_N:
        bad("fullsim_N", f"must lie in [4, {fullsim.MAX_N}], got {cfg.fullsim_N}")


# --- output --------------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".12g")
    return "" if x is None else str(x)


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([fmt(v) for v in row] for row in rows)
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def emit(cfg: ExperimentConfig, header, rows, *, echo: bool = False) -> None:
    text = render_csv(header, rows)
    if cfg.output_path:
        write_atomic(cfg.output_path, text)
        if echo:
            sys.stdout.write(text)
    else:
        sys.stdout.write(text)


# --- shared resolution ---------------------------------------------------------


def _params(cfg: ExperimentConfig) -> CoolingParams:
    t = TWO_PI if cfg.t is None else cfg.t
    if cfg.gamma is None and cfg.delta is None:
        return optimize_params(t, cfg.branch).params
    if cfg.gamma is None:
        raise ConfigError("field 'gamma': required when delta is given")
    delta = constrained_delta(cfg.gamma, t, cfg.branch) if cfg.delta is None else cfg.delta
    return CoolingParams(cfg.gamma, delta, t)


def _specs(cfg: ExperimentConfig, default_N: float) -> list[ThermalSpec]:
    N = default_N if cfg.N is None else cfg.N
    if cfg.p0 is not None:
        return [ThermalSpec(N, p0_override=cfg.p0)]
    return [ThermalSpec(N, x) for x in (cfg.dT_ratio or (0.0,))]


def _dT_label(spec: ThermalSpec):
    return None if spec.p0_override is not None else spec.dT_ratio


# --- commands ------------------------------------------------------------------


def cmd_optimize(cfg: ExperimentConfig) -> int:
    if cfg.t is None:
        raise ConfigError("field 't': optimize needs an evolution time (--t)")
    try:
        res = optimize_params(cfg.t, cfg.branch)
    except InfeasibleError as exc:
        raise ConfigError(f"field 't': {exc}")
    header = ["t", "branch", "gamma", "delta", "objective", "b0", "b0_residual", "b1", "b2", "inv_b2"]
    row = [res.t, res.branch, res.gamma, res.delta, res.objective, 1.0 - res.b0_residual,
           res.b0_residual, res.b1, res.b2, 1.0 / res.b2 if res.b2 > 0 else math.inf]
    emit(cfg, header, [row], echo=True)
    return 0


def cmd_fig2(cfg: ExperimentConfig) -> int:
    params = _params(cfg)
    M_max = 10 if cfg.M is None else cfg.M
    rows = []
    for spec in _specs(cfg, 1e23):
        report = cooling_report(spec, params, M_max)
        for m, w0, surv in report.trace:
            rows.append([m, _dT_label(spec), w0, surv])
        if cfg.P_target is not None:
            _fig2_summary(spec, params, cfg.P_target)
    emit(cfg, ["M", "dT_ratio", "cooling_probability", "survival_probability"], rows)
    return 0


def _fig2_summary(spec: ThermalSpec, params: CoolingParams, P: float) -> None:
    label = f"dT_ratio={fmt(_dT_label(spec))} P_target={fmt(P)}"
    try:
        m_min = str(protocol.min_measurements(spec, params, P))
    except protocol.ProtocolError as exc:
        m_min = f"n/a ({exc})"
    try:
        b2 = survival_prob(block_for_type(BlockType.GENERIC, params.gamma, params.delta), params.t)
        bound = fmt(protocol.measurement_bound(spec, b2, P))
    except (protocol.ProtocolError, ValueError) as exc:
        bound = f"n/a ({exc})"
    print(f"{label} M_min={m_min} bound={bound}", file=sys.stderr)


def cmd_fig4(cfg: ExperimentConfig) -> int:
    params = _params(cfg)
    M = 4 if cfg.M is None else cfg.M
    r_grid = cfg.r_grid or DEFAULT_R_GRID
    rows = []
    for spec in _specs(cfg, 1e23):
        values = [protocol.min_gap_probability(spec, params, M, r) for r in r_grid]
        rows += [[r, _dT_label(spec), v] for r, v in zip(r_grid, values)]
        order = sorted(zip(r_grid, values))
        monotone = all(b[1] <= a[1] for a, b in zip(order, order[1:]))
        print(f"dT_ratio={fmt(_dT_label(spec))} M={M} nonincreasing_in_r={str(monotone).lower()}",
              file=sys.stderr)
    emit(cfg, ["r", "dT_ratio", "min_cooling_probability"], rows)
    return 0


def cmd_strategy1(cfg: ExperimentConfig) -> int:
    if cfg.delta1 is None or cfg.delta2 is None:
        raise ConfigError("field 'delta1'/'delta2': strategy1 needs both couplings")
    s1 = StrategyOneConfig(cfg.delta1, cfg.delta2, cfg.j1, cfg.j2)
    header = ["p0", "dT_ratio", "delta1", "delta2", "j1", "j2", "t1", "t2", "p_success",
              "closed_form_value", "closed_form_lower_bound", "conditional_fidelity", "survival_probability"]
    rows = []
    for spec in _specs(cfg, 1e23):
        rep = protocol.strategy_one(spec, s1)
        p0 = rep.trace[0][1]
        rows.append([p0, _dT_label(spec), s1.delta1, s1.delta2, s1.j1, s1.j2, *s1.times,
                     rep.p_success, rep.closed_form_value, protocol.closed_form_lower_bound(p0, s1),
                     rep.conditional_fidelity, rep.survival_probability])
    emit(cfg, header, rows)
    return 0


def cmd_trajectory(cfg: ExperimentConfig) -> int:
    N = 16 if cfg.N is None else cfg.N
    if not float(N).is_integer() or not 2 <= N <= fullsim.MAX_N:
        raise ConfigError(f"field 'N': trajectories need an integer N in [2, {fullsim.MAX_N}], got {N}")
    cfg = replace(cfg, N=float(int(N)))
    if cfg.strategy == 1:
        if cfg.delta1 is None or cfg.delta2 is None:
            raise ConfigError("field 'delta1'/'delta2': strategy 1 needs both couplings")
        params = StrategyOneConfig(cfg.delta1, cfg.delta2, cfg.j1, cfg.j2)
    else:
        params = _params(cfg)
    M = 3 if cfg.M is None else cfg.M
    header = ["N", "dT_ratio", "M", "trials", "seed", "successes", "attempts", "total_resets",
              "max_resets", "mean_measurements", "empirical_survival", "analytic_survival",
              "survival_sigma", "empirical_fidelity", "analytic_fidelity", "fidelity_sigma"]
    rows = []
    for spec in _specs(cfg, 16):
        stats = fullsim.monte_carlo(spec, params, M, cfg.trials, cfg.seed, cfg.w)
        exact = fullsim.run_shot_cooling(spec, params, M, cfg.w)
        s, f = exact.survival_probability, exact.cooling_probability
        rows.append([
            int(spec.n_states), _dT_label(spec), M, stats.trials, cfg.seed, stats.successes,
            stats.attempts, sum(stats.resets), max(stats.resets),
            sum(stats.measurements) / stats.trials, stats.empirical_survival, s,
            math.sqrt(s * (1 - s) / stats.attempts), stats.empirical_fidelity, f,
            math.sqrt(f * (1 - f) / max(stats.successes, 1)),
        ])
    emit(cfg, header, rows)
    return 0


def cmd_verify(cfg: ExperimentConfig) -> int:
    max_N = 16 if cfg.fullsim_N is None else cfg.fullsim_N
    start = time.perf_counter()
    checks = verify.run_all(cases=cfg.cases, max_N=max_N, seed=cfg.seed)
    elapsed = time.perf_counter() - start
    rows = [[c.suite, c.case, c.N, c.quantity, c.analytic, c.brute_force, c.error, c.passed]
            for c in checks]
    emit(cfg, ["suite", "case", "N", "quantity", "analytic", "brute_force", "abs_error", "passed"], rows)

    failed = [c for c in checks if not c.passed]
    suites = sorted({c.suite for c in checks})
    for name in suites:
        mine = [c for c in checks if c.suite == name]
        bad = sum(not c.passed for c in mine)
        worst = max(c.error for c in mine)
        print(f"{name:12s} {len(mine):5d} checks  {bad:3d} failed  max error {worst:.3e}",
              file=sys.stderr)
    verdict = "FAIL" if failed else "OK"
    print(f"{verdict}: {len(checks) - len(failed)}/{len(checks)} checks within "
          f"{verify.TOLERANCE:g} ({elapsed:.1f} s)", file=sys.stderr)
    return 1 if failed else 0


HANDLERS = {
    "optimize": cmd_optimize,
    "fig2": cmd_fig2,
    "fig4": cmd_fig4,
    "strategy1": cmd_strategy1,
    "trajectory": cmd_trajectory,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"gscqc {args.command}: config error: {exc}", file=sys.stderr)
        return 2
    log.info("running %s with %s", args.command, cfg)
    try:
        return HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"gscqc {args.command}: config error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleError, protocol.ProtocolError, ArithmeticError, ValueError) as exc:
        print(f"gscqc {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
