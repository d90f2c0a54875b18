"""Measurement-conditioned shot cooling of the oracle register.

The oracle state stays diagonal throughout: after every |g> outcome the
population of state |n> is rescaled by the survival b of the block whose
ground-ancilla member is |n, g>.  States are therefore grouped into block
classes (answer, neighbor, and one or more generic classes), each carrying
a per-state weight and a real-valued multiplicity, so N = 1e23 costs the
same as N = 4.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from .blockmath import generalized_block, survival_prob
from .thermal import (
    BulkPattern,
    Level,
    SpectrumModel,
    ThermalSpec,
    boltzmann_factor,
    populations,
)


class ProtocolError(ValueError):
    pass


class ZeroSurvivalError(ProtocolError):
    """Every remaining trajectory is discarded; the conditioned state is undefined."""


class UnreachableError(ProtocolError):
    pass


class BoundInvalidError(ProtocolError):
    pass


@dataclass(frozen=True)
class CoolingParams:
    """Ancilla splitting gamma, coupling delta and evolution time t between measurements."""

    gamma: float
    delta: float
    t: float

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"coupling delta must be nonnegative, got {self.delta}")
        if self.t < 0:
            raise ValueError(f"evolution time must be nonnegative, got {self.t}")


@dataclass(frozen=True)
class Group:
    """One block class.

    ``weight`` is the population of a single member state, ``b`` the
    per-round probability of measuring the ancilla in |g>.
    """

    label: str
    e_left: float
    e_right: float
    weight: float
    multiplicity: float
    b: float = 1.0

    @property
    def mass(self) -> float:
        return self.weight * self.multiplicity


@dataclass(frozen=True)
class WeightState:
    groups: tuple[Group, ...]
    survival: float = 1.0
    m_done: int = 0

    @property
    def cooling_probability(self) -> float:
        """W0: probability of the answer state, conditioned on survival."""
        return self.groups[0].weight

    @property
    def total(self) -> float:
        return math.fsum(g.mass for g in self.groups)

    def masses(self) -> dict[str, float]:
        return {g.label: g.mass for g in self.groups}


@dataclass(frozen=True)
class CoolingReport:
    cooling_probability: float
    survival_probability: float
    conditional_fidelity: float
    trace: tuple[tuple[int, float, float], ...] = ()  # (M, W0, survival)

    @property
    def success_probability(self) -> float:
        """Joint probability of surviving every round and ending in |w>."""
        return self.cooling_probability * self.survival_probability


@dataclass(frozen=True)
class StrategyOneConfig:
    delta1: float
    delta2: float
    j1: int = 0
    j2: int = 0

    def __post_init__(self):
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise ValueError("strategy one needs positive couplings delta1, delta2")
        if self.j1 < 0 or self.j2 < 0:
            raise ValueError("j1, j2 must be nonnegative integers")

    @property
    def times(self) -> tuple[float, float]:
        return (
            (math.pi / 2 + math.pi * self.j1) / self.delta1,
            (math.pi / 2 + math.pi * self.j2) / self.delta2,
        )

    def stages(self) -> tuple[CoolingParams, CoolingParams]:
        """gamma = 0 swaps the generic blocks, then gamma = -1/2 swaps the neighbor block."""
        t1, t2 = self.times
        return CoolingParams(0.0, self.delta1, t1), CoolingParams(-0.5, self.delta2, t2)


@dataclass(frozen=True)
class StrategyOneReport(CoolingReport):
    p_success: float = 0.0
    closed_form_value: float = 0.0
    answer_survivals: tuple[float, float] = (1.0, 1.0)


# --- initial ensemble --------------------------------------------------------


def _block_classes(spec: ThermalSpec) -> list[tuple[str, Level | None, Level | None, float]]:
    """(label, left level, right level, multiplicity) for every block class.

    A level of None marks the answer state itself (energy 0).  Degenerate
    spectra use LOW with r = 0, i.e. energy 1.
    """
    N = spec.n_states
    sm = spec.spectrum
    if sm.degenerate:
        classes = [
            ("answer", Level.LOW, None, 1.0),
            ("neighbor", None, Level.LOW, 1.0),
        ]
        if N > 2:
            classes.append(("generic", Level.LOW, Level.LOW, N - 2))
        return classes

    n_bulk = N - 3
    pairs: Counter[tuple[Level, Level]] = Counter()
    first = sm.bulk_level(0)
    pairs[(sm.right, first)] += 1
    n_inner = n_bulk - 1
    if sm.bulk is BulkPattern.ALTERNATING:
        if float(n_inner).is_integer():
            n_odd = math.ceil(n_inner / 2)
            last = sm.bulk_level(int(n_bulk) - 1)
        else:
            n_odd = n_inner / 2
            last = Level.LOW
        if n_odd:
            pairs[(Level.LOW, Level.HIGH)] += n_odd
        if n_inner - n_odd:
            pairs[(Level.HIGH, Level.LOW)] += n_inner - n_odd
    else:
        last = first
        if n_inner:
            pairs[(first, first)] += n_inner
    pairs[(last, sm.left)] += 1

    classes = [
        ("answer", sm.left, None, 1.0),
        ("neighbor", None, sm.right, 1.0),
    ]
    for (lo, hi), count in sorted(pairs.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value)):
        classes.append((f"generic:{lo.value}-{hi.value}", lo, hi, float(count)))
    return classes


def _with_b(group: Group, params: CoolingParams) -> Group:
    block = generalized_block(group.e_left, group.e_right, params.gamma, params.delta)
    return replace(group, b=survival_prob(block, params.t))


def initial_weights(spec: ThermalSpec, params: CoolingParams) -> WeightState:
    """Thermal populations grouped by block class, with their survivals under ``params``."""
    pops = populations(spec)
    sm = spec.spectrum

    def energy(level):
        return 0.0 if level is None else sm.energy(level)

    def weight(level):
        return pops.ground if level is None else pops.of(level)

    groups = tuple(
        _with_b(Group(label, energy(left), energy(right), weight(right), mult), params)
        for label, left, right, mult in _block_classes(spec)
    )
    return WeightState(groups)


def with_params(ws: WeightState, params: CoolingParams) -> WeightState:
    """Same populations, survivals recomputed for new protocol parameters."""
    return replace(ws, groups=tuple(_with_b(g, params) for g in ws.groups))


# --- conditioned evolution ---------------------------------------------------


def step(ws: WeightState) -> WeightState:
    """One evolution interval followed by a |g> outcome on the ancilla."""
    norm = math.fsum(g.b * g.mass for g in ws.groups)
    if not norm > 0:
        raise ZeroSurvivalError(f"probability of a |g> outcome is zero after {ws.m_done} rounds")
    groups = tuple(replace(g, weight=g.b * g.weight / norm) for g in ws.groups)
    return WeightState(groups, ws.survival * norm, ws.m_done + 1)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def weights_after(ws0: WeightState, M: int) -> WeightState:
    """Closed form of M conditioned rounds: W_i(M) ~ W_i(0) b_i^M.

    Evaluated in log space so that b^M may underflow without losing the
    ratio between classes.
    """
    if M < 0:
        raise ValueError(f"number of measurements must be nonnegative, got {M}")
    if M == 0:
        return ws0
    log_terms = np.array([_log(g.weight) + M * _log(g.b) for g in ws0.groups])
    log_mult = np.array([_log(g.multiplicity) for g in ws0.groups])
    log_mass = log_terms + log_mult
    top = log_mass.max()
    if top == -math.inf:
        raise ZeroSurvivalError(f"probability of {M} consecutive |g> outcomes is zero")
    log_norm = top + math.log(math.fsum(np.exp(log_mass - top)))
    groups = tuple(
        replace(g, weight=math.exp(lt - log_norm)) for g, lt in zip(ws0.groups, log_terms)
    )
    return WeightState(groups, ws0.survival * math.exp(log_norm), ws0.m_done + M)


def cooling_report(spec: ThermalSpec, params: CoolingParams, M: int) -> CoolingReport:
    ws0 = initial_weights(spec, params)
    trace = []
    for m in range(M + 1):
        ws = weights_after(ws0, m)
        trace.append((m, ws.cooling_probability, ws.survival))
    _, w0, surv = trace[-1]
    return CoolingReport(w0, surv, w0, tuple(trace))


# --- strategy one ------------------------------------------------------------


def closed_form_success(p0: float, cfg: StrategyOneConfig) -> float:
    """The two-step success probability with the factor (1/4)/(delta^2 + 1/4) in both steps."""
    value = p0
    for delta, j in ((cfg.delta1, cfg.j1), (cfg.delta2, cfg.j2)):
        omega2 = delta * delta + 0.25
        phase = math.sqrt(omega2) * (math.pi / 2 + math.pi * j) / delta
        value *= math.cos(phase) ** 2 + 0.25 / omega2 * math.sin(phase) ** 2
    return value


def closed_form_lower_bound(p0: float, cfg: StrategyOneConfig) -> float:
    """p0 (1 - d^2/(d^2 + 1/4)) with d the larger of the two couplings."""
    d = max(cfg.delta1, cfg.delta2)
    return p0 * (1.0 - d * d / (d * d + 0.25))


def strategy_one(spec: ThermalSpec, cfg: StrategyOneConfig) -> StrategyOneReport:
    """Two swap-engineered rounds that leave only |w> on a double |g> outcome."""
    if not spec.spectrum.degenerate:
        raise ProtocolError("strategy one is defined for the degenerate oracle only")
    first, second = cfg.stages()
    ws0 = initial_weights(spec, first)
    ws1 = step(ws0)
    ws2 = step(with_params(ws1, second))
    b0_1 = ws0.groups[0].b
    b0_2 = with_params(ws1, second).groups[0].b
    p0 = ws0.cooling_probability
    w0 = ws2.cooling_probability
    trace = (
        (0, p0, 1.0),
        (1, ws1.cooling_probability, ws1.survival),
        (2, w0, ws2.survival),
    )
    return StrategyOneReport(
        cooling_probability=w0,
        survival_probability=ws2.survival,
        conditional_fidelity=w0,
        trace=trace,
        p_success=p0 * b0_1 * b0_2,
        closed_form_value=closed_form_success(p0, cfg),
        answer_survivals=(b0_1, b0_2),
    )


# --- measurement counts ------------------------------------------------------


def min_measurements(
    spec: ThermalSpec, params: CoolingParams, P_target: float, max_M: int = 1 << 40
) -> int:
    """Smallest M with W0(M) >= P_target, found by doubling and bisection."""
    if not P_target < 1:
        raise UnreachableError("a cooling probability of 1 is never reached in finite M")
    ws0 = initial_weights(spec, params)
    if ws0.cooling_probability >= P_target:
        return 0
    answer, *others = ws0.groups
    b_rest = max((g.b for g in others if g.mass > 0), default=0.0)
    if answer.weight <= 0 or answer.b <= b_rest:
        raise UnreachableError(
            f"answer survival {answer.b:.6g} does not exceed the best competitor {b_rest:.6g}"
        )

    def reached(m):
        return weights_after(ws0, m).cooling_probability >= P_target

    hi = 1
    while not reached(hi):
        hi *= 2
        if hi > max_M:
            raise UnreachableError(f"target {P_target} not reached within {max_M} measurements")
    lo = hi // 2  # reached(lo) is False (or lo == 0, already excluded)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reached(mid):
            hi = mid
        else:
            lo = mid
    return hi


def measurement_bound(spec: ThermalSpec, b2: float, P_target: float) -> float:
    """Closed-form estimate log_{1/b2}(P N / (1 - P - a P)), clamped at 0."""
    a = boltzmann_factor(spec)
    if not P_target < 1.0 - a:
        raise BoundInvalidError(
            f"bound needs P_target < 1 - a = {1.0 - a:.6g}, got {P_target}"
        )
    if not 0.0 <= b2 <= 1.0:
        raise ValueError(f"b2 must lie in [0, 1], got {b2}")
    if P_target <= 0:
        return 0.0
    if b2 >= 1.0:
        return math.inf
    if b2 == 0.0:
        return 0.0
    value = math.log(P_target * spec.n_states / (1.0 - P_target - a * P_target)) / -math.log(b2)
    return max(0.0, value)


def copies_success(p_s: float, K: int) -> float:
    """Probability that at least one of K independent oracle copies succeeds."""
    if not 0.0 <= p_s <= 1.0:
        raise ValueError(f"p_s must lie in [0, 1], got {p_s}")
    if K < 1:
        raise ValueError(f"need at least one copy, got K={K}")
    if K == 1:
        return p_s
    return 1.0 - (1.0 - p_s) ** K


def copies_needed(p_s: float, P_target: float) -> int:
    if not 0.0 <= p_s <= 1.0:
        raise ValueError(f"p_s must lie in [0, 1], got {p_s}")
    if not P_target < 1.0:
        if p_s == 1.0:
            return 1
        raise UnreachableError("P_target = 1 needs p_s = 1")
    if P_target <= p_s:
        return 1
    if p_s == 0.0:
        raise UnreachableError("no number of copies succeeds when p_s = 0")
    K = max(1, math.ceil(math.log1p(-P_target) / math.log1p(-p_s)))
    # guard the float ceiling against off-by-one either way
    while K > 1 and copies_success(p_s, K - 1) >= P_target:
        K -= 1
    while copies_success(p_s, K) < P_target:
        K += 1
    return K


# --- split-spectrum (gap) model ----------------------------------------------


def gap_model_probability(spec: ThermalSpec, params: CoolingParams, M: int) -> float:
    """W0(M) for an oracle whose excited states are split by +-r."""
    return weights_after(initial_weights(spec, params), M).cooling_probability


def gap_assignments(r: float) -> list[SpectrumModel]:
    """The 12 corner assignments: |w-1>, |w+1> at 1 +- r, bulk low/high/alternating."""
    return [
        SpectrumModel(r, left, right, bulk)
        for left, right, bulk in product(Level, Level, BulkPattern)
    ]


def min_gap_probability(spec: ThermalSpec, params: CoolingParams, M: int, r: float) -> float:
    return min(
        gap_model_probability(replace(spec, spectrum=sm), params, M) for sm in gap_assignments(r)
    )
