"""Randomized equivalence checks between the block analytics and the full simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fullsim
from .blockmath import generalized_block, propagator
from .optimizer import optimal_params
from .protocol import CoolingParams, StrategyOneConfig, cooling_report, gap_assignments, strategy_one
from .thermal import ThermalSpec, oracle_energies

TOLERANCE = 1e-10


@dataclass(frozen=True)
class Check:
    suite: str
    case: int
    N: int
    quantity: str
    analytic: float
    brute_force: float

    @property
    def error(self) -> float:
        return abs(self.analytic - self.brute_force)

    @property
    def passed(self) -> bool:
        return bool(self.error <= TOLERANCE)


def _random_params(rng: np.random.Generator) -> CoolingParams:
    return CoolingParams(
        gamma=float(rng.uniform(-1.0, 1.0)),
        delta=float(rng.uniform(1e-6, 0.5)),
        t=float(rng.uniform(1e-6, 4 * math.pi)),
    )


def equivalence_checks(rng, cases: int, max_N: int):
    """Degenerate oracle: cooling and survival probabilities, random (N, w, M, params)."""
    for case in range(cases):
        N = int(rng.integers(4, max_N + 1))
        w = int(rng.integers(0, N))
        M = int(rng.integers(0, 6))
        params = _random_params(rng)
        spec = ThermalSpec(N, float(rng.uniform(0.0, 5.0)))
        a = cooling_report(spec, params, M)
        b = fullsim.run_shot_cooling(spec, params, M, w)
        yield Check("equivalence", case, N, "cooling", a.cooling_probability, b.cooling_probability)
        yield Check("equivalence", case, N, "survival", a.survival_probability, b.survival_probability)


def gap_checks(rng, cases: int, max_N: int):
    """Split spectra: every corner assignment at a random gap."""
    params = optimal_params()
    for case in range(cases):
        N = int(rng.integers(4, max_N + 1))
        r = float(rng.uniform(0.0, 0.5))
        sm = gap_assignments(r)[case % 12]
        spec = ThermalSpec(N, float(rng.uniform(0.0, 3.0)), spectrum=sm)
        M = int(rng.integers(0, 6))
        a = cooling_report(spec, params, M)
        b = fullsim.run_shot_cooling(spec, params, M, int(rng.integers(0, N)))
        yield Check("gap", case, N, "cooling", a.cooling_probability, b.cooling_probability)
        yield Check("gap", case, N, "survival", a.survival_probability, b.survival_probability)


def strategy_one_checks(rng, cases: int, N: int = 8):
    for case in range(cases):
        cfg = StrategyOneConfig(
            float(rng.uniform(1e-3, 0.3)),
            float(rng.uniform(1e-3, 0.3)),
            int(rng.integers(0, 3)),
            int(rng.integers(0, 3)),
        )
        spec = ThermalSpec(N, p0_override=float(rng.uniform(1e-3, 1.0)))
        a = strategy_one(spec, cfg)
        b = fullsim.run_shot_cooling(spec, cfg, w=int(rng.integers(0, N)))
        yield Check("strategy1", case, N, "fidelity", 1.0, b.conditional_fidelity)
        yield Check("strategy1", case, N, "p_success", a.p_success, b.success_probability)


def propagator_checks(rng, cases: int, N: int = 8):
    """Amplitudes of one block, closed form against the dense propagator."""
    for case in range(cases):
        params = _random_params(rng)
        w = int(rng.integers(0, N))
        n = int(rng.integers(0, N))
        energies = oracle_energies(N, w)
        U = fullsim.unitary(fullsim.build_hamiltonian(N, w, params.gamma, params.delta), params.t)
        block = generalized_block(energies[(n - 1) % N], energies[n], params.gamma, params.delta)
        u = propagator(block, params.t)
        rows = [fullsim.index((n - 1) % N, fullsim.E), fullsim.index(n, fullsim.G)]
        dense = U[np.ix_(rows, rows)]
        yield Check("propagator", case, N, "max_entry_error", 0.0, float(np.abs(u - dense).max()))


def kickback_checks(rng, cases: int):
    for case in range(cases):
        N = int(rng.choice([4, 8]))
        w = int(rng.integers(0, N))
        psi = rng.normal(size=N) + 1j * rng.normal(size=N)
        psi /= np.linalg.norm(psi)
        p_g, post = fullsim.phase_kickback(psi, w, N)
        yield Check("kickback", case, N, "p_g", float(abs(psi[w]) ** 2), p_g)
        yield Check("kickback", case, N, "post_fidelity", 1.0, float(abs(post[w]) ** 2))


def run_all(cases: int = 100, max_N: int = 16, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks: list[Check] = []
    checks += equivalence_checks(rng, cases, max_N)
    checks += gap_checks(rng, cases, max_N)
    checks += strategy_one_checks(rng, cases)
    checks += propagator_checks(rng, cases)
    checks += kickback_checks(rng, cases)
    return checks
