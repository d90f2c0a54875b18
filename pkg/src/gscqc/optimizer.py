"""Parameter choice for the fixed-parameter (strategy two) protocol.

The answer block must survive every round with certainty (b0 = 1), which
pins delta as a function of gamma; gamma is then chosen to minimize the
survival b2 of the generic blocks.  b0 = 1 requires the answer block's Rabi
frequency to hit a zero of sin(Omega t):

    sqrt(delta^2 + (1/2 - gamma)^2) * t = pi * n,

which at t = 2 pi reads delta^2 = gamma (1 - gamma) + (n^2 - 1) / 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .blockmath import BlockType, block_for_type, survival_prob
from .protocol import CoolingParams

TWO_PI = 2.0 * math.pi
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class OptimizationResult:
    gamma: float
    delta: float
    t: float
    branch: int
    objective: float
    b0_residual: float
    b1: float
    b2: float

    @property
    def params(self) -> CoolingParams:
        return CoolingParams(self.gamma, self.delta, self.t)


def constrained_delta(gamma: float, t: float, n: int = 1) -> float:
    """Coupling that makes the answer block return exactly to |w, g> after time t."""
    if n < 1:
        raise ValueError(f"branch index must be a positive integer, got {n}")
    if t <= 0:
        raise ValueError(f"evolution time must be positive, got {t}")
    radicand = (math.pi * n / t) ** 2 - (0.5 - gamma) ** 2
    if radicand < 0:
        if radicand > -1e-15:
            return 0.0
        raise InfeasibleError(f"no real coupling for gamma={gamma}, t={t}, n={n}")
    return math.sqrt(radicand)


def delta_from_gamma(gamma: float, n: int = 1) -> float:
    """delta = sqrt(gamma (1 - gamma) + (n^2 - 1)/4), the t = 2 pi branch."""
    if n < 1:
        raise ValueError(f"branch index must be a positive integer, got {n}")
    radicand = gamma * (1.0 - gamma) + (n * n - 1) / 4.0
    if radicand < 0:
        raise InfeasibleError(f"gamma={gamma} gives a negative delta^2 on branch n={n}")
    return math.sqrt(radicand)


def _delta(gamma: float, t: float, n: int) -> float:
    # exact algebraic form on the t = 2 pi family, general root otherwise
    if t == TWO_PI:
        return delta_from_gamma(gamma, n)
    return constrained_delta(gamma, t, n)


def objective(gamma: float, t: float = TWO_PI, n: int = 1) -> float:
    """1 - b2: probability that a generic block leaks out of |g> in one round."""
    delta = _delta(gamma, t, n)
    omega2 = delta * delta + gamma * gamma
    if omega2 == 0.0:
        return 0.0
    return delta * delta / omega2 * math.sin(math.sqrt(omega2) * t) ** 2


def feasible_interval(t: float, n: int = 1) -> tuple[float, float]:
    half_width = math.pi * n / t
    return 0.5 - half_width, 0.5 + half_width


def golden_max(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500) -> float:
    """Golden-section search for a maximum of a unimodal f on [lo, hi]."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def optimize_params(
    t: float = TWO_PI,
    n: int = 1,
    *,
    full_range: bool = False,
    grid_points: int = 1000,
    tol: float = 1e-10,
) -> OptimizationResult:
    """Maximize the generic-block leakage subject to b0 = 1.

    gamma is searched on the feasible interval up to 1/2 (``full_range``
    extends the scan to the whole interval).  A coarse grid picks the best
    basin, golden-section search refines it.
    """
    if not t > 0:
        raise InfeasibleError(f"evolution time must be positive, got {t}")
    lo, hi = feasible_interval(t, n)
    if not full_range:
        hi = min(hi, 0.5)
    if not hi > lo:
        raise InfeasibleError(f"empty feasible gamma interval for t={t}, n={n}")

    grid = np.linspace(lo, hi, grid_points)
    values = np.array([objective(g, t, n) for g in grid])
    best = values.max()
    # ties resolve to the smallest gamma
    i = int(np.flatnonzero(values >= best - 1e-10)[0])
    a, b = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid_points - 1)])
    gamma = golden_max(lambda g: objective(g, t, n), a, b, tol=tol)
    if objective(grid[i], t, n) > objective(gamma, t, n):
        gamma = float(grid[i])

    delta = _delta(gamma, t, n)
    b0 = survival_prob(block_for_type(BlockType.ANSWER, gamma, delta), t)
    b1 = survival_prob(block_for_type(BlockType.NEIGHBOR, gamma, delta), t)
    b2 = survival_prob(block_for_type(BlockType.GENERIC, gamma, delta), t)
    return OptimizationResult(
        gamma=gamma,
        delta=delta,
        t=t,
        branch=n,
        objective=objective(gamma, t, n),
        b0_residual=abs(1.0 - b0),
        b1=b1,
        b2=b2,
    )


@lru_cache(maxsize=None)
def optimal_params(t: float = TWO_PI, n: int = 1) -> CoolingParams:
    """Optimized (gamma, delta, t), cached since every sweep starts here."""
    return optimize_params(t, n).params
