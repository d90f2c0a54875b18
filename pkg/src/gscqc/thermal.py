"""Gibbs initialization of the oracle register.

Temperatures are carried as the ratio dT/T0 with T0 = eps / (k ln N), so the
inverse temperature in units of 1/eps is beta = ln N / (1 + dT/T0).  The
database size N is a float: the interesting regime (N ~ 1e23) is never
enumerated, only the class aggregates are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

BOLTZMANN_ERG_PER_K = 1.380649e-16


class Level(Enum):
    LOW = "low"  # energy 1 - r
    HIGH = "high"  # energy 1 + r


class BulkPattern(Enum):
    ALL_LOW = "all_low"
    ALL_HIGH = "all_high"
    ALTERNATING = "alternating"


@dataclass(frozen=True)
class SpectrumModel:
    """Excited-state energies of the oracle.

    ``r = 0`` (the default) is the fully degenerate oracle.  Otherwise every
    excited state sits at 1 - r or 1 + r: ``left`` labels |w-1>, ``right``
    labels |w+1>, and ``bulk`` fills |w+2>, ..., |w-2> in that order
    (alternating patterns start LOW at |w+2>).
    """

    r: float = 0.0
    left: Level = Level.LOW
    right: Level = Level.LOW
    bulk: BulkPattern = BulkPattern.ALL_LOW

    def __post_init__(self):
        if not 0.0 <= self.r < 1.0:
            raise ValueError(f"gap parameter r must lie in [0, 1), got {self.r}")
        object.__setattr__(self, "left", Level(self.left))
        object.__setattr__(self, "right", Level(self.right))
        object.__setattr__(self, "bulk", BulkPattern(self.bulk))

    @property
    def degenerate(self) -> bool:
        return self.r == 0.0

    def energy(self, level: Level) -> float:
        return 1.0 - self.r if level is Level.LOW else 1.0 + self.r

    def bulk_level(self, k: int) -> Level:
        """Level of the k-th bulk state, k = 0 being |w+2>."""
        if self.bulk is BulkPattern.ALL_LOW:
            return Level.LOW
        if self.bulk is BulkPattern.ALL_HIGH:
            return Level.HIGH
        return Level.LOW if k % 2 == 0 else Level.HIGH


DEGENERATE = SpectrumModel()


@dataclass(frozen=True)
class ThermalSpec:
    n_states: float
    dT_ratio: float = 0.0
    p0_override: float | None = None
    spectrum: SpectrumModel = field(default_factory=SpectrumModel)

    def __post_init__(self):
        if not self.n_states >= 2:
            raise ValueError(f"database size N must be at least 2, got {self.n_states}")
        if self.p0_override is not None:
            if not 0.0 < self.p0_override <= 1.0:
                raise ValueError(f"p0 override must lie in (0, 1], got {self.p0_override}")
        elif not self.dT_ratio >= 0.0:
            raise ValueError(f"dT/T0 must be nonnegative, got {self.dT_ratio}")
        if not self.spectrum.degenerate and self.n_states < 4:
            raise ValueError("split spectra need N >= 4")

    @property
    def beta(self) -> float:
        """Inverse temperature in units of 1/eps."""
        return math.log(self.n_states) / (1.0 + self.dT_ratio)


def boltzmann_factor(spec: ThermalSpec) -> float:
    """exp(-eps/kT) = N^(-1/(1 + dT/T0))."""
    if spec.p0_override is not None:
        raise ValueError("the Boltzmann factor is undefined for a p0 override")
    return math.exp(-spec.beta)


def characteristic_temperature(
    epsilon: float, N: float, k: float = BOLTZMANN_ERG_PER_K
) -> float:
    """T0 = eps / (k ln N), the temperature at which p0 is about 1/2."""
    if not N > 1:
        raise ValueError(f"database size N must exceed 1, got {N}")
    if epsilon <= 0 or k <= 0:
        raise ValueError("epsilon and k must be positive")
    return epsilon / (k * math.log(N))


@dataclass(frozen=True)
class Populations:
    """Per-state thermal populations of the oracle, by level.

    ``ground`` is the population of |w>; ``low``/``high`` the population of a
    single excited state at 1 - r / 1 + r.  In the degenerate case both
    equal p1.
    """

    ground: float
    low: float
    high: float

    def of(self, level: Level) -> float:
        return self.low if level is Level.LOW else self.high


def _level_counts(spec: ThermalSpec) -> tuple[float, float]:
    """Number of excited states at LOW and at HIGH energy."""
    sm = spec.spectrum
    n_low = n_high = 0.0
    for level in (sm.left, sm.right):
        if level is Level.LOW:
            n_low += 1
        else:
            n_high += 1
    n_bulk = spec.n_states - 3
    if sm.bulk is BulkPattern.ALL_LOW:
        n_low += n_bulk
    elif sm.bulk is BulkPattern.ALL_HIGH:
        n_high += n_bulk
    else:
        n_bulk_low = math.ceil(n_bulk / 2) if float(n_bulk).is_integer() else n_bulk / 2
        n_low += n_bulk_low
        n_high += n_bulk - n_bulk_low
    return n_low, n_high


def populations(spec: ThermalSpec) -> Populations:
    N = spec.n_states
    if spec.p0_override is not None:
        p0 = spec.p0_override
        p1 = (1.0 - p0) / (N - 1)
        return Populations(p0, p1, p1)
    beta = spec.beta
    if spec.spectrum.degenerate:
        excited = (N - 1) * math.exp(-beta)
        p0 = 1.0 / (1.0 + excited)
        p1 = (1.0 - p0) / (N - 1)
        return Populations(p0, p1, p1)
    sm = spec.spectrum
    n_low, n_high = _level_counts(spec)
    w_low = math.exp(-beta * sm.energy(Level.LOW))
    w_high = math.exp(-beta * sm.energy(Level.HIGH))
    z = 1.0 + n_low * w_low + n_high * w_high
    pops = Populations(1.0 / z, w_low / z, w_high / z)
    total = pops.ground + n_low * pops.low + n_high * pops.high
    if not math.isfinite(total) or abs(total - 1.0) > 1e-12:
        raise ArithmeticError(f"populations fail to normalize (sum {total})")
    return pops


def ground_state_population(spec: ThermalSpec) -> float:
    """Thermal probability p0 of the answer state |w>."""
    return populations(spec).ground


def oracle_energies(N: int, w: int, spectrum: SpectrumModel = DEGENERATE) -> np.ndarray:
    """Diagonal of the oracle Hamiltonian for an enumerable register."""
    N = int(N)
    if not 0 <= w < N:
        raise ValueError(f"answer index {w} outside [0, {N})")
    energies = np.ones(N)
    energies[w] = 0.0
    if spectrum.degenerate:
        return energies
    if N < 4:
        raise ValueError("split spectra need N >= 4")
    energies[(w - 1) % N] = spectrum.energy(spectrum.left)
    energies[(w + 1) % N] = spectrum.energy(spectrum.right)
    for k in range(N - 3):
        energies[(w + 2 + k) % N] = spectrum.energy(spectrum.bulk_level(k))
    return energies


def state_populations(spec: ThermalSpec, w: int = 0) -> np.ndarray:
    """Gibbs populations of every basis state, straight from the energies."""
    N = int(spec.n_states)
    if N != spec.n_states:
        raise ValueError("per-state populations need an integer N")
    energies = oracle_energies(N, w, spec.spectrum)
    if spec.p0_override is not None:
        pops = np.full(N, (1.0 - spec.p0_override) / (N - 1))
        pops[w] = spec.p0_override
        return pops
    weights = np.exp(-spec.beta * energies)
    return weights / weights.sum()
