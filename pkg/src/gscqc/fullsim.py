"""Brute-force simulation of oracle + ancilla in the full 2N-dimensional space.

This module deliberately shares nothing with the block analytics except the
thermal populations: the Hamiltonian is assembled term by term, propagated
through a dense Hermitian eigendecomposition, and measured by projecting the
state vector.  It is the reference against which ``protocol`` is checked.

Basis: index(n, s) = 2 n + s with s = 0 for ancilla |g>, s = 1 for |e>.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .protocol import CoolingParams, CoolingReport, StrategyOneConfig
from .thermal import DEGENERATE, SpectrumModel, ThermalSpec, oracle_energies, state_populations

MAX_N = 4096
G, E = 0, 1


class ZeroNormError(ValueError):
    pass


def index(n: int, s: int) -> int:
    return 2 * n + s


def build_hamiltonian(
    N: int,
    w: int,
    gamma: float,
    delta: float,
    spectrum: SpectrumModel = DEGENERATE,
) -> np.ndarray:
    """H0 (x) 1 + gamma (|g><g| - |e><e|) + delta sum_n (|n,e><n+1,g| + h.c.) on a ring."""
    if not 2 <= N <= MAX_N or int(N) != N:
        raise ValueError(f"N must be an integer in [2, {MAX_N}], got {N}")
    N = int(N)
    if not 0 <= w < N:
        raise ValueError(f"answer index {w} outside [0, {N})")
    energies = oracle_energies(N, w, spectrum)
    H = np.zeros((2 * N, 2 * N), dtype=complex)
    for n in range(N):
        H[index(n, G), index(n, G)] = energies[n] + gamma
        H[index(n, E), index(n, E)] = energies[n] - gamma
        i, j = index(n, E), index((n + 1) % N, G)
        H[i, j] += delta
        H[j, i] += delta
    return H


def unitary(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) via eigh."""
    evals, evecs = np.linalg.eigh(H)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def evolve(state: np.ndarray, H: np.ndarray, t: float) -> np.ndarray:
    if state.shape[0] != H.shape[0]:
        raise ValueError(f"state of length {state.shape[0]} does not match H of size {H.shape[0]}")
    return unitary(H, t) @ state


def basis_state(N: int, n: int, s: int = G) -> np.ndarray:
    psi = np.zeros(2 * N, dtype=complex)
    psi[index(n, s)] = 1.0
    return psi


def project(state: np.ndarray, outcome: int) -> np.ndarray:
    """Normalized post-measurement state for ancilla outcome ``outcome``."""
    post = np.zeros_like(state)
    post[outcome::2] = state[outcome::2]
    norm = np.linalg.norm(post)
    if norm == 0.0:
        raise ZeroNormError(f"ancilla outcome {'ge'[outcome]} has zero probability")
    return post / norm


def measure_ancilla(state: np.ndarray):
    """Probability of |g> and the two normalized branches (None for an empty branch)."""
    p_g = float(np.sum(np.abs(state[G::2]) ** 2))
    p_e = float(np.sum(np.abs(state[E::2]) ** 2))
    post_g = project(state, G) if p_g > 0 else None
    post_e = project(state, E) if p_e > 0 else None
    return p_g, post_g, post_e


def _stages(params, M: int) -> list[CoolingParams]:
    if isinstance(params, StrategyOneConfig):
        return list(params.stages())
    return [params] * M


def run_shot_cooling(
    spec: ThermalSpec,
    params: CoolingParams | StrategyOneConfig,
    M: int = 0,
    w: int = 0,
) -> CoolingReport:
    """Conditioned cooling of the thermal ensemble, as a weighted sum of pure runs.

    Each initial basis state |n, g> is evolved and projected M times without
    renormalization; the squared norm left over is its survival.  For a
    strategy-one configuration both stages run and ``M`` is ignored.
    """
    N = int(spec.n_states)
    pops = state_populations(spec, w)
    stages = _stages(params, M)
    propagators = {}
    for p in stages:
        if p not in propagators:
            H = build_hamiltonian(N, w, p.gamma, p.delta, spec.spectrum)
            propagators[p] = unitary(H, p.t)

    psi = np.zeros((2 * N, N), dtype=complex)
    for n in range(N):
        psi[index(n, G), n] = 1.0
    answer = index(w, G)

    def summary(psi):
        norms = np.sum(np.abs(psi) ** 2, axis=0)
        survival = float(pops @ norms)
        if survival <= 0.0:
            raise ZeroNormError("no ensemble member survives")
        in_answer = float(pops @ np.abs(psi[answer]) ** 2)
        return in_answer / survival, survival

    trace = [(0, *summary(psi))]
    for m, p in enumerate(stages, start=1):
        psi = propagators[p] @ psi
        psi[E::2] = 0.0
        trace.append((m, *summary(psi)))
    _, w0, survival = trace[-1]
    # oracle density conditioned on survival, read off the g-sector
    rho = (psi[G::2] * pops) @ psi[G::2].conj().T / survival
    fidelity = float(rho[w, w].real)
    return CoolingReport(w0, survival, fidelity, tuple(trace))


@dataclass
class TrajectoryStats:
    trials: int
    successes: int
    attempts: int
    answer_hits: int
    resets: list[int] = field(default_factory=list)
    measurements: list[int] = field(default_factory=list)

    @property
    def empirical_survival(self) -> float:
        """Fraction of attempts that passed all M measurements."""
        return self.successes / self.attempts if self.attempts else math.nan

    @property
    def empirical_fidelity(self) -> float:
        """Fraction of completed runs that ended in |w>."""
        return self.answer_hits / self.successes if self.successes else math.nan

    def reset_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.resets).items()))

    def measurement_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.measurements).items()))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per trial, so any split of trials gives the same result."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def monte_carlo(
    spec: ThermalSpec,
    params: CoolingParams | StrategyOneConfig,
    M: int,
    trials: int,
    seed: int,
    w: int = 0,
    max_resets: int = 100_000,
) -> TrajectoryStats:
    """Reset-on-failure trajectories of the protocol loop.

    Every trial draws an initial oracle state from the thermal ensemble and
    attempts M evolve-and-measure rounds; an |e> outcome discards the run
    and starts over from a fresh thermal draw.  A trial succeeds once a run
    completes, or fails after ``max_resets`` discarded runs.  A strategy-one
    configuration runs its two stages and ignores ``M``.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    N = int(spec.n_states)
    pops = state_populations(spec, w)
    cdf = np.cumsum(pops)
    unitaries = [
        unitary(build_hamiltonian(N, w, p.gamma, p.delta, spec.spectrum), p.t)
        for p in _stages(params, M)
    ]

    stats = TrajectoryStats(trials=trials, successes=0, attempts=0, answer_hits=0)
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        resets = 0
        measured = 0
        done = False
        while not done and resets <= max_resets:
            stats.attempts += 1
            n0 = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), N - 1)
            psi = basis_state(N, n0)
            for U in unitaries:
                psi = U @ psi
                p_g = float(np.sum(np.abs(psi[G::2]) ** 2))
                measured += 1
                if rng.random() < p_g:
                    psi = project(psi, G)
                else:
                    resets += 1
                    break
            else:
                done = True
        stats.resets.append(resets)
        stats.measurements.append(measured)
        if done:
            stats.successes += 1
            if rng.random() < abs(psi[index(w, G)]) ** 2:
                stats.answer_hits += 1
    return stats


def phase_kickback(psi: np.ndarray, w: int, N: int):
    """One-measurement projection onto a known |w> via U = exp(-i pi H0).

    Ancilla in |g>, Hadamard, controlled-U (acting when the ancilla is |e>),
    Hadamard, measure.  Returns p_g and the normalized oracle state on
    outcome g (None if that outcome is impossible).
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (N,):
        raise ValueError(f"oracle state must have length {N}")
    norm = np.linalg.norm(psi)
    if not math.isclose(norm, 1.0, rel_tol=0, abs_tol=1e-10):
        raise ValueError(f"oracle state is not normalized (norm {norm})")
    # levels are 0 and 1, so exp(-i pi H0) is exactly diag(+1, -1, ..., -1)
    U = np.where(oracle_energies(N, w) == 0.0, 1.0, -1.0)

    # H, then U on the |e> half, then H: the g branch carries (1 + U)/2
    amp_g = 0.5 * (psi + U * psi)
    p_g = float(np.sum(np.abs(amp_g) ** 2))
    if p_g == 0.0:
        return p_g, None
    return p_g, amp_g / math.sqrt(p_g)
