import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from gscqc.fullsim import (
    E,
    G,
    ZeroNormError,
    basis_state,
    build_hamiltonian,
    evolve,
    index,
    measure_ancilla,
    monte_carlo,
    phase_kickback,
    project,
    run_shot_cooling,
    trial_rng,
    unitary,
)
from gscqc.protocol import CoolingParams, StrategyOneConfig, cooling_report, strategy_one
from gscqc.thermal import BulkPattern, Level, SpectrumModel, ThermalSpec


def test_hamiltonian_n2_diagonal():
    H = build_hamiltonian(2, 0, 0.0, 0.0)
    np.testing.assert_array_equal(np.diag(H).real, [0, 0, 1, 1])
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0


def test_hamiltonian_n4_couplings():
    d = 0.3
    H = build_hamiltonian(4, 1, 0.1, d)
    off = H - np.diag(np.diag(H))
    assert np.count_nonzero(off) == 8
    assert np.all(off[off != 0] == d)
    # ring closure: |3, e> couples to |0, g>
    assert H[index(3, E), index(0, G)] == d
    np.testing.assert_allclose(np.diag(H).real, [1.1, 0.9, 0.1, -0.1, 1.1, 0.9, 1.1, 0.9])


@pytest.mark.parametrize("N, w", [(1, 0), (3, 3), (3, -1), (2.5, 0)])
def test_hamiltonian_rejects(N, w):
    with pytest.raises(ValueError):
        build_hamiltonian(N, w, 0.0, 0.1)


@given(st.integers(2, 12), st.floats(-1, 1), st.floats(0, 1), st.data())
@settings(max_examples=50)
def test_hamiltonian_hermitian_and_translation_invariant(N, gamma, delta, data):
    w = data.draw(st.integers(0, N - 1))
    H = build_hamiltonian(N, w, gamma, delta)
    np.testing.assert_array_equal(H, H.conj().T)
    ref = np.linalg.eigvalsh(build_hamiltonian(N, 0, gamma, delta))
    np.testing.assert_allclose(np.linalg.eigvalsh(H), ref, atol=1e-12)


@given(st.integers(2, 10), st.floats(-1, 1), st.floats(0, 1), st.floats(0, 20))
@settings(max_examples=50)
def test_unitary_matches_expm(N, gamma, delta, t):
    H = build_hamiltonian(N, 0, gamma, delta)
    np.testing.assert_allclose(unitary(H, t), expm(-1j * H * t), atol=1e-10)


def test_evolve_and_measure_swap():
    # gamma = 0 generic block swaps |n, g> to |n-1, e> at t = pi / (2 delta)
    N, d = 5, 0.1
    H = build_hamiltonian(N, 0, 0.0, d)
    psi = evolve(basis_state(N, 3), H, math.pi / (2 * d))
    p_g, post_g, post_e = measure_ancilla(psi)
    assert p_g == pytest.approx(0.0, abs=1e-12)
    assert abs(post_e[index(2, E)]) == pytest.approx(1.0, abs=1e-12)
    assert post_g is not None  # numerically tiny but nonempty


def test_measure_empty_branch():
    p_g, post_g, post_e = measure_ancilla(basis_state(3, 1, G))
    assert p_g == 1.0 and post_e is None
    np.testing.assert_array_equal(post_g, basis_state(3, 1, G))
    with pytest.raises(ZeroNormError):
        project(basis_state(3, 1, G), E)


def test_evolve_shape_mismatch():
    with pytest.raises(ValueError):
        evolve(basis_state(3, 0), build_hamiltonian(4, 0, 0, 0.1), 1.0)


def test_zero_rounds_gives_thermal_ground(opt_params):
    spec = ThermalSpec(8, 0.5)
    rep = run_shot_cooling(spec, opt_params, 0, w=3)
    assert rep.cooling_probability == pytest.approx(cooling_report(spec, opt_params, 0).cooling_probability, abs=1e-14)
    assert rep.survival_probability == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("N", [4, 7, 16])
@pytest.mark.parametrize("M", [1, 3, 5])
def test_shot_cooling_matches_blocks(opt_params, N, M):
    spec = ThermalSpec(N, 1.0)
    a = cooling_report(spec, opt_params, M)
    b = run_shot_cooling(spec, opt_params, M, w=N // 2)
    assert b.cooling_probability == pytest.approx(a.cooling_probability, abs=1e-10)
    assert b.survival_probability == pytest.approx(a.survival_probability, abs=1e-10)
    assert b.conditional_fidelity == pytest.approx(b.cooling_probability, abs=1e-12)
    for (m1, w1, s1), (m2, w2, s2) in zip(a.trace, b.trace):
        assert m1 == m2
        assert w1 == pytest.approx(w2, abs=1e-10) and s1 == pytest.approx(s2, abs=1e-10)


def test_shot_cooling_split_spectrum(opt_params):
    sm = SpectrumModel(0.1, Level.HIGH, Level.LOW, BulkPattern.ALTERNATING)
    spec = ThermalSpec(9, 0.2, spectrum=sm)
    a = cooling_report(spec, opt_params, 4)
    b = run_shot_cooling(spec, opt_params, 4, w=5)
    assert b.cooling_probability == pytest.approx(a.cooling_probability, abs=1e-10)


def test_strategy_one_full_simulation():
    spec = ThermalSpec(8, p0_override=0.6)
    cfg = StrategyOneConfig(0.1, 0.1)
    rep = run_shot_cooling(spec, cfg, w=2)
    ref = strategy_one(spec, cfg)
    assert rep.conditional_fidelity == pytest.approx(1.0, abs=1e-10)
    assert rep.success_probability == pytest.approx(ref.p_success, abs=1e-10)


def test_trial_rng_independent_of_split():
    a = trial_rng(7, 3).random(4)
    b = trial_rng(7, 3).random(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, trial_rng(7, 4).random(4))


def test_monte_carlo_deterministic(opt_params):
    spec = ThermalSpec(8, 0.0)
    a = monte_carlo(spec, opt_params, 2, 200, seed=11)
    b = monte_carlo(spec, opt_params, 2, 200, seed=11)
    assert a == b


def test_monte_carlo_cold_start_never_resets(opt_params):
    stats = monte_carlo(ThermalSpec(8, p0_override=1.0), opt_params, 3, 100, seed=0)
    assert stats.resets == [0] * 100
    assert stats.successes == stats.attempts == 100
    assert stats.empirical_fidelity == 1.0
    assert stats.measurement_histogram() == {3: 100}


def test_monte_carlo_perfect_filter():
    # gamma = 0 quarter swap empties every generic block in one round
    d = 0.2
    params = CoolingParams(0.0, d, math.pi / (2 * d))
    spec = ThermalSpec(6, 0.0)
    analytic = cooling_report(spec, params, 1)
    trials = 3000
    stats = monte_carlo(spec, params, 1, trials, seed=5)
    p = analytic.survival_probability
    sigma = math.sqrt(p * (1 - p) / stats.attempts)
    assert abs(stats.empirical_survival - p) <= 3 * sigma
    q = analytic.cooling_probability
    sigma_f = math.sqrt(q * (1 - q) / stats.successes)
    assert abs(stats.empirical_fidelity - q) <= 3 * sigma_f + 1e-12


def test_monte_carlo_reset_cap():
    d = 0.2
    # p0 is tiny and generic blocks never survive: give up after two resets
    params = CoolingParams(0.0, d, math.pi / (2 * d))
    spec = ThermalSpec(6, p0_override=1e-9)
    stats = monte_carlo(spec, params, 1, 5, seed=0, max_resets=2)
    assert stats.successes <= 5
    assert all(r <= 3 for r in stats.resets)
    with pytest.raises(ValueError):
        monte_carlo(spec, params, 1, 0, seed=0)


def test_kickback_on_answer_and_orthogonal():
    N, w = 6, 2
    p_g, post = phase_kickback(basis_state(N, w)[::2], w, N)
    assert p_g == pytest.approx(1.0)
    np.testing.assert_allclose(np.abs(post), np.eye(N)[w], atol=1e-12)
    p_g, post = phase_kickback(np.eye(N)[0], w, N)
    assert p_g == pytest.approx(0.0, abs=1e-15) and post is None


def test_kickback_uniform():
    N, w = 10, 7
    p_g, post = phase_kickback(np.full(N, 1 / math.sqrt(N)), w, N)
    assert p_g == pytest.approx(1 / N, abs=1e-12)
    np.testing.assert_allclose(np.abs(post), np.eye(N)[w], atol=1e-12)


def test_kickback_rejects_bad_state():
    with pytest.raises(ValueError):
        phase_kickback(np.ones(4), 0, 4)
    with pytest.raises(ValueError):
        phase_kickback(np.ones(3) / math.sqrt(3), 0, 4)


@given(st.integers(2, 20), st.data())
@settings(max_examples=50)
def test_kickback_random(N, data):
    w = data.draw(st.integers(0, N - 1))
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=N) + 1j * rng.normal(size=N)
    psi /= np.linalg.norm(psi)
    p_g, post = phase_kickback(psi, w, N)
    assert p_g == pytest.approx(abs(psi[w]) ** 2, abs=1e-12)
    if post is not None:
        assert abs(post[w]) == pytest.approx(1.0, abs=1e-12)
