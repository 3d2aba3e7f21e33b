import math

import numpy as np
import pytest
from scipy.optimize import minimize

from cohchan.channels import QuantumChannel, cj_state
from cohchan.entropies import (
    EntropyParams,
    ParameterDomainError,
    sandwiched_relative_entropy,
    unified_relative_entropy,
)
from cohchan.monotones import (
    MixedChoiStateError,
    NoPureDecompositionError,
    OptimizerConfig,
    RoofSearchConfig,
    UnsupportedDimensionError,
    project_to_simplex,
    sandwiched_channel_coherence_convex_roof,
    sandwiched_channel_coherence_pure,
    state_urs_coherence,
    urs_channel_coherence,
    urs_coherence_bruteforce,
    urs_objective,
)
from cohchan.properties import random_channel, random_coherent_channel, random_unitary
from cohchan.qubit_examples import (
    amplitude_damping_channel,
    dephasing_channel,
    hadamard_channel,
    identity_channel,
    unitary_channel,
)

SQRT2 = math.sqrt(2.0)


def minimize_over_diagonal(rho, value_of_sigma_weights, restarts=8, seed=0):
    """Test-local oracle: softmax-parameterized search over diagonal states."""
    dim = rho.shape[0]
    rng = np.random.default_rng(seed)
    best = math.inf
    for k in range(restarts):
        z0 = np.zeros(dim) if k == 0 else rng.normal(size=dim)
        res = minimize(
            value_of_sigma_weights,
            z0,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
        )
        best = min(best, float(res.fun))
    return best


def softmax(z):
    w = np.exp(z - z.max())
    return w / w.sum()


# --------------------------------------------------------------------------
# closed form
# --------------------------------------------------------------------------


def test_urs_dephasing_is_zero():
    for r, s in ((0.5, 1.0), (0.3, -1.0), (0.8, 0.0)):
        report = urs_channel_coherence(dephasing_channel(), EntropyParams(r=r, s=s))
        assert abs(report.value) < 1e-12
        assert abs(report.t - 1.0) < 1e-12


def test_urs_hadamard_reference_values():
    report = urs_channel_coherence(hadamard_channel(), EntropyParams(r=0.5, s=1.0))
    assert abs(report.value - 1.0) < 1e-12
    assert np.max(np.abs(report.optimal_diag - 0.25)) < 1e-12
    assert abs(report.t - 0.25) < 1e-12
    half = urs_channel_coherence(hadamard_channel(), EntropyParams(r=0.5, s=0.5))
    assert abs(half.value - (4.0 - 2.0 * SQRT2)) < 1e-12


def test_urs_report_upper_bound_and_t_range():
    rng = np.random.default_rng(0)
    for _ in range(20):
        channel = random_channel(rng)
        report = urs_channel_coherence(channel, EntropyParams(r=0.6, s=0.3))
        assert 0.0 < report.t <= 1.0 + 1e-12
        assert report.value <= report.upper_bound + 1e-9
        assert report.value >= -1e-10
        assert abs(report.optimal_diag.sum() - 1.0) < 1e-10
        assert np.all(report.optimal_diag >= 0.0)


def test_urs_optimal_diag_reproduces_closed_form_through_objective():
    rng = np.random.default_rng(1)
    for _ in range(10):
        channel = random_channel(rng)
        for r, s in ((0.5, 1.0), (0.7, -0.5), (0.4, 0.0)):
            report = urs_channel_coherence(channel, EntropyParams(r=r, s=s))
            m = cj_state(channel).matrix
            from cohchan.monotones import _diagonal_power_weights

            q = _diagonal_power_weights(m, r)
            assert abs(urs_objective(report.optimal_diag, q, r, s) - report.value) < 1e-10


def test_urs_refuses_out_of_regime_parameters():
    for r, s in ((1.0, 1.0), (0.0, 1.0), (1.2, 0.5), (0.5, 1.5)):
        with pytest.raises(ParameterDomainError):
            urs_channel_coherence(hadamard_channel(), EntropyParams(r=r, s=s))


def test_urs_limit_branch_flag():
    report = urs_channel_coherence(hadamard_channel(), EntropyParams(r=0.5, s=0.0))
    assert "limit-branch-used" in report.flags
    assert abs(report.value - math.log(4.0)) < 1e-12


def test_state_urs_diagonal_and_plus_state():
    assert abs(state_urs_coherence(np.diag([0.3, 0.7]), EntropyParams(0.5, 1.0)).value) < 1e-12
    plus = np.full((2, 2), 0.5, dtype=complex)
    report = state_urs_coherence(plus, EntropyParams(r=0.5, s=1.0))
    assert abs(report.value - (2.0 - SQRT2)) < 1e-12


def test_state_urs_on_cj_state_matches_channel_value():
    params = EntropyParams(r=0.5, s=0.5)
    channel_report = urs_channel_coherence(hadamard_channel(), params)
    state_report = state_urs_coherence(cj_state(hadamard_channel()).matrix, params)
    assert state_report.value == channel_report.value


def test_state_urs_matches_full_entropy_minimization():
    # independent oracle: minimize the full matrix entropy over diagonal
    # references, no closed form involved
    rng = np.random.default_rng(2)
    params = EntropyParams(r=0.5, s=1.0)
    for _ in range(3):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = g @ g.conj().T
        rho = rho / np.real(np.trace(rho))

        def objective(z):
            sigma = np.diag(softmax(z)).astype(complex)
            return unified_relative_entropy(rho, sigma, params).value

        direct = minimize_over_diagonal(rho, objective)
        closed = state_urs_coherence(rho, params).value
        assert abs(direct - closed) < 1e-6


# --------------------------------------------------------------------------
# brute-force oracle
# --------------------------------------------------------------------------


def test_project_to_simplex():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.normal(size=5) * 10.0
        p = project_to_simplex(v)
        assert abs(p.sum() - 1.0) < 1e-12
        assert np.all(p >= 0.0)
    assert np.allclose(project_to_simplex(np.array([0.2, 0.3, 0.5])), [0.2, 0.3, 0.5])


def test_bruteforce_dephasing():
    report = urs_coherence_bruteforce(dephasing_channel(), EntropyParams(r=0.5, s=1.0))
    assert abs(report.value) < 1e-10
    assert np.max(np.abs(report.optimal_diag - np.array([0.5, 0.0, 0.0, 0.5]))) < 1e-6
    assert "non-converged" not in report.flags


def test_bruteforce_hadamard():
    report = urs_coherence_bruteforce(hadamard_channel(), EntropyParams(r=0.5, s=1.0))
    assert abs(report.value - 1.0) < 1e-6
    assert np.max(np.abs(report.optimal_diag - 0.25)) < 1e-6


def test_bruteforce_matches_closed_form_on_random_channels():
    rng = np.random.default_rng(4)
    config = OptimizerConfig(restarts=8, seed=7)
    for _ in range(5):
        channel = random_channel(rng)
        for r, s in ((0.5, 1.0), (0.7, -0.5), (0.4, 0.0)):
            params = EntropyParams(r=r, s=s)
            closed = urs_channel_coherence(channel, params).value
            brute = urs_coherence_bruteforce(channel, params, config).value
            assert abs(closed - brute) / max(closed, 1e-6) < 1e-5


def test_bruteforce_is_deterministic():
    params = EntropyParams(r=0.5, s=0.5)
    channel = random_coherent_channel(np.random.default_rng(5))
    first = urs_coherence_bruteforce(channel, params, OptimizerConfig(seed=3))
    second = urs_coherence_bruteforce(channel, params, OptimizerConfig(seed=3))
    assert first.value == second.value
    assert np.array_equal(first.optimal_diag, second.optimal_diag)


# --------------------------------------------------------------------------
# sandwiched: pure formula
# --------------------------------------------------------------------------


def test_sandwiched_pure_hadamard_is_two():
    for r in (0.6, 0.75, 2.0, 10.0):
        report = sandwiched_channel_coherence_pure(hadamard_channel(), r)
        assert abs(report.value - 2.0) < 1e-9
        assert abs(report.upper_bound - 2.0) < 1e-12


def test_sandwiched_pure_identity_is_one():
    for r in (0.6, 2.0, 5.0):
        assert abs(sandwiched_channel_coherence_pure(identity_channel(), r).value - 1.0) < 1e-9


def test_sandwiched_pure_quarter_turn_equals_hadamard_value():
    report = sandwiched_channel_coherence_pure(unitary_channel(math.pi / 2.0), 2.0)
    assert abs(report.value - 2.0) < 1e-9


def test_sandwiched_pure_rejects_mixed_choi():
    with pytest.raises(MixedChoiStateError, match="convex-roof"):
        sandwiched_channel_coherence_pure(dephasing_channel(), 2.0)


def test_sandwiched_pure_rejects_bad_order():
    with pytest.raises(ParameterDomainError):
        sandwiched_channel_coherence_pure(hadamard_channel(), 0.4)


def test_sandwiched_pure_matches_direct_minimization():
    # independent oracle: minimize the sandwiched entropy over diagonal
    # references directly
    rng = np.random.default_rng(6)
    for r in (0.75, 2.0):
        u = random_unitary(rng, 2)
        channel = QuantumChannel(2, 2, kraus=(u,))
        rho = cj_state(channel).matrix

        def objective(z):
            sigma = np.diag(softmax(z)).astype(complex)
            return sandwiched_relative_entropy(rho, sigma, r).value

        direct = minimize_over_diagonal(rho, objective)
        report = sandwiched_channel_coherence_pure(channel, r)
        assert abs(direct - report.value) < 1e-6
        # the reported optimal diagonal achieves the minimum
        achieved = sandwiched_relative_entropy(
            rho, np.diag(report.optimal_diag).astype(complex), r
        ).value
        assert abs(achieved - report.value) < 1e-9


# --------------------------------------------------------------------------
# convex roof
# --------------------------------------------------------------------------

FAST_ROOF = RoofSearchConfig(max_terms=3, restarts=12, seed=0)


def test_roof_equals_pure_on_unitary_channels():
    rng = np.random.default_rng(7)
    for _ in range(5):
        channel = QuantumChannel(2, 2, kraus=(random_unitary(rng, 2),))
        pure = sandwiched_channel_coherence_pure(channel, 2.0).value
        roof = sandwiched_channel_coherence_convex_roof(channel, 2.0, FAST_ROOF)
        assert abs(roof.value - pure) < 1e-8
        assert roof.value <= pure + 1e-12
        assert len(roof.decomposition) == 1
        assert "heuristic-upper-bound" in roof.flags


def test_roof_dephasing_upper_bound_one():
    roof = sandwiched_channel_coherence_convex_roof(dephasing_channel(), 2.0, FAST_ROOF)
    assert roof.value <= 1.0 + 1e-8
    weights = [w for w, _ in roof.decomposition]
    assert abs(sum(weights) - 1.0) < 1e-8
    # every reported component is a unitary channel operator
    for _, op in roof.decomposition:
        assert np.max(np.abs(op.conj().T @ op - np.eye(2))) < 1e-6


def test_roof_rejects_non_unital_and_wrong_dimension():
    with pytest.raises(NoPureDecompositionError, match="unital"):
        sandwiched_channel_coherence_convex_roof(amplitude_damping_channel(0.3), 2.0)
    qutrit = QuantumChannel(3, 3, kraus=(np.eye(3, dtype=complex),))
    with pytest.raises(UnsupportedDimensionError):
        sandwiched_channel_coherence_convex_roof(qutrit, 2.0)


def test_roof_decomposition_rebuilds_choi_state():
    roof = sandwiched_channel_coherence_convex_roof(dephasing_channel(), 2.0, FAST_ROOF)
    rebuilt = np.zeros((4, 4), dtype=complex)
    for weight, op in roof.decomposition:
        vec = op.T.reshape(-1) / math.sqrt(2.0)
        rebuilt += weight * np.outer(vec, vec.conj())
    assert np.max(np.abs(rebuilt - cj_state(dephasing_channel()).matrix)) < 1e-6
