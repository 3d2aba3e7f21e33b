import numpy as np
import pytest

from cohchan.channels import (
    ChannelValidationError,
    QuantumChannel,
    choi_from_kraus,
    cj_state,
    compose_channels,
    is_incoherent_channel,
    kraus_from_choi,
    mix_channels,
    validate_cptp,
)
from cohchan.properties import random_channel, random_unitary
from cohchan.qubit_examples import dephasing_channel, hadamard_channel, identity_channel

HADAMARD_CJ = 0.25 * np.array(
    [
        [1, 1, 1, -1],
        [1, 1, 1, -1],
        [1, 1, 1, -1],
        [-1, -1, -1, 1],
    ],
    dtype=complex,
)


def bell_projector():
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    return np.outer(phi, phi.conj())


def test_choi_identity_channel():
    j = choi_from_kraus(identity_channel())
    expected = 2.0 * bell_projector()  # sum_ij |ii><jj|
    assert np.max(np.abs(j - expected)) < 1e-12
    assert abs(np.trace(j) - 2.0) < 1e-12
    assert np.linalg.matrix_rank(j, tol=1e-10) == 1


def test_choi_hadamard_channel_matches_reference_matrix():
    # J has trace dim_in = 2, so J = 2 * (normalized CJ state)
    j = choi_from_kraus(hadamard_channel())
    assert np.max(np.abs(j - 2.0 * HADAMARD_CJ)) < 1e-12
    assert abs(np.trace(j) - 2.0) < 1e-12


def test_choi_dephasing_channel():
    j = choi_from_kraus(dephasing_channel())
    # applying the Kraus sum directly: |00><00| + |11><11|
    assert np.max(np.abs(j - np.diag([1.0, 0.0, 0.0, 1.0]))) < 1e-12


def test_choi_rejects_non_trace_preserving():
    half = QuantumChannel(2, 2, kraus=(0.5 * np.eye(2, dtype=complex),))
    with pytest.raises(ChannelValidationError, match="trace preserving"):
        choi_from_kraus(half)


def test_cj_state_identity_and_hadamard_and_dephasing():
    assert np.max(np.abs(cj_state(identity_channel()).matrix - bell_projector())) < 1e-12
    assert np.max(np.abs(cj_state(hadamard_channel()).matrix - HADAMARD_CJ)) < 1e-12
    assert np.max(
        np.abs(cj_state(dephasing_channel()).matrix - np.diag([0.5, 0.0, 0.0, 0.5]))
    ) < 1e-12


def test_cj_state_invariants_on_random_channels():
    rng = np.random.default_rng(1)
    for _ in range(20):
        channel = random_channel(rng)
        state = cj_state(channel)
        assert abs(np.trace(state.matrix) - 1.0) < 1e-10
        marginal = np.einsum("ibjb->ij", state.matrix.reshape(2, 2, 2, 2))
        assert np.max(np.abs(marginal - np.eye(2) / 2)) < 1e-10
        assert np.linalg.eigvalsh(state.matrix).min() > -1e-10


def test_kraus_from_choi_identity():
    ops = kraus_from_choi(2.0 * bell_projector(), (2, 2))
    assert len(ops) == 1
    k = ops[0]
    # single Kraus proportional to the identity up to a global phase
    phase = k[0, 0] / abs(k[0, 0])
    assert np.max(np.abs(k / phase - np.eye(2))) < 1e-9


def test_kraus_from_choi_round_trips():
    rng = np.random.default_rng(2)
    for _ in range(10):
        channel = random_channel(rng)
        j = channel.choi_matrix()
        ops = kraus_from_choi(j, (2, 2))
        rebuilt = QuantumChannel(2, 2, kraus=tuple(ops)).choi_matrix()
        assert np.max(np.abs(rebuilt - j)) < 1e-9


def test_kraus_from_choi_dephasing_round_trip():
    j = np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex)
    ops = kraus_from_choi(j, (2, 2))
    rebuilt = QuantumChannel(2, 2, kraus=tuple(ops)).choi_matrix()
    assert np.max(np.abs(rebuilt - j)) < 1e-9


def test_kraus_from_choi_random_unitary_is_unitary():
    rng = np.random.default_rng(3)
    for _ in range(5):
        u = random_unitary(rng, 2)
        j = QuantumChannel(2, 2, kraus=(u,)).choi_matrix()
        ops = kraus_from_choi(j, (2, 2))
        assert len(ops) == 1
        k = ops[0]
        assert np.max(np.abs(k.conj().T @ k - np.eye(2))) < 1e-9


def test_kraus_from_choi_rejects_bad_marginal():
    with pytest.raises(ChannelValidationError, match="trace preserving"):
        kraus_from_choi(np.diag([1.0, 1.0, 1.0, 1.0]) * 0.4, (2, 2))


def test_validate_cptp_passes_good_channels():
    assert validate_cptp(hadamard_channel()).passed
    assert validate_cptp(identity_channel()).passed


def test_validate_cptp_flags_scaled_identity():
    half = QuantumChannel(2, 2, kraus=(0.5 * np.eye(2, dtype=complex),))
    report = validate_cptp(half)
    assert not report.passed
    assert not report.trace_preserving
    assert abs(report.trace_preservation_error - 0.75) < 1e-12


def test_is_incoherent_channel():
    assert is_incoherent_channel(dephasing_channel())
    assert not is_incoherent_channel(identity_channel())
    assert not is_incoherent_channel(hadamard_channel())


def test_representation_agreement_enforced():
    with pytest.raises(ChannelValidationError, match="disagree"):
        QuantumChannel(
            2,
            2,
            kraus=(np.eye(2, dtype=complex),),
            choi=np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex),
        )


def test_round_trip_kraus_choi_kraus_choi():
    rng = np.random.default_rng(4)
    for _ in range(10):
        channel = random_channel(rng)
        j1 = channel.choi_matrix()
        ops = kraus_from_choi(j1, (2, 2))
        j2 = QuantumChannel(2, 2, kraus=tuple(ops)).choi_matrix()
        assert np.max(np.abs(j2 - j1)) < 1e-9


def test_mixture_linearity_of_isomorphism():
    rng = np.random.default_rng(5)
    for _ in range(10):
        first = random_channel(rng)
        second = random_channel(rng)
        w = float(rng.uniform())
        mixed = mix_channels([first, second], [w, 1.0 - w])
        direct = w * cj_state(first).matrix + (1.0 - w) * cj_state(second).matrix
        assert np.max(np.abs(cj_state(mixed).matrix - direct)) < 1e-12


def test_compose_channels():
    # dephasing after Hadamard: Kraus products, still CPTP; one-sided
    # dephasing only clears within-block coherences of the CJ state
    composed = compose_channels(dephasing_channel(), hadamard_channel())
    assert validate_cptp(composed).passed
    assert not is_incoherent_channel(composed)
    # dephasing on both sides clears the off-diagonal blocks too
    sandwiched = compose_channels(composed, dephasing_channel())
    assert is_incoherent_channel(sandwiched)
