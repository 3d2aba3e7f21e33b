"""The qubit unitary reference family and its closed-form coherence values.

A general single-qubit unitary is parameterized by four angles; both
coherence monotones of the induced channel depend on gamma only, through
cos^2(gamma/2) and sin^2(gamma/2). The channel induced by the Hadamard
gate sits at gamma = pi/2 and attains the upper bound of each monotone.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from cohchan.channels import QuantumChannel
from cohchan.entropies import EntropyParams, ParameterDomainError
from cohchan.monotones import urs_dimension_bound, urs_value_from_scalar


def build_qubit_unitary(
    alpha: float = 0.0, beta: float = 0.0, gamma: float = 0.0, delta: float = 0.0
) -> np.ndarray:
    """General single-qubit unitary from four angles (radians).

    U = [[a, -b], [e^(2i alpha) conj(b), e^(2i alpha) conj(a)]] with
    a = e^(i(alpha - beta/2 - delta/2)) cos(gamma/2) and
    b = e^(i(alpha - beta/2 + delta/2)) sin(gamma/2); unitary for every
    choice of angles.
    """
    a = cmath.exp(1j * (alpha - beta / 2.0 - delta / 2.0)) * math.cos(gamma / 2.0)
    b = cmath.exp(1j * (alpha - beta / 2.0 + delta / 2.0)) * math.sin(gamma / 2.0)
    phase = cmath.exp(2j * alpha)
    return np.array(
        [[a, -b], [phase * b.conjugate(), phase * a.conjugate()]],
        dtype=np.complex128,
    )


def unitary_channel(
    gamma: float, alpha: float = 0.0, beta: float = 0.0, delta: float = 0.0
) -> QuantumChannel:
    """Single-Kraus channel of the four-angle qubit unitary."""
    u = build_qubit_unitary(alpha=alpha, beta=beta, gamma=gamma, delta=delta)
    return QuantumChannel(dim_in=2, dim_out=2, kraus=(u,))


def hadamard_channel() -> QuantumChannel:
    """Unitary channel of the Hadamard gate."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
    return QuantumChannel(dim_in=2, dim_out=2, kraus=(h,))


def identity_channel(dim: int = 2) -> QuantumChannel:
    """The do-nothing channel."""
    return QuantumChannel(dim_in=dim, dim_out=dim, kraus=(np.eye(dim, dtype=np.complex128),))


def dephasing_channel() -> QuantumChannel:
    """Completely dephasing qubit channel, Kraus {|0><0|, |1><1|}."""
    k0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
    k1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    return QuantumChannel(dim_in=2, dim_out=2, kraus=(k0, k1))


def amplitude_damping_channel(gamma: float) -> QuantumChannel:
    """Amplitude damping with decay probability gamma (non-unital for gamma > 0)."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"damping probability must lie in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return QuantumChannel(dim_in=2, dim_out=2, kraus=(k0, k1))


def _check_urs_range(r: float, s: float) -> None:
    if not EntropyParams(r=r, s=s).monotone_valid:
        raise ParameterDomainError(
            f"closed form needs r in (0,1) and s <= 1, got r={r}, s={s}"
        )


def urs_unitary_closed_form(gamma: float, r: float, s: float) -> float:
    """Unified-family coherence of the gamma-angle unitary channel.

    Equals (2^(rs-s) [(cos^2(g/2))^(1/r) + (sin^2(g/2))^(1/r)]^(rs) - 1)
    / ((r-1)s), with the analytic limit at s = 0; independent of the
    other three angles.
    """
    _check_urs_range(r, s)
    c2 = math.cos(gamma / 2.0) ** 2
    s2 = math.sin(gamma / 2.0) ** 2
    bracket = c2 ** (1.0 / r) + s2 ** (1.0 / r)
    t = 2.0 ** ((r - 1.0) / r) * bracket
    return urs_value_from_scalar(t, r, s)


def sandwiched_unitary_closed_form(gamma: float, r: float) -> float:
    """Sandwiched-family coherence of the gamma-angle unitary channel.

    ((2r-1)/(r-1)) log2[(cos^2(g/2))^(r/(2r-1)) + (sin^2(g/2))^(r/(2r-1))] + 1.
    """
    EntropyParams(r=r).validate_sandwiched()
    kappa = r / (2.0 * r - 1.0)
    c2 = math.cos(gamma / 2.0) ** 2
    s2 = math.sin(gamma / 2.0) ** 2
    bracket = c2**kappa + s2**kappa
    return (2.0 * r - 1.0) / (r - 1.0) * math.log2(bracket) + 1.0


def urs_upper_bound(r: float, s: float) -> float:
    """Largest unified-family coherence over qubit channels, (4^((r-1)s)-1)/((r-1)s)."""
    _check_urs_range(r, s)
    return urs_dimension_bound(4, r, s)


def sandwiched_upper_bound() -> float:
    """Largest sandwiched-family coherence over pure-Choi qubit channels."""
    return 2.0
