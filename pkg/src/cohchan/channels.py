"""Quantum channel containers and the Choi-Jamiolkowski correspondence.

Basis convention: for a channel with input dimension ``da`` and output
dimension ``db`` the Choi matrix lives on the product basis |i, beta> of
the input copy and the output system, flattened as ``i*db + beta``. The
unnormalized Choi matrix ``J`` has trace ``da``; the normalized
Choi-Jamiolkowski state ``M = J/da`` is a density matrix whose marginal
over the output factor is the maximally mixed state on the input copy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cohchan.linalg import (
    PSD_TOL,
    as_complex_matrix,
    hermitian_eigendecomposition,
    hermitianize,
    partial_trace,
)

#: Agreement tolerance between stored Kraus and Choi representations.
REPRESENTATION_TOL = 1e-10
#: Default trace-preservation tolerance for channel operations.
TRACE_PRESERVATION_TOL = 1e-8
#: Eigenvalue cutoff for Kraus extraction from a Choi matrix.
KRAUS_CUTOFF = 1e-10
#: Default tolerance for the diagonal-Choi incoherence test.
INCOHERENCE_TOL = 1e-10


class ChannelValidationError(ValueError):
    """Channel data violates CPTP or representation-consistency requirements."""


def _kraus_to_choi_sum(kraus: tuple[np.ndarray, ...], dim_in: int, dim_out: int) -> np.ndarray:
    """Unchecked Choi matrix sum_m |v_m><v_m| with v_m the flattened Kraus."""
    choi = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=np.complex128)
    for op in kraus:
        vec = op.T.reshape(-1)  # vec[(i*db + beta)] = K[beta, i]
        choi += np.outer(vec, vec.conj())
    return hermitianize(choi)


def _trace_preservation_error(kraus: tuple[np.ndarray, ...], dim_in: int) -> float:
    total = np.zeros((dim_in, dim_in), dtype=np.complex128)
    for op in kraus:
        total += op.conj().T @ op
    return float(np.max(np.abs(total - np.eye(dim_in))))


@dataclass
class QuantumChannel:
    """A map between finite-dimensional systems, as Kraus list and/or Choi matrix.

    The constructor only checks shapes and representation agreement; use
    :func:`validate_cptp` to test complete positivity and trace
    preservation (invalid channels can be constructed on purpose so that
    the validator has something to report).
    """

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...] | None = None
    choi: np.ndarray | None = None
    _choi_cache: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.dim_in <= 0 or self.dim_out <= 0:
            raise ChannelValidationError("channel dimensions must be positive")
        if self.kraus is None and self.choi is None:
            raise ChannelValidationError(
                "channel needs at least one representation (kraus or choi)"
            )
        if self.kraus is not None:
            ops = tuple(np.asarray(op, dtype=np.complex128) for op in self.kraus)
            for op in ops:
                if op.shape != (self.dim_out, self.dim_in):
                    raise ChannelValidationError(
                        f"Kraus operator has shape {op.shape}, "
                        f"expected ({self.dim_out}, {self.dim_in})"
                    )
            self.kraus = ops
        if self.choi is not None:
            choi = as_complex_matrix(self.choi)
            expected = self.dim_in * self.dim_out
            if choi.shape[0] != expected:
                raise ChannelValidationError(
                    f"Choi matrix has dimension {choi.shape[0]}, expected {expected}"
                )
            self.choi = choi
        if self.kraus is not None and self.choi is not None:
            rebuilt = _kraus_to_choi_sum(self.kraus, self.dim_in, self.dim_out)
            gap = float(np.max(np.abs(rebuilt - self.choi)))
            if gap > REPRESENTATION_TOL:
                raise ChannelValidationError(
                    f"Kraus and Choi representations disagree by {gap:.3e}"
                )

    def choi_matrix(self) -> np.ndarray:
        """The (unnormalized) Choi matrix, computed from Kraus if needed."""
        if self.choi is not None:
            return self.choi
        if self._choi_cache is None:
            self._choi_cache = _kraus_to_choi_sum(self.kraus, self.dim_in, self.dim_out)
        return self._choi_cache

    def kraus_operators(self) -> tuple[np.ndarray, ...]:
        """Kraus operators, extracted from the Choi matrix if needed."""
        if self.kraus is not None:
            return self.kraus
        return tuple(kraus_from_choi(self.choi, (self.dim_in, self.dim_out)))


@dataclass
class CJState:
    """Normalized Choi-Jamiolkowski state with bipartite dimension metadata."""

    matrix: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self):
        tol = 1e-10
        m = as_complex_matrix(self.matrix)
        if m.shape[0] != self.dim_a * self.dim_b:
            raise ChannelValidationError(
                f"CJ state dimension {m.shape[0]} != {self.dim_a}*{self.dim_b}"
            )
        trace = float(np.real(np.trace(m)))
        if abs(trace - 1.0) > tol:
            raise ChannelValidationError(f"CJ state trace {trace} is not 1 within {tol:.1e}")
        smallest = float(np.linalg.eigvalsh(hermitianize(m)).min())
        if smallest < -PSD_TOL:
            raise ChannelValidationError(
                f"CJ state has negative eigenvalue {smallest:.3e}"
            )
        marginal = partial_trace(m, "second", (self.dim_a, self.dim_b))
        gap = float(np.max(np.abs(marginal - np.eye(self.dim_a) / self.dim_a)))
        if gap > tol:
            raise ChannelValidationError(
                f"CJ state marginal deviates from I/{self.dim_a} by {gap:.3e} "
                "(channel is not trace preserving)"
            )
        self.matrix = hermitianize(m)

    def diagonal(self) -> np.ndarray:
        """Real diagonal of the state in the product basis."""
        return np.real(np.diag(self.matrix))


def choi_from_kraus(channel: QuantumChannel, tp_tol: float = TRACE_PRESERVATION_TOL) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) phi(|i><j|) of a trace-preserving Kraus set."""
    if channel.kraus is None:
        raise ChannelValidationError("channel carries no Kraus representation")
    deficit = _trace_preservation_error(channel.kraus, channel.dim_in)
    if deficit > tp_tol:
        raise ChannelValidationError(
            f"Kraus set is not trace preserving: max deviation {deficit:.3e}"
        )
    return _kraus_to_choi_sum(channel.kraus, channel.dim_in, channel.dim_out)


def cj_state(channel: QuantumChannel) -> CJState:
    """Normalized Choi-Jamiolkowski state of a valid channel."""
    if channel.kraus is not None:
        choi = choi_from_kraus(channel)
    else:
        choi = channel.choi
    return CJState(
        matrix=hermitianize(choi) / channel.dim_in,
        dim_a=channel.dim_in,
        dim_b=channel.dim_out,
    )


def kraus_from_choi(
    choi,
    dims: tuple[int, int],
    tp_tol: float = TRACE_PRESERVATION_TOL,
) -> list[np.ndarray]:
    """Kraus operators of a Choi matrix via scaled, reshaped eigenvectors.

    The Choi matrix must be PSD with ``Tr_B J = I_A`` within ``tp_tol``.
    Degenerate eigenspaces give one arbitrary orthonormal choice of Kraus
    operators; only the round-tripped Choi matrix is unique.
    """
    dim_a, dim_b = dims
    j = as_complex_matrix(choi)
    marginal = partial_trace(j, "second", dims)
    deficit = float(np.max(np.abs(marginal - np.eye(dim_a))))
    if deficit > tp_tol:
        raise ChannelValidationError(
            f"Choi matrix is not trace preserving: marginal deviation {deficit:.3e}"
        )
    system = hermitian_eigendecomposition(j)
    if float(system.eigenvalues.min()) < -PSD_TOL:
        raise ChannelValidationError(
            f"Choi matrix has negative eigenvalue {system.eigenvalues.min():.3e}"
        )
    operators = []
    for value, vec in zip(system.eigenvalues, system.eigenvectors.T):
        if value <= KRAUS_CUTOFF:
            continue
        operators.append(np.sqrt(value) * vec.reshape(dim_a, dim_b).T)
    return operators


@dataclass(frozen=True)
class CPTPReport:
    """Validation outcome for a channel: CP and TP criteria with raw numbers."""

    min_choi_eigenvalue: float
    trace_preservation_error: float
    completely_positive: bool
    trace_preserving: bool
    tol: float

    @property
    def passed(self) -> bool:
        return self.completely_positive and self.trace_preserving


def validate_cptp(channel: QuantumChannel, tol: float = 1e-10) -> CPTPReport:
    """Check complete positivity and trace preservation, reporting both."""
    choi = channel.choi_matrix()
    min_eig = float(np.linalg.eigvalsh(hermitianize(choi)).min())
    if channel.kraus is not None:
        tp_error = _trace_preservation_error(channel.kraus, channel.dim_in)
    else:
        marginal = partial_trace(choi, "second", (channel.dim_in, channel.dim_out))
        tp_error = float(np.max(np.abs(marginal - np.eye(channel.dim_in))))
    return CPTPReport(
        min_choi_eigenvalue=min_eig,
        trace_preservation_error=tp_error,
        completely_positive=min_eig >= -tol,
        trace_preserving=tp_error <= tol,
        tol=tol,
    )


def is_incoherent_channel(channel: QuantumChannel, tol: float = INCOHERENCE_TOL) -> bool:
    """True iff the CJ state is diagonal in the product basis within ``tol``."""
    state = cj_state(channel)
    off_diagonal = state.matrix - np.diag(np.diag(state.matrix))
    return float(np.max(np.abs(off_diagonal))) <= tol


def compose_channels(outer: QuantumChannel, inner: QuantumChannel) -> QuantumChannel:
    """The composition outer(inner(.)) via products of Kraus operators."""
    if outer.dim_in != inner.dim_out:
        raise ChannelValidationError(
            f"cannot compose: outer input dim {outer.dim_in} != "
            f"inner output dim {inner.dim_out}"
        )
    kraus = tuple(
        late @ early for late in outer.kraus_operators() for early in inner.kraus_operators()
    )
    return QuantumChannel(dim_in=inner.dim_in, dim_out=outer.dim_out, kraus=kraus)


def mix_channels(channels: list[QuantumChannel], weights) -> QuantumChannel:
    """Convex mixture of channels; equals the same mixture of Choi matrices."""
    weights = np.asarray(weights, dtype=float)
    if len(channels) != weights.size or weights.size == 0:
        raise ValueError("need one weight per channel")
    if np.any(weights < -1e-12) or abs(weights.sum() - 1.0) > 1e-10:
        raise ValueError("weights must be a probability vector")
    dims = {(c.dim_in, c.dim_out) for c in channels}
    if len(dims) != 1:
        raise ChannelValidationError("mixed channels must share dimensions")
    dim_in, dim_out = dims.pop()
    if all(c.kraus is not None for c in channels):
        kraus = tuple(
            np.sqrt(w) * op
            for c, w in zip(channels, weights)
            for op in c.kraus
            if w > 0.0
        )
        return QuantumChannel(dim_in=dim_in, dim_out=dim_out, kraus=kraus)
    choi = sum(w * c.choi_matrix() for c, w in zip(channels, weights))
    return QuantumChannel(dim_in=dim_in, dim_out=dim_out, choi=choi)
