"""Dense complex-Hermitian linear algebra for small quantum objects.

All functions are pure and operate on numpy ``complex128`` arrays. Matrix
powers and logarithms are taken on the support of the matrix with the
convention ``0**x = 0`` for every nonzero exponent, so traces like
``Tr(rho**r sigma**(1-r))`` stay finite for singular inputs; ``M**0`` is
the projector onto the support of ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Maximum tolerated |M[i,j] - conj(M[j,i])| for Hermitian inputs.
HERMITIAN_TOL = 1e-12
#: Eigenvalues in [-PSD_TOL, 0) are clamped to zero; anything below is an error.
PSD_TOL = 1e-10
#: Eigenvalues at or below this are treated as zero (off the support).
SUPPORT_CUTOFF = 1e-10


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class NotPositiveSemidefiniteError(ValueError):
    """Input matrix has an eigenvalue below the PSD tolerance."""


class EigensolverError(RuntimeError):
    """The eigensolver failed to converge."""


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(matrix) -> np.ndarray:
    """Coerce the input to a square complex128 array."""
    out = np.asarray(matrix, dtype=np.complex128)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    return out


def max_asymmetry(matrix) -> float:
    """Largest |M[i,j] - conj(M[j,i])| over all entries."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitianize(matrix: np.ndarray) -> np.ndarray:
    """(M + M^dagger)/2, removing floating-point asymmetry."""
    return (matrix + matrix.conj().T) / 2.0


def hermitian_eigendecomposition(matrix, tol: float = HERMITIAN_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises :class:`NotHermitianError` (reporting the maximum asymmetry) for
    non-Hermitian input and :class:`EigensolverError` if the underlying
    solver does not converge.
    """
    m = as_complex_matrix(matrix)
    asym = max_asymmetry(m)
    if asym > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds {tol:.1e}"
        )
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(hermitianize(m))
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition did not converge: {exc}") from exc
    return EigenSystem(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def _clamped_psd_eigenvalues(system: EigenSystem, tol: float) -> np.ndarray:
    smallest = float(system.eigenvalues.min())
    if smallest < -tol:
        raise NotPositiveSemidefiniteError(
            f"matrix has eigenvalue {smallest:.3e} below -{tol:.1e}"
        )
    return np.clip(system.eigenvalues, 0.0, None)


def fractional_power(matrix, exponent: float, tol: float = PSD_TOL) -> np.ndarray:
    """``V diag(lambda**exponent) V^dagger`` on the support of the matrix.

    Eigenvalues below :data:`SUPPORT_CUTOFF` map to zero for every nonzero
    exponent (pseudo-inverse convention for negative exponents); exponent
    zero yields the support projector. Eigenvalues in ``[-tol, 0)`` are
    clamped to zero; anything below raises.
    """
    system = hermitian_eigendecomposition(matrix)
    eigenvalues = _clamped_psd_eigenvalues(system, tol)
    on_support = eigenvalues > SUPPORT_CUTOFF
    powered = np.zeros_like(eigenvalues)
    if exponent == 0.0:
        powered[on_support] = 1.0
    else:
        powered[on_support] = eigenvalues[on_support] ** exponent
    vecs = system.eigenvectors
    return hermitianize((vecs * powered) @ vecs.conj().T)


def matrix_log(matrix, tol: float = PSD_TOL) -> np.ndarray:
    """Natural matrix logarithm on the support, ``V diag(ln lambda) V^dagger``.

    Zero eigenvalues are left out of the sum; the ``0 ln 0 = 0`` convention
    is realized at the trace level by callers that multiply against states
    supported inside the support of the argument.
    """
    system = hermitian_eigendecomposition(matrix)
    eigenvalues = _clamped_psd_eigenvalues(system, tol)
    on_support = eigenvalues > SUPPORT_CUTOFF
    logged = np.zeros_like(eigenvalues)
    logged[on_support] = np.log(eigenvalues[on_support])
    vecs = system.eigenvectors
    return hermitianize((vecs * logged) @ vecs.conj().T)


def support_projector(matrix, tol: float = PSD_TOL) -> np.ndarray:
    """Orthogonal projector onto the support of a PSD matrix."""
    return fractional_power(matrix, 0.0, tol)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with row index convention (i, beta) -> i*dim(B) + beta."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def partial_trace(matrix, which: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one tensor factor of a matrix on ``A (x) B``.

    ``which`` names the factor that is removed: ``"first"`` traces out A and
    returns a |B| x |B| matrix, ``"second"`` traces out B.
    """
    dim_a, dim_b = dims
    m = as_complex_matrix(matrix)
    if m.shape[0] != dim_a * dim_b:
        raise ValueError(
            f"dimension mismatch: matrix has dimension {m.shape[0]}, "
            f"expected {dim_a}*{dim_b}={dim_a * dim_b}"
        )
    tensor = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if which == "first":
        return np.einsum("ibia->ba", tensor)
    if which == "second":
        return np.einsum("ibjb->ij", tensor)
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")
