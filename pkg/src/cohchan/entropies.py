"""Generalized relative entropies between density matrices.

Two families are implemented:

* the unified two-parameter (r, s) family, which interpolates between the
  Renyi (s = 0), Tsallis (s = 1), type-r (s = 1/r) and von Neumann (r = 1)
  relative entropies and uses the natural logarithm throughout;
* the sandwiched Renyi relative entropy of order r, which uses the base-2
  logarithm.

The two logarithm bases are deliberate and must not be unified: every
downstream closed-form value depends on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cohchan.linalg import (
    fractional_power,
    hermitian_eigendecomposition,
    hermitianize,
    matrix_log,
    max_asymmetry,
    support_projector,
    SUPPORT_CUTOFF,
)

#: |s - 1/r| below this selects the type-r branch of the unified family.
TYPE_R_TOL = 1e-12
#: Input tolerance for Hermiticity / unit trace of density matrices.
DENSITY_TOL = 1e-8
#: Weight of a state outside the reference support above this means +inf.
SUPPORT_LEAK_TOL = 1e-10


class ParameterDomainError(ValueError):
    """Entropy parameters fall outside the family's domain."""


@dataclass(frozen=True)
class EntropyParams:
    """Order parameters for a relative-entropy family.

    ``s`` present selects the unified (r, s) family; ``s=None`` means the
    sandwiched family of order ``r`` alone.
    """

    r: float
    s: float | None = None

    @property
    def family(self) -> str:
        return "unified" if self.s is not None else "sandwiched"

    @property
    def regime(self) -> str:
        """Named branch of the unified case table ('sandwiched' otherwise)."""
        if self.s is None:
            return "sandwiched"
        if self.r == 1.0:
            return "von-neumann"
        if self.s == 0.0:
            return "renyi"
        if self.s == 1.0:
            return "tsallis"
        if self.r > 0.0 and abs(self.s - 1.0 / self.r) <= TYPE_R_TOL:
            return "type-r"
        return "rs-general"

    @property
    def monotone_valid(self) -> bool:
        """Whether the induced coherence quantity is a monotone here."""
        if self.s is not None:
            return 0.0 < self.r < 1.0 and self.s <= 1.0
        return (0.5 < self.r < 1.0 or self.r > 1.0) and math.isfinite(self.r)

    def validate_unified(self) -> None:
        if self.s is None:
            raise ParameterDomainError("unified family needs both r and s")
        if not (math.isfinite(self.r) and math.isfinite(self.s)):
            raise ParameterDomainError("r and s must be finite")
        if self.r < 0.0 or self.r > 1.0:
            raise ParameterDomainError(
                f"unified family is defined for 0 <= r <= 1, got r={self.r}"
            )

    def validate_sandwiched(self) -> None:
        if not math.isfinite(self.r):
            raise ParameterDomainError("sandwiched order r must be finite")
        if not (0.5 < self.r < 1.0 or self.r > 1.0):
            raise ParameterDomainError(
                f"sandwiched family is defined for r in (1/2,1) or (1,inf), got r={self.r}"
            )


@dataclass(frozen=True)
class EntropyValue:
    """Extended-real entropy value plus the underlying finite trace scalar."""

    value: float
    finite_trace_term: float | None = None

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


def _validated_density(matrix, name: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if max_asymmetry(m) > DENSITY_TOL:
        raise ValueError(f"{name} is not Hermitian within {DENSITY_TOL:.1e}")
    m = hermitianize(m)
    trace = float(np.real(np.trace(m)))
    if abs(trace - 1.0) > DENSITY_TOL:
        raise ValueError(f"{name} has trace {trace}, expected 1")
    return m


def _support_leak(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Weight of rho outside the support of sigma."""
    projector = support_projector(sigma)
    inside = float(np.real(np.trace(projector @ rho)))
    return float(np.real(np.trace(rho))) - inside


def _von_neumann_relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    if _support_leak(rho, sigma) > SUPPORT_LEAK_TOL:
        return math.inf
    eigenvalues = np.clip(hermitian_eigendecomposition(rho).eigenvalues, 0.0, None)
    positive = eigenvalues[eigenvalues > SUPPORT_CUTOFF]
    entropy_term = float(np.sum(positive * np.log(positive)))
    cross_term = float(np.real(np.trace(rho @ matrix_log(sigma))))
    return entropy_term - cross_term


def unified_relative_entropy(rho, sigma, params: EntropyParams) -> EntropyValue:
    """Unified (r, s)-relative entropy between two density matrices.

    Dispatches on the case table: the von Neumann branch at r = 1, the
    Renyi branch at s = 0, and the generic branch
    ``[(Tr rho^r sigma^(1-r))^s - 1] / ((r-1) s)`` otherwise, which covers
    the Tsallis (s = 1) and type-r (s = 1/r) special cases exactly.
    Support violations and vanishing trace terms produce +inf where the
    defining expression diverges.
    """
    params.validate_unified()
    rho = _validated_density(rho, "rho")
    sigma = _validated_density(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ValueError("rho and sigma must have equal dimensions")
    r, s = params.r, params.s
    if r == 1.0:
        return EntropyValue(value=_von_neumann_relative_entropy(rho, sigma))
    trace_term = float(
        np.real(np.trace(fractional_power(rho, r) @ fractional_power(sigma, 1.0 - r)))
    )
    trace_term = max(trace_term, 0.0)
    if s == 0.0:
        if trace_term <= 0.0:
            return EntropyValue(value=math.inf, finite_trace_term=trace_term)
        return EntropyValue(
            value=math.log(trace_term) / (r - 1.0), finite_trace_term=trace_term
        )
    if trace_term <= 0.0:
        if s < 0.0:
            return EntropyValue(value=math.inf, finite_trace_term=trace_term)
        return EntropyValue(value=1.0 / ((1.0 - r) * s), finite_trace_term=trace_term)
    exponent = s * math.log(trace_term)
    if exponent > 700.0:
        # the defining power underflows double precision: saturate explicitly
        return EntropyValue(value=math.inf, finite_trace_term=trace_term)
    value = math.expm1(exponent) / ((r - 1.0) * s)
    return EntropyValue(value=value, finite_trace_term=trace_term)


def sandwiched_relative_entropy(rho, sigma, r: float) -> EntropyValue:
    """Sandwiched Renyi relative entropy of order r, base-2 logarithm.

    Computes ``(r-1)^-1 log2 Tr[(sigma^((1-r)/2r) rho sigma^((1-r)/2r))^r]``
    with powers taken on the support of sigma. For r > 1 the value is +inf
    when rho has weight outside the support of sigma.
    """
    EntropyParams(r=r).validate_sandwiched()
    rho = _validated_density(rho, "rho")
    sigma = _validated_density(sigma, "sigma")
    if rho.shape != sigma.shape:
        raise ValueError("rho and sigma must have equal dimensions")
    if r > 1.0 and _support_leak(rho, sigma) > SUPPORT_LEAK_TOL:
        return EntropyValue(value=math.inf)
    half_power = fractional_power(sigma, (1.0 - r) / (2.0 * r))
    sandwiched = hermitianize(half_power @ rho @ half_power)
    trace_term = float(np.real(np.trace(fractional_power(sandwiched, r))))
    if trace_term <= 1e-300:
        return EntropyValue(value=math.inf, finite_trace_term=0.0)
    return EntropyValue(
        value=math.log2(trace_term) / (r - 1.0), finite_trace_term=trace_term
    )
