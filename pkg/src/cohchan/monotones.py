"""Coherence monotones of quantum channels via their normalized Choi states.

Two families:

* the closed-form monotone induced by the unified (r, s)-relative entropy,
  valid for r in (0, 1) and s <= 1. The closed form reduces the
  minimization over diagonal reference states to a single scalar
  ``t = sum_k q_k**(1/r)`` built from the diagonal ``q`` of the r-th power
  of the Choi state. An independent projected-gradient optimizer minimizes
  the diagonal-reference objective directly and serves as a numerical
  oracle for the closed form;
* the sandwiched-Renyi monotone, exact for channels with pure Choi states
  and extended to mixed-unitary qubit channels by a heuristic convex-roof
  search over decompositions into unitary (pure-Choi) components. The roof
  search returns an upper bound, never a certified minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from cohchan.channels import QuantumChannel, cj_state
from cohchan.entropies import EntropyParams, ParameterDomainError
from cohchan.linalg import (
    fractional_power,
    hermitian_eigendecomposition,
    partial_trace,
)

#: Rank-1 tolerance on the largest Choi eigenvalue for the pure formula.
PURITY_TOL = 1e-8
#: Deviation of the Choi output-marginal from I/d allowed for "unital".
UNITALITY_TOL = 1e-8


class MixedChoiStateError(ValueError):
    """Pure-Choi formula requested for a channel whose Choi state is mixed."""


class NoPureDecompositionError(ValueError):
    """Channel admits no decomposition into pure-Choi (unitary) components."""


class UnsupportedDimensionError(ValueError):
    """Operation is implemented for qubit channels only."""


class RoofSearchError(RuntimeError):
    """The decomposition search found no feasible candidate."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Projected-gradient settings for the simplex oracle."""

    restarts: int = 16
    max_iterations: int = 5000
    gradient_tol: float = 1e-10
    seed: int = 0


@dataclass(frozen=True)
class RoofSearchConfig:
    """Settings for the heuristic convex-roof decomposition search."""

    max_terms: int = 4
    restarts: int = 64
    seed: int = 0
    marginal_tol: float = 1e-8
    penalty_weight: float = 100.0
    max_evaluations: int = 4000


@dataclass
class CoherenceReport:
    """A computed coherence value together with its intermediates."""

    measure: str
    params: EntropyParams
    value: float
    t: float | None = None
    optimal_diag: np.ndarray | None = None
    upper_bound: float | None = None
    decomposition: list[tuple[float, np.ndarray]] | None = None
    flags: tuple[str, ...] = ()


def _require_urs_regime(params: EntropyParams) -> None:
    params.validate_unified()
    if not params.monotone_valid:
        raise ParameterDomainError(
            f"closed form is only valid for r in (0,1) and s <= 1, "
            f"got r={params.r}, s={params.s}"
        )


def urs_value_from_scalar(t: float, r: float, s: float) -> float:
    """Closed-form coherence value from the scalar t: (t^(rs)-1)/((r-1)s).

    The s = 0 value is the analytic limit r ln(t) / (r - 1).
    """
    if t <= 0.0:
        raise ValueError(f"scalar t must be positive, got {t}")
    if s == 0.0:
        return r * math.log(t) / (r - 1.0)
    return math.expm1(r * s * math.log(t)) / ((r - 1.0) * s)


def urs_dimension_bound(dim: int, r: float, s: float) -> float:
    """Upper bound (dim^((r-1)s)-1)/((r-1)s) on the closed-form value.

    Follows from t >= dim^((r-1)/r), itself a power-mean consequence of
    Tr M^r >= 1 for density matrices; the s = 0 limit is ln(dim).
    """
    if s == 0.0:
        return math.log(dim)
    return math.expm1((r - 1.0) * s * math.log(dim)) / ((r - 1.0) * s)


def _diagonal_power_weights(matrix: np.ndarray, r: float) -> np.ndarray:
    """Diagonal of the r-th power of a PSD matrix, clipped to >= 0."""
    powered = fractional_power(matrix, r)
    return np.clip(np.real(np.diag(powered)), 0.0, None)


def _urs_closed_form(matrix: np.ndarray, params: EntropyParams) -> CoherenceReport:
    r, s = params.r, params.s
    q = _diagonal_power_weights(matrix, r)
    roots = q ** (1.0 / r)
    t = float(roots.sum())
    value = urs_value_from_scalar(t, r, s)
    flags = ("limit-branch-used",) if s == 0.0 else ()
    return CoherenceReport(
        measure="urs",
        params=params,
        value=value,
        t=t,
        optimal_diag=roots / t,
        upper_bound=urs_dimension_bound(q.size, r, s),
        flags=flags,
    )


def urs_channel_coherence(channel: QuantumChannel, params: EntropyParams) -> CoherenceReport:
    """Closed-form channel coherence for the unified (r, s) family.

    Refuses parameters outside r in (0, 1), s <= 1: the closed form is
    only a monotone there.
    """
    _require_urs_regime(params)
    return _urs_closed_form(cj_state(channel).matrix, params)


def state_urs_coherence(rho, params: EntropyParams) -> CoherenceReport:
    """State-level coherence, the same closed form on a single-index basis."""
    _require_urs_regime(params)
    from cohchan.entropies import _validated_density

    return _urs_closed_form(_validated_density(rho, "rho"), params)


# ---------------------------------------------------------------------------
# brute-force oracle: projected gradient descent on the probability simplex
# ---------------------------------------------------------------------------


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1} (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u)
    indices = np.arange(1, v.size + 1)
    feasible = np.nonzero(u + (1.0 - cumulative) / indices > 0.0)[0]
    # index 0 is always feasible mathematically; guard float cancellation
    rho = int(feasible[-1]) if feasible.size else 0
    shift = (1.0 - cumulative[rho]) / (rho + 1.0)
    return np.maximum(v + shift, 0.0)


def urs_objective(p, q, r: float, s: float) -> float:
    """Diagonal-reference objective whose simplex minimum is the closed form.

    f(p) = [(sum_k p_k^(1-r) q_k)^s - 1] / ((r-1) s), with the s = 0 limit
    ln(sum_k p_k^(1-r) q_k) / (r-1).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    g = float(np.sum(np.where(q > 0.0, p ** (1.0 - r) * q, 0.0)))
    if s == 0.0:
        if g <= 0.0:
            return math.inf
        return math.log(g) / (r - 1.0)
    if g <= 0.0:
        return math.inf if s < 0.0 else 1.0 / ((1.0 - r) * s)
    return math.expm1(s * math.log(g)) / ((r - 1.0) * s)


def _urs_gradient(p: np.ndarray, q: np.ndarray, r: float, s: float) -> np.ndarray:
    mask = q > 0.0
    grad = np.zeros_like(p)
    safe = np.maximum(p, 1e-18)
    core = safe ** (-r) * q
    g = float(np.sum(np.where(mask, p ** (1.0 - r) * q, 0.0)))
    if s == 0.0:
        grad[mask] = -core[mask] / g
    else:
        grad[mask] = -(g ** (s - 1.0)) * core[mask]
    return grad


def _kkt_residual(p: np.ndarray, grad: np.ndarray) -> float:
    """Distance from simplex stationarity: equal gradient on the support,
    no profitable mass transfer into inactive coordinates."""
    support = p > 1e-14
    if not support.any():
        return math.inf
    mu = float(grad[support].mean())
    residual = float(np.abs(grad[support] - mu).max())
    inactive = ~support
    if inactive.any():
        residual = max(residual, float(np.max(mu - grad[inactive])), 0.0)
    return residual


def _newton_polish(
    p: np.ndarray,
    q: np.ndarray,
    r: float,
    s: float,
    gradient_tol: float,
    max_steps: int = 40,
) -> np.ndarray:
    """Equality-constrained Newton refinement on the support found by the
    projected-gradient phase.

    The objective's Hessian restricted to the support is diagonal plus
    rank one, so each step is a Sherman-Morrison solve. This handles the
    ill-conditioned tail (optimal coordinates spanning many orders of
    magnitude) that a first-order method cannot finish in budget.
    """
    p = p.copy()
    support = (p > 1e-14) & (q > 0.0)
    if support.sum() < 2:
        return p
    for _ in range(max_steps):
        grad = _urs_gradient(p, q, r, s)
        if _kkt_residual(p, grad) <= gradient_tol:
            break
        ps = p[support]
        qs = q[support]
        g = float(np.sum(ps ** (1.0 - r) * qs))
        u = (1.0 - r) * ps ** (-r) * qs
        diag = -(1.0 - r) * r * ps ** (-r - 1.0) * qs
        if s == 0.0:
            h1 = 1.0 / (g * (r - 1.0))
            h2 = -1.0 / (g * g * (r - 1.0))
        else:
            h1 = g ** (s - 1.0) / (r - 1.0)
            h2 = (s - 1.0) * g ** (s - 2.0) / (r - 1.0)
        d = h1 * diag  # positive
        c = h2        # nonnegative rank-one coefficient for u u^T
        gamma = h1 * u
        dinv_gamma = gamma / d
        dinv_u = u / d
        denom = 1.0 + c * float(np.dot(u, dinv_u))

        def solve(x_over_d, dot_u_x):
            return x_over_d - (c * dot_u_x / denom) * dinv_u

        hinv_gamma = solve(dinv_gamma, float(np.dot(u, dinv_gamma)))
        ones_over_d = 1.0 / d
        hinv_ones = solve(ones_over_d, float(np.dot(u, ones_over_d)))
        nu = float(np.sum(hinv_gamma)) / float(np.sum(hinv_ones))
        delta = -(hinv_gamma - nu * hinv_ones)
        shrink = 1.0
        negative = delta < 0.0
        if negative.any():
            shrink = min(1.0, float(np.min(-0.99 * ps[negative] / delta[negative])))
        ps_new = ps + shrink * delta
        if np.any(ps_new <= 0.0) or not np.all(np.isfinite(ps_new)):
            break
        p[support] = ps_new
        total = p.sum()
        if abs(total - 1.0) > 1e-14:
            p[support] = p[support] + (1.0 - total) / support.sum()
    return p


def _projected_gradient_descent(
    q: np.ndarray,
    r: float,
    s: float,
    start: np.ndarray,
    max_iterations: int,
    gradient_tol: float,
) -> tuple[np.ndarray, float, bool, int]:
    p = project_to_simplex(start)
    value = urs_objective(p, q, r, s)
    grad = _urs_gradient(p, q, r, s)
    step = 1.0
    coarse_tol = max(gradient_tol, 1e-6)
    iteration = 0
    for iteration in range(max_iterations):
        if _kkt_residual(p, grad) <= coarse_tol:
            break
        # cap the displacement so the projection never sees values whose
        # magnitude destroys the unit-scale shift computation
        largest = float(np.max(np.abs(grad)))
        alpha = min(step, 1e3 / largest) if largest > 0.0 else step
        accepted = False
        for _ in range(80):
            trial = project_to_simplex(p - alpha * grad)
            predicted = float(np.dot(grad, p - trial))
            trial_value = urs_objective(trial, q, r, s)
            if trial_value <= value - 1e-4 * predicted + 1e-18:
                new_grad = _urs_gradient(trial, q, r, s)
                displacement = trial - p
                gradient_change = new_grad - grad
                curvature = float(np.dot(displacement, gradient_change))
                # Barzilai-Borwein secant step, falling back to growth
                if curvature > 1e-300:
                    step = float(np.dot(displacement, displacement)) / curvature
                else:
                    step = alpha * 2.0
                p, value, grad = trial, trial_value, new_grad
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break
    if _kkt_residual(p, grad) > gradient_tol:
        p = _newton_polish(p, q, r, s, gradient_tol)
        value = urs_objective(p, q, r, s)
    converged = _kkt_residual(p, _urs_gradient(p, q, r, s)) <= gradient_tol
    return p, value, converged, iteration


def urs_coherence_bruteforce(
    channel: QuantumChannel,
    params: EntropyParams,
    config: OptimizerConfig | None = None,
) -> CoherenceReport:
    """Direct simplex minimization of the diagonal-reference objective.

    An independent numerical route to the channel coherence that never
    touches the closed form: projected gradient descent with step-halving
    line search, restarted from Dirichlet(1) draws and merged by minimum.
    A restart failing the gradient tolerance flags the report instead of
    failing silently.
    """
    config = config or OptimizerConfig()
    _require_urs_regime(params)
    q = _diagonal_power_weights(cj_state(channel).matrix, params.r)
    best: tuple[float, np.ndarray, bool] | None = None
    for seed_seq in np.random.SeedSequence(config.seed).spawn(config.restarts):
        rng = np.random.default_rng(seed_seq)
        start = rng.dirichlet(np.ones(q.size))
        p, value, converged, _ = _projected_gradient_descent(
            q, params.r, params.s, start, config.max_iterations, config.gradient_tol
        )
        if best is None or value < best[0]:
            best = (value, p, converged)
    value, argmin, converged = best
    return CoherenceReport(
        measure="urs",
        params=params,
        value=value,
        optimal_diag=argmin,
        flags=() if converged else ("non-converged",),
    )


# ---------------------------------------------------------------------------
# sandwiched-Renyi monotone: pure Choi states and the convex-roof estimator
# ---------------------------------------------------------------------------


def _pure_sandwiched_value(probs: np.ndarray, r: float) -> tuple[float, float]:
    """Coherence of a pure state from its basis probabilities.

    Returns (value, t) with t = sum_k probs_k^(r/(2r-1)) and
    value = ((2r-1)/(r-1)) log2(t).
    """
    kappa = r / (2.0 * r - 1.0)
    t = float(np.sum(probs**kappa))
    value = (2.0 * r - 1.0) / (r - 1.0) * math.log2(t)
    return value, t


def sandwiched_channel_coherence_pure(
    channel: QuantumChannel,
    r: float,
    purity_tol: float = PURITY_TOL,
) -> CoherenceReport:
    """Sandwiched-Renyi coherence of a channel with a pure Choi state.

    Requires the largest Choi eigenvalue to be >= 1 - purity_tol; a mixed
    Choi state raises and points the caller at the convex-roof measure.
    """
    params = EntropyParams(r=r)
    params.validate_sandwiched()
    state = cj_state(channel)
    system = hermitian_eigendecomposition(state.matrix)
    largest = float(system.eigenvalues[-1])
    if largest < 1.0 - purity_tol:
        raise MixedChoiStateError(
            f"Choi state is mixed (largest eigenvalue {largest:.10f}); "
            "use the convex-roof measure for mixed-unitary channels"
        )
    vector = system.eigenvectors[:, -1]
    probs = np.clip(np.abs(vector) ** 2, 0.0, None)
    value, t = _pure_sandwiched_value(probs, r)
    kappa = r / (2.0 * r - 1.0)
    return CoherenceReport(
        measure="sandwiched-pure",
        params=params,
        value=value,
        t=t,
        optimal_diag=probs**kappa / t,
        upper_bound=math.log2(probs.size),
    )


def _unitary_from_angles(n: int, angles: np.ndarray) -> np.ndarray:
    """n x n unitary from n(n-1)/2 rotation angles, as many relative phases,
    and n diagonal phases (a Givens-rotation product)."""
    pairs = n * (n - 1) // 2
    rotations = angles[:pairs]
    phases = angles[pairs : 2 * pairs]
    diagonal = angles[2 * pairs : 2 * pairs + n]
    unitary = np.diag(np.exp(1j * diagonal)).astype(np.complex128)
    index = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            theta, phi = rotations[index], phases[index]
            index += 1
            givens = np.eye(n, dtype=np.complex128)
            c, s = math.cos(theta), math.sin(theta)
            givens[i, i] = c
            givens[j, j] = c
            givens[i, j] = -np.exp(1j * phi) * s
            givens[j, i] = np.exp(-1j * phi) * s
            unitary = givens @ unitary
    return unitary


def _roof_components(
    mus: np.ndarray, basis: np.ndarray, remix: np.ndarray
) -> list[tuple[float, np.ndarray]]:
    """Decomposition components induced by a row-isometric remix matrix."""
    sq = np.sqrt(mus)
    components = []
    for column in remix.T:
        weight = float(np.sum(mus * np.abs(column) ** 2))
        if weight < 1e-12:
            continue
        vector = basis @ (sq * column) / math.sqrt(weight)
        components.append((weight, vector))
    return components


def _component_marginal_distance(vector: np.ndarray, dim: int) -> float:
    """Distance of the input-side marginal from I/dim (maximal entanglement,
    i.e. trace preservation of the induced pure-Choi channel)."""
    block = vector.reshape(dim, dim)
    marginal = block @ block.conj().T
    return float(np.max(np.abs(marginal - np.eye(dim) / dim)))


def _kraus_unitary_from_vector(vector: np.ndarray, dim: int) -> np.ndarray:
    """Kraus operator of the pure-Choi channel |v><v| scaled to a channel."""
    return math.sqrt(dim) * vector.reshape(dim, dim).T


def sandwiched_channel_coherence_convex_roof(
    channel: QuantumChannel,
    r: float,
    config: RoofSearchConfig | None = None,
) -> CoherenceReport:
    """Heuristic convex-roof upper bound for mixed-unitary qubit channels.

    Searches decompositions of the Choi state into pure maximally entangled
    components (equivalently, mixtures of unitary channels) by remixing its
    eigendecomposition through row-isometries, parameterized with Givens
    rotations and phases. Structured starts plus random restarts feed a
    local derivative-free descent; components whose marginal strays from
    I/2 are penalized out. The best feasible candidate's average component
    coherence is reported with a heuristic-upper-bound flag.
    """
    config = config or RoofSearchConfig()
    params = EntropyParams(r=r)
    params.validate_sandwiched()
    if (channel.dim_in, channel.dim_out) != (2, 2):
        raise UnsupportedDimensionError(
            "convex-roof search is implemented for qubit channels only"
        )
    state = cj_state(channel)
    output_marginal = partial_trace(state.matrix, "first", (2, 2))
    unitality_gap = float(np.max(np.abs(output_marginal - np.eye(2) / 2.0)))
    if unitality_gap > UNITALITY_TOL:
        raise NoPureDecompositionError(
            f"channel is not unital (marginal gap {unitality_gap:.3e}); only "
            "mixed-unitary qubit channels admit pure-channel decompositions"
        )
    system = hermitian_eigendecomposition(state.matrix)
    keep = system.eigenvalues > 1e-10
    mus = system.eigenvalues[keep][::-1]
    basis = system.eigenvectors[:, keep][:, ::-1]
    rank = mus.size

    bound = math.log2(state.matrix.shape[0])
    if rank == 1:
        vector = basis[:, 0]
        value, t = _pure_sandwiched_value(np.abs(vector) ** 2, r)
        return CoherenceReport(
            measure="sandwiched-roof",
            params=params,
            value=value,
            t=t,
            upper_bound=bound,
            decomposition=[(1.0, _kraus_unitary_from_vector(vector, 2))],
            flags=("heuristic-upper-bound",),
        )

    best_value = math.inf
    best_components: list[tuple[float, np.ndarray]] | None = None

    def evaluate(angles: np.ndarray, n_terms: int) -> float:
        nonlocal best_value, best_components
        remix = _unitary_from_angles(n_terms, angles)[:rank, :]
        components = _roof_components(mus, basis, remix)
        total = 0.0
        worst_distance = 0.0
        for weight, vector in components:
            value, _ = _pure_sandwiched_value(np.clip(np.abs(vector) ** 2, 0.0, None), r)
            total += weight * value
            worst_distance = max(
                worst_distance, _component_marginal_distance(vector, 2)
            )
        if worst_distance <= config.marginal_tol and total < best_value:
            best_value = total
            best_components = components
        return total + config.penalty_weight * worst_distance

    term_counts = list(range(rank, config.max_terms + 1))
    random_per_count = max(1, config.restarts // max(1, len(term_counts)))
    seed_stream = np.random.SeedSequence(config.seed).spawn(len(term_counts))
    for n_terms, seq in zip(term_counts, seed_stream):
        n_params = n_terms * n_terms
        starts = [np.zeros(n_params)]
        quarter = np.zeros(n_params)
        quarter[0] = math.pi / 4.0
        starts.append(quarter)
        all_quarter = np.zeros(n_params)
        all_quarter[: n_terms * (n_terms - 1) // 2] = math.pi / 4.0
        starts.append(all_quarter)
        rng = np.random.default_rng(seq)
        for _ in range(random_per_count):
            starts.append(rng.uniform(0.0, 2.0 * math.pi, size=n_params))
        for start in starts:
            evaluate(start, n_terms)  # the start itself is a candidate
            optimize.minimize(
                evaluate,
                start,
                args=(n_terms,),
                method="Powell",
                options={
                    "maxfev": config.max_evaluations,
                    "xtol": 1e-8,
                    "ftol": 1e-10,
                },
            )

    if best_components is None:
        raise RoofSearchError(
            "no feasible pure-channel decomposition found; increase restarts "
            "or max_terms"
        )
    decomposition = [
        (weight, _kraus_unitary_from_vector(vector, 2))
        for weight, vector in best_components
    ]
    return CoherenceReport(
        measure="sandwiched-roof",
        params=params,
        value=best_value,
        upper_bound=bound,
        decomposition=decomposition,
        flags=("heuristic-upper-bound",),
    )
