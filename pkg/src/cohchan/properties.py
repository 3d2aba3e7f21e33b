"""Executable checks of the coherence-monotone axioms on sampled channels.

Each check draws seeded random channels, measures the worst violation of
one inequality, and returns a :class:`PropertyReport` whose witnesses are
serialized in the CLI channel format so they can be re-evaluated exactly.

The superchannel-monotonicity check runs on a restricted, constructively
incoherent family only (pre/post composition with permutation channels,
the completely dephasing channel, and their convex mixtures); the general
quantifier over all incoherent superchannels is not testable without a
constructive characterization, and every report states the restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cohchan.channels import (
    QuantumChannel,
    cj_state,
    compose_channels,
    mix_channels,
)
from cohchan.documents import channel_to_document
from cohchan.entropies import EntropyParams
from cohchan.linalg import fractional_power
from cohchan.monotones import (
    OptimizerConfig,
    urs_channel_coherence,
    urs_coherence_bruteforce,
)
from cohchan.qubit_examples import (
    dephasing_channel,
    hadamard_channel,
    sandwiched_unitary_closed_form,
    sandwiched_upper_bound,
    unitary_channel,
    urs_unitary_closed_form,
    urs_upper_bound,
)

#: Coherent-channel sampler rejects draws whose CJ off-diagonals are all
#: below this (near-incoherent channels would make faithfulness marginal).
COHERENT_REJECTION_THRESHOLD = 0.01


@dataclass
class PropertyReport:
    """Outcome of one sampled property check."""

    name: str
    samples: int
    max_violation: float
    tolerance: float
    passed: bool
    seed: int
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seed": self.seed,
            "witnesses": self.witnesses,
            "details": self.details,
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return m / np.real(np.trace(m))


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, upper = np.linalg.qr(g)
    return q * (np.diag(upper) / np.abs(np.diag(upper)))


def random_channel(
    rng: np.random.Generator,
    dim_in: int = 2,
    dim_out: int = 2,
    kraus_terms: int | None = None,
) -> QuantumChannel:
    """Random CPTP channel: Gaussian Kraus blocks normalized through the
    trace-preservation constraint (whitening of the stacked block)."""
    terms = int(kraus_terms or rng.integers(1, 5))
    blocks = [
        rng.normal(size=(dim_out, dim_in)) + 1j * rng.normal(size=(dim_out, dim_in))
        for _ in range(terms)
    ]
    gram = sum(b.conj().T @ b for b in blocks)
    whitener = fractional_power(gram, -0.5)
    kraus = tuple(b @ whitener for b in blocks)
    return QuantumChannel(dim_in=dim_in, dim_out=dim_out, kraus=kraus)


def random_incoherent_channel(
    rng: np.random.Generator, dim_in: int = 2, dim_out: int = 2
) -> QuantumChannel:
    """Random diagonal-Choi channel (a classical stochastic map)."""
    choi = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=np.complex128)
    for i in range(dim_in):
        row = rng.dirichlet(np.ones(dim_out))
        for beta in range(dim_out):
            choi[i * dim_out + beta, i * dim_out + beta] = row[beta]
    return QuantumChannel(dim_in=dim_in, dim_out=dim_out, choi=choi)


def random_coherent_channel(
    rng: np.random.Generator,
    dim_in: int = 2,
    dim_out: int = 2,
    min_offdiag: float = COHERENT_REJECTION_THRESHOLD,
) -> QuantumChannel:
    """Random channel, resampled until its CJ state is clearly non-diagonal."""
    while True:
        channel = random_channel(rng, dim_in, dim_out)
        m = cj_state(channel).matrix
        if float(np.max(np.abs(m - np.diag(np.diag(m))))) >= min_offdiag:
            return channel


def _permutation_channel(permutation: tuple[int, ...]) -> QuantumChannel:
    dim = len(permutation)
    op = np.zeros((dim, dim), dtype=np.complex128)
    for src, dst in enumerate(permutation):
        op[dst, src] = 1.0
    return QuantumChannel(dim_in=dim, dim_out=dim, kraus=(op,))


def random_restricted_incoherent_channel(
    rng: np.random.Generator, dim: int = 2
) -> QuantumChannel:
    """Draw from {permutation channels, completely dephasing, mixtures}."""
    identity = _permutation_channel(tuple(range(dim)))
    swap = _permutation_channel(tuple(reversed(range(dim))))
    dephasing = QuantumChannel(
        dim_in=dim,
        dim_out=dim,
        kraus=tuple(
            np.diag(np.eye(dim)[i]).astype(np.complex128) for i in range(dim)
        ),
    )
    members = [identity, swap, dephasing]
    choice = rng.integers(0, 4)
    if choice < 3:
        return members[choice]
    weights = rng.dirichlet(np.ones(3))
    return mix_channels(members, weights)


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------


def check_faithfulness(
    params: EntropyParams,
    samples: int = 200,
    seed: int = 0,
    coherent_floor: float = 1e-6,
    incoherence_tol: float = 1e-9,
) -> PropertyReport:
    """Zero on sampled diagonal-Choi channels, clearly positive elsewhere."""
    rng = np.random.default_rng(seed)
    worst_incoherent = -math.inf
    worst_incoherent_channel = None
    min_coherent = math.inf
    min_coherent_channel = None
    for _ in range(samples):
        channel = random_incoherent_channel(rng)
        value = urs_channel_coherence(channel, params).value
        if value > worst_incoherent:
            worst_incoherent, worst_incoherent_channel = value, channel
    for _ in range(samples):
        channel = random_coherent_channel(rng)
        value = urs_channel_coherence(channel, params).value
        if value < min_coherent:
            min_coherent, min_coherent_channel = value, channel
    violation = max(worst_incoherent, coherent_floor - min_coherent)
    witnesses = [
        {
            "kind": "incoherent",
            "channel": channel_to_document(worst_incoherent_channel),
            "r": params.r,
            "s": params.s,
            "value": worst_incoherent,
        },
        {
            "kind": "coherent",
            "channel": channel_to_document(min_coherent_channel),
            "r": params.r,
            "s": params.s,
            "value": min_coherent,
        },
    ]
    return PropertyReport(
        name="faithfulness",
        samples=2 * samples,
        max_violation=violation,
        tolerance=incoherence_tol,
        passed=violation <= incoherence_tol,
        seed=seed,
        witnesses=witnesses,
        details={
            "max_incoherent_value": worst_incoherent,
            "min_coherent_value": min_coherent,
            "coherent_floor": coherent_floor,
        },
    )


def check_convexity(
    params: EntropyParams,
    samples: int = 500,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> PropertyReport:
    """C(p phi1 + (1-p) phi2) <= p C(phi1) + (1-p) C(phi2), Choi-level mixing."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    witness = None
    for _ in range(samples):
        first = random_channel(rng)
        second = random_channel(rng)
        weight = float(rng.uniform(0.0, 1.0))
        mixed = mix_channels([first, second], [weight, 1.0 - weight])
        lhs = urs_channel_coherence(mixed, params).value
        rhs = (
            weight * urs_channel_coherence(first, params).value
            + (1.0 - weight) * urs_channel_coherence(second, params).value
        )
        gap = lhs - rhs
        if gap > worst:
            worst = gap
            witness = {
                "channels": [channel_to_document(first), channel_to_document(second)],
                "weight": weight,
                "r": params.r,
                "s": params.s,
                "lhs": lhs,
                "rhs": rhs,
                "violation": gap,
            }
    return PropertyReport(
        name="convexity",
        samples=samples,
        max_violation=worst,
        tolerance=tolerance,
        passed=worst <= tolerance,
        seed=seed,
        witnesses=[witness] if witness else [],
    )


def check_incoherent_postprocessing(
    params: EntropyParams,
    samples: int = 100,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> PropertyReport:
    """Coherence never grows under pre/post composition with the restricted
    incoherent family (permutations, dephasing, mixtures)."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    witness = None
    for _ in range(samples):
        channel = random_channel(rng)
        pre = random_restricted_incoherent_channel(rng)
        post = random_restricted_incoherent_channel(rng)
        transformed = compose_channels(post, compose_channels(channel, pre))
        before = urs_channel_coherence(channel, params).value
        after = urs_channel_coherence(transformed, params).value
        gap = after - before
        if gap > worst:
            worst = gap
            witness = {
                "channel": channel_to_document(channel),
                "pre": channel_to_document(pre),
                "post": channel_to_document(post),
                "r": params.r,
                "s": params.s,
                "value_before": before,
                "value_after": after,
                "violation": gap,
            }
    return PropertyReport(
        name="incoherent-postprocessing",
        samples=samples,
        max_violation=worst,
        tolerance=tolerance,
        passed=worst <= tolerance,
        seed=seed,
        witnesses=[witness] if witness else [],
        notes=(
            "restricted family: pre/post composition with permutation channels, "
            "the completely dephasing channel, and convex mixtures thereof"
        ),
    )


def check_theorem_s_profile(
    channel: QuantumChannel,
    r: float,
    s_grid: np.ndarray | None = None,
    seed: int = 0,
    first_diff_tol: float = 1e-8,
    second_diff_tol: float = 1e-10,
) -> PropertyReport:
    """The s-profile of the closed form is decreasing and concave.

    First differences must stay below ``first_diff_tol`` and second
    differences below ``second_diff_tol``. Identically-zero profiles skip
    the concavity assertion (second differences of an exact zero are noise).
    """
    if s_grid is None:
        s_grid = np.linspace(-2.0, 1.0, 41)
    values = np.array(
        [
            urs_channel_coherence(channel, EntropyParams(r=r, s=float(s))).value
            for s in s_grid
        ]
    )
    first = np.diff(values)
    max_first = float(first.max())
    flat_zero = bool(np.max(np.abs(values)) <= 1e-12)
    if flat_zero or values.size < 3:
        max_second = -math.inf
    else:
        max_second = float(np.diff(values, n=2).max())
    violation = max(max_first - first_diff_tol, max_second - second_diff_tol)
    return PropertyReport(
        name="s-profile-monotone-concave",
        samples=int(s_grid.size),
        max_violation=violation,
        tolerance=0.0,
        passed=violation <= 0.0,
        seed=seed,
        witnesses=[
            {
                "channel": channel_to_document(channel),
                "r": r,
                "max_first_difference": max_first,
                "max_second_difference": None if flat_zero else max_second,
                "s_grid": [float(s_grid[0]), float(s_grid[-1]), int(s_grid.size)],
            }
        ],
        details={
            "max_first_difference": max_first,
            "max_second_difference": None if flat_zero else max_second,
            "identically_zero": flat_zero,
        },
    )


def check_oracle_equivalence(
    samples: int = 20,
    settings: list[tuple[float, float]] | None = None,
    seed: int = 0,
    tolerance: float = 1e-5,
    optimizer: OptimizerConfig | None = None,
) -> PropertyReport:
    """Closed form vs. direct simplex minimization on random qubit channels."""
    if settings is None:
        settings = [(0.3, 1.0), (0.5, 1.0), (0.8, 1.0), (0.5, 0.5), (0.5, 0.0), (0.5, -1.0)]
    rng = np.random.default_rng(seed)
    worst = -math.inf
    witness = None
    count = 0
    for _ in range(samples):
        channel = random_channel(rng)
        for r, s in settings:
            params = EntropyParams(r=r, s=s)
            closed = urs_channel_coherence(channel, params).value
            brute = urs_coherence_bruteforce(
                channel, params, optimizer or OptimizerConfig(seed=seed)
            ).value
            relative = abs(closed - brute) / max(closed, 1e-6)
            count += 1
            if relative > worst:
                worst = relative
                witness = {
                    "channel": channel_to_document(channel),
                    "r": r,
                    "s": s,
                    "closed_form": closed,
                    "brute_force": brute,
                    "relative_error": relative,
                }
    return PropertyReport(
        name="oracle-equivalence",
        samples=count,
        max_violation=worst,
        tolerance=tolerance,
        passed=worst <= tolerance,
        seed=seed,
        witnesses=[witness] if witness else [],
    )


def check_bounds(
    gamma_points: int = 50,
    settings: list[tuple[float, float]] | None = None,
    sandwiched_orders: list[float] | None = None,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> PropertyReport:
    """Every unitary-family value lies in [0, bound]; the bound is attained
    at gamma = pi/2."""
    if settings is None:
        settings = [(0.3, 1.0), (0.5, 1.0), (0.5, 0.5), (0.7, -1.0), (0.9, 0.0)]
    if sandwiched_orders is None:
        sandwiched_orders = [0.6, 0.75, 2.0, 10.0]
    grid = np.linspace(0.0, math.pi, gamma_points)
    worst = -math.inf
    witness = None

    def consider(gamma, value, bound, label, order_info):
        nonlocal worst, witness
        gap = max(value - bound, -value)
        if gap > worst:
            worst = gap
            witness = {
                "measure": label,
                "gamma": float(gamma),
                "value": value,
                "bound": bound,
                **order_info,
            }

    for r, s in settings:
        bound = urs_upper_bound(r, s)
        for gamma in grid:
            consider(gamma, urs_unitary_closed_form(gamma, r, s), bound, "urs", {"r": r, "s": s})
        peak = urs_unitary_closed_form(math.pi / 2.0, r, s)
        consider(math.pi / 2.0, peak, bound, "urs", {"r": r, "s": s})
        attained_gap = abs(peak - bound)
        if attained_gap > worst:
            worst = attained_gap
            witness = {"measure": "urs-peak", "r": r, "s": s, "gap": attained_gap}
    for r in sandwiched_orders:
        bound = sandwiched_upper_bound()
        for gamma in grid:
            consider(
                gamma, sandwiched_unitary_closed_form(gamma, r), bound, "sandwiched", {"r": r}
            )
        peak = sandwiched_unitary_closed_form(math.pi / 2.0, r)
        consider(math.pi / 2.0, peak, bound, "sandwiched", {"r": r})
        attained_gap = abs(peak - bound)
        if attained_gap > worst:
            worst = attained_gap
            witness = {"measure": "sandwiched-peak", "r": r, "gap": attained_gap}
    return PropertyReport(
        name="bounds",
        samples=gamma_points * (len(settings) + len(sandwiched_orders)),
        max_violation=worst,
        tolerance=tolerance,
        passed=worst <= tolerance,
        seed=seed,
        witnesses=[witness] if witness else [],
    )


# ---------------------------------------------------------------------------
# suite driver
# ---------------------------------------------------------------------------

SUITE_NAMES = (
    "oracle",
    "theorem2",
    "bounds",
    "convexity",
    "faithfulness",
    "postprocessing",
)


def run_verification(
    suites: list[str],
    seed: int = 0,
    samples: int | None = None,
    incoherence_tol: float = 1e-9,
) -> list[PropertyReport]:
    """Run the named suites with their default parameters (scaled by samples)."""
    params = EntropyParams(r=0.5, s=1.0)
    reports = []
    for suite in suites:
        if suite == "oracle":
            reports.append(check_oracle_equivalence(samples=samples or 20, seed=seed))
        elif suite == "theorem2":
            rng = np.random.default_rng(seed)
            channels = [hadamard_channel(), dephasing_channel()]
            channels += [random_channel(rng) for _ in range(samples or 5)]
            for channel in channels:
                for r in (0.3, 0.5, 0.8):
                    reports.append(check_theorem_s_profile(channel, r, seed=seed))
        elif suite == "bounds":
            reports.append(check_bounds(gamma_points=samples or 50, seed=seed))
        elif suite == "convexity":
            reports.append(check_convexity(params, samples=samples or 500, seed=seed))
        elif suite == "faithfulness":
            reports.append(
                check_faithfulness(
                    params,
                    samples=samples or 200,
                    seed=seed,
                    incoherence_tol=incoherence_tol,
                )
            )
        elif suite == "postprocessing":
            reports.append(
                check_incoherent_postprocessing(params, samples=samples or 100, seed=seed)
            )
        else:
            raise ValueError(f"unknown suite {suite!r}")
    return reports
