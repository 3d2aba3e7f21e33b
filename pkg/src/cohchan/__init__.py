"""Coherence monotones of quantum channels via the Choi-Jamiolkowski isomorphism."""

from cohchan.channels import (
    CJState,
    CPTPReport,
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
from cohchan.documents import TOOL_VERSION as __version__
from cohchan.entropies import (
    EntropyParams,
    EntropyValue,
    ParameterDomainError,
    sandwiched_relative_entropy,
    unified_relative_entropy,
)
from cohchan.linalg import (
    EigenSystem,
    fractional_power,
    hermitian_eigendecomposition,
    matrix_log,
    partial_trace,
    tensor_product,
)
from cohchan.monotones import (
    CoherenceReport,
    MixedChoiStateError,
    NoPureDecompositionError,
    OptimizerConfig,
    RoofSearchConfig,
    UnsupportedDimensionError,
    sandwiched_channel_coherence_convex_roof,
    sandwiched_channel_coherence_pure,
    state_urs_coherence,
    urs_channel_coherence,
    urs_coherence_bruteforce,
)
from cohchan.qubit_examples import (
    amplitude_damping_channel,
    build_qubit_unitary,
    dephasing_channel,
    hadamard_channel,
    identity_channel,
    sandwiched_unitary_closed_form,
    sandwiched_upper_bound,
    unitary_channel,
    urs_unitary_closed_form,
    urs_upper_bound,
)

__all__ = [
    "__version__",
    "CJState",
    "CPTPReport",
    "ChannelValidationError",
    "CoherenceReport",
    "EigenSystem",
    "EntropyParams",
    "EntropyValue",
    "MixedChoiStateError",
    "NoPureDecompositionError",
    "OptimizerConfig",
    "ParameterDomainError",
    "QuantumChannel",
    "RoofSearchConfig",
    "UnsupportedDimensionError",
    "amplitude_damping_channel",
    "build_qubit_unitary",
    "choi_from_kraus",
    "cj_state",
    "compose_channels",
    "dephasing_channel",
    "fractional_power",
    "hadamard_channel",
    "hermitian_eigendecomposition",
    "identity_channel",
    "is_incoherent_channel",
    "kraus_from_choi",
    "matrix_log",
    "mix_channels",
    "partial_trace",
    "sandwiched_channel_coherence_convex_roof",
    "sandwiched_channel_coherence_pure",
    "sandwiched_relative_entropy",
    "sandwiched_unitary_closed_form",
    "sandwiched_upper_bound",
    "state_urs_coherence",
    "tensor_product",
    "unified_relative_entropy",
    "unitary_channel",
    "urs_channel_coherence",
    "urs_coherence_bruteforce",
    "urs_unitary_closed_form",
    "urs_upper_bound",
    "validate_cptp",
]
