"""JSON wire formats for channels and computation results.

Complex numbers encode as two-element ``[re, im]`` arrays and matrices as
row-major nested lists, so every document is language neutral. Infinite
values serialize as the literal string ``"inf"``, never as a float
sentinel.
"""

from __future__ import annotations

import math

import numpy as np

from cohchan.channels import ChannelValidationError, QuantumChannel

TOOL_VERSION = "0.1.0"


class DocumentFormatError(ValueError):
    """Document is structurally malformed."""


def encode_complex_matrix(matrix) -> list:
    """Row-major nested lists of [re, im] pairs."""
    m = np.asarray(matrix, dtype=np.complex128)
    return [[[float(entry.real), float(entry.imag)] for entry in row] for row in m]


def decode_complex_matrix(data, context: str = "matrix") -> np.ndarray:
    try:
        rows = []
        for row in data:
            rows.append([complex(entry[0], entry[1]) for entry in row])
        out = np.asarray(rows, dtype=np.complex128)
    except (TypeError, ValueError, IndexError) as exc:
        raise DocumentFormatError(f"{context}: entries must be [re, im] pairs") from exc
    if out.ndim != 2:
        raise DocumentFormatError(f"{context}: expected a nested-list matrix")
    return out


def encode_value(x: float | None):
    """Finite float, the string 'inf', or None."""
    if x is None:
        return None
    if math.isinf(x):
        return "inf"
    return float(x)


def decode_value(v) -> float | None:
    if v is None:
        return None
    if v == "inf":
        return math.inf
    return float(v)


def channel_to_document(channel: QuantumChannel) -> dict:
    """Serialize a channel, preferring the Kraus representation when stored."""
    doc = {"dim_in": channel.dim_in, "dim_out": channel.dim_out}
    if channel.kraus is not None:
        doc["type"] = "kraus"
        doc["operators"] = [encode_complex_matrix(op) for op in channel.kraus]
    else:
        doc["type"] = "choi"
        doc["matrix"] = encode_complex_matrix(channel.choi)
    return doc


def channel_from_document(doc) -> QuantumChannel:
    """Parse a channel document; malformed structure raises DocumentFormatError."""
    if not isinstance(doc, dict):
        raise DocumentFormatError("channel document must be a JSON object")
    kind = doc.get("type")
    if kind not in ("kraus", "choi"):
        raise DocumentFormatError(f"channel type must be 'kraus' or 'choi', got {kind!r}")
    try:
        dim_in = int(doc["dim_in"])
        dim_out = int(doc["dim_out"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentFormatError("dim_in and dim_out must be integers") from exc
    if dim_in <= 0 or dim_out <= 0:
        raise DocumentFormatError("dimensions must be positive")
    try:
        if kind == "kraus":
            operators = doc["operators"]
            if not isinstance(operators, list) or not operators:
                raise DocumentFormatError("operators must be a non-empty list")
            kraus = tuple(
                decode_complex_matrix(op, context=f"operators[{i}]")
                for i, op in enumerate(operators)
            )
            return QuantumChannel(dim_in=dim_in, dim_out=dim_out, kraus=kraus)
        matrix = decode_complex_matrix(doc["matrix"], context="matrix")
        return QuantumChannel(dim_in=dim_in, dim_out=dim_out, choi=matrix)
    except KeyError as exc:
        raise DocumentFormatError(f"missing field {exc}") from exc
    except ChannelValidationError as exc:
        raise DocumentFormatError(str(exc)) from exc


def result_document(report, seed: int, timestamp: str) -> dict:
    """ResultDocument for a coherence report (fixed field set, inf-safe)."""
    diag = report.optimal_diag
    return {
        "measure": report.measure,
        "r": report.params.r,
        "s": report.params.s,
        "value": encode_value(report.value),
        "t": encode_value(report.t),
        "upper_bound": encode_value(report.upper_bound),
        "optimal_diag": None if diag is None else [float(x) for x in diag],
        "flags": list(report.flags),
        "seed": seed,
        "tool_version": TOOL_VERSION,
        "timestamp": timestamp,
    }
