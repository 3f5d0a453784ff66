# Copyright 2026 The incore Authors.
# SPDX-License-Identifier: Apache-2.0
"""Static in-core performance model for loop kernels."""

from ._incore import (
    Error,
    MachineModel,
    ParseError,
    UnknownInstruction,
    analyze,
    cli,
    dump_ir,
    histogram,
    load_model,
    parse_model,
    relative_prediction_error,
    roofline,
    summarize,
    traffic_ratio,
)

__all__ = [
    "Error",
    "MachineModel",
    "ParseError",
    "UnknownInstruction",
    "analyze",
    "cli",
    "dump_ir",
    "histogram",
    "load_model",
    "parse_model",
    "relative_prediction_error",
    "roofline",
    "summarize",
    "traffic_ratio",
]
