"""Weyl coefficients of 2x2 canonical systems with certified error bounds."""

from ._qweyl import (
    Model,
    certified_band,
    envelopes,
    estimate_at,
    eval_q,
    log_grid,
    model_from_file,
    model_from_json,
    sl_m,
    string_ratios,
)

__all__ = [
    "Model",
    "certified_band",
    "envelopes",
    "estimate_at",
    "eval_q",
    "log_grid",
    "model_from_file",
    "model_from_json",
    "sl_m",
    "string_ratios",
]
