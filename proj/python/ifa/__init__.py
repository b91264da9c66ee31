"""Iterated-finite-automaton market model: python surface over the C++ core."""

from ._core import (
    CycleReport,
    DigitConvention,
    MomentSummary,
    Transition,
    TransitionTable,
    asset_series,
    best_asset_return,
    calibrate,
    decode_rule,
    detect_cycle,
    encode_rule,
    evolve,
    moments,
    pearson,
    relabel_rule,
    rolling_correlation,
    rule_dot,
    scan_multi_range,
    spearman,
)

__all__ = [
    "CycleReport",
    "DigitConvention",
    "MomentSummary",
    "Transition",
    "TransitionTable",
    "asset_series",
    "best_asset_return",
    "calibrate",
    "decode_rule",
    "detect_cycle",
    "encode_rule",
    "evolve",
    "moments",
    "pearson",
    "relabel_rule",
    "rolling_correlation",
    "rule_dot",
    "scan_multi_range",
    "spearman",
]
