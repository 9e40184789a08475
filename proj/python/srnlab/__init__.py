"""Stochastic reward net analysis of a cloud service monitored by a
performance anomaly detector.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from srnlab._core import (
    LcConfig,
    DetectorProfile,
    ProbMode,
    ServiceParams,
    SimConfig,
    SrnError,
    SrnModel,
    analyze,
    build_baseline_model,
    build_monitored_model,
    c_min_of,
    catalog_detector,
    cross_check,
    detector_names,
    detector_probs,
    interval_to_rate,
    lc_score,
    make_detector,
    minmax_norm,
    precision_of,
    rate_to_interval,
    recall_of,
    simulate,
)

__all__ = [
    "LcConfig",
    "DetectorProfile",
    "ProbMode",
    "ServiceParams",
    "SimConfig",
    "SrnError",
    "SrnModel",
    "analyze",
    "build_baseline_model",
    "build_monitored_model",
    "c_min_of",
    "catalog_detector",
    "cross_check",
    "detector_names",
    "detector_probs",
    "interval_to_rate",
    "lc_score",
    "make_detector",
    "minmax_norm",
    "precision_of",
    "rate_to_interval",
    "recall_of",
    "simulate",
]
