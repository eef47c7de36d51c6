"""
EVAL-001: Scenario Forecasting & Evaluation

Turns trained flows (and the AR baseline) into scenario sets and scores them:
- Scenario generation through the inverse flow, de-standardized to kW
- Empirical quantile bands and prediction-interval widths
- Deviation-coverage reliability curves
- AR(24) + Gaussian-noise baseline

Version: 1.0.0
Status: Production Ready
Dependencies: FLOW-001, DATA-001
"""

from .scenarios import ScenarioSet, condition_sensitivity, generate_scenarios
from .metrics import (
    COVERAGE_GRID,
    CoverageCurve,
    QuantileBand,
    coverage_curve_for_windows,
    deviation_coverage,
    empirical_coverage,
    pi_width_profile,
    quantile_band,
)
from .baseline import ARBaseline, ar_fit, ar_scenarios
from .engine import EvaluationEngine, MethodEvaluation

__version__ = "1.0.0"
__all__ = [
    "ScenarioSet",
    "condition_sensitivity",
    "generate_scenarios",
    "COVERAGE_GRID",
    "CoverageCurve",
    "QuantileBand",
    "coverage_curve_for_windows",
    "deviation_coverage",
    "empirical_coverage",
    "pi_width_profile",
    "quantile_band",
    "ARBaseline",
    "ar_fit",
    "ar_scenarios",
    "EvaluationEngine",
    "MethodEvaluation",
]
