"""
VISUAL-001: Chart Generation Engine
Main entry point for the plotting layer.

Generates standalone SVG charts from EVAL-001 and TRAINING-001 outputs:
- Deviation-coverage curves (reliability)
- Fan charts (median + prediction band vs realized)
- PI width profiles (sharpness)
- Mixture toy fit (KL vs W1)

Version: 1.0.0
Status: Production Ready
Dependencies: none (consumes plain arrays)
"""

from typing import Dict

from .canvas import SvgCanvas
from .coverage_generator import CoverageChartGenerator
from .fan_generator import FanChartGenerator
from .width_generator import WidthProfileGenerator
from .toy_generator import ToyFitGenerator
from .validator import SvgValidator

CHART_TYPES = ["coverage", "fan", "width", "toy"]


class VisualEngine:
    """
    Main Visual-001 engine for chart generation.

    Integrates all chart generators and validates every chart it returns.
    """

    def __init__(self, callback=None):
        """
        Initialize visual engine.

        Args:
            callback: Optional logging callback function
        """
        self.coverage_gen = CoverageChartGenerator()
        self.fan_gen = FanChartGenerator()
        self.width_gen = WidthProfileGenerator()
        self.toy_gen = ToyFitGenerator()
        self.validator = SvgValidator()
        self.callback = callback or (lambda x: None)

    def generate_all(self, data: Dict, config: Dict) -> Dict:
        """
        Generate all requested charts.

        Args:
            data: Inputs keyed by chart type:
                - coverage: dict (method -> (coverages, deviations))
                - fan: dict (method -> dict(median, lower, upper, realized, window_id))
                - width: dict (method -> per-hour width)
                - toy: dict (mixture, kl_sigma2, w1_sigma2)
            config: Configuration dict with keys:
                - chart_types: list[str] (charts to generate)
                - validate: bool (run validation, default True)

        Returns:
            Dict with:
                - charts: dict (chart name -> generator result)
                - validation: dict (all_valid, errors)

        Raises:
            ValueError: If an unknown chart type is requested
        """
        chart_types = config.get("chart_types", CHART_TYPES)
        validate = config.get("validate", True)
        unknown = [t for t in chart_types if t not in CHART_TYPES]
        if unknown:
            raise ValueError(f"Invalid chart type '{unknown[0]}'. Must be one of: {CHART_TYPES}")

        charts = {}
        if "coverage" in chart_types and "coverage" in data:
            charts["deviation_coverage"] = self.coverage_gen.generate(data["coverage"])
        if "fan" in chart_types:
            for method, fan in data.get("fan", {}).items():
                charts[f"fan_{method}"] = self.fan_gen.generate(method=method, **fan)
        if "width" in chart_types and "width" in data:
            charts["width_profile"] = self.width_gen.generate(data["width"])
        if "toy" in chart_types and "toy" in data:
            charts["toy_fit"] = self.toy_gen.generate(**data["toy"])

        all_errors = []
        if validate:
            for name, chart in charts.items():
                is_valid, errors = self.validator.validate_svg(chart["svg"])
                chart["valid"] = is_valid
                if not is_valid:
                    all_errors.extend(f"{name}: {e}" for e in errors)
                    self._log(f"⚠ {name} failed validation: {errors[0]}")

        self._log(f"Generated {len(charts)} charts")
        return {
            "charts": charts,
            "validation": {"all_valid": len(all_errors) == 0, "errors": all_errors},
        }

    def _log(self, message: str):
        """Log message via callback."""
        self.callback(message)


__version__ = "1.0.0"
__all__ = [
    "VisualEngine",
    "SvgCanvas",
    "CoverageChartGenerator",
    "FanChartGenerator",
    "WidthProfileGenerator",
    "ToyFitGenerator",
    "SvgValidator",
    "CHART_TYPES",
]
