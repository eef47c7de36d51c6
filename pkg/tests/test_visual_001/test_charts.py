"""
Unit tests for the coverage, fan, width and toy chart generators.
"""

import numpy as np
import pytest

from src.modules.training_001 import ToySpec
from src.modules.visual_001.canvas import fmt_num, nice_ticks
from src.modules.visual_001.coverage_generator import CoverageChartGenerator
from src.modules.visual_001.fan_generator import FanChartGenerator
from src.modules.visual_001.toy_generator import ToyFitGenerator
from src.modules.visual_001.validator import SvgValidator
from src.modules.visual_001.width_generator import WidthProfileGenerator

GRID = np.round(np.linspace(0.0, 1.0, 11), 1)


class TestCanvasHelpers:
    """Test suite for canvas formatting helpers."""

    def test_fmt_num(self):
        """Test compact fixed-point formatting."""
        assert fmt_num(1.5) == "1.5"
        assert fmt_num(2.0) == "2"
        assert fmt_num(-0.001) == "0"
        assert "e" not in fmt_num(1e-7)

    def test_nice_ticks(self):
        """Test ticks are round and inside the range."""
        ticks = nice_ticks(0.0, 1.0)

        assert ticks[0] == 0.0
        assert ticks[-1] <= 1.0
        assert all(t in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0) for t in ticks)


class TestCoverageChart:
    """Test suite for CoverageChartGenerator."""

    def setup_method(self):
        """Set up test fixtures."""
        self.generator = CoverageChartGenerator()
        self.validator = SvgValidator()

    def test_generate_two_methods(self):
        """Test one series per method and the best method in the description."""
        curves = {
            "reinforced": (GRID, np.linspace(0.4, 0.0, 11)),
            "ar-noise": (GRID, np.linspace(0.6, 0.1, 11)),
        }

        result = self.generator.generate(curves)

        assert set(result["series"]) == {"reinforced", "ar-noise"}
        assert "reinforced" in result["description"]
        assert result["svg"].count("<polyline") == 2
        assert self.validator.validate_svg(result["svg"])[0] is True

    def test_generate_empty(self):
        """Test an empty input still renders a valid placeholder."""
        result = self.generator.generate({})

        assert result["title"] == "No Curves Available"
        assert result["series"] == {}
        assert self.validator.validate_svg(result["svg"])[0] is True


class TestFanChart:
    """Test suite for FanChartGenerator."""

    def setup_method(self):
        """Set up test fixtures."""
        self.generator = FanChartGenerator()
        hours = np.arange(24)
        self.median = 1.0 + np.sin(hours / 24.0 * 2 * np.pi)
        self.lower = self.median - 0.5
        self.upper = self.median + 0.5

    def test_generate_with_realized(self):
        """Test band, median and realized series."""
        result = self.generator.generate(
            self.median, self.lower, self.upper, realized=self.median + 0.1, method="vanilla", window_id=3
        )

        assert result["title"] == "vanilla: window 3"
        assert set(result["series"]) == {"median", "lower", "upper", "realized"}
        assert "<polygon" in result["svg"]
        assert SvgValidator().validate_svg(result["svg"])[0] is True

    def test_negative_values_floored(self):
        """Test displayed band values are floored at 0 kW."""
        result = self.generator.generate(self.median, self.lower, self.upper)

        assert min(result["series"]["lower"]) >= 0.0

    def test_mismatched_band(self):
        """Test band arrays of different lengths raise ValueError."""
        with pytest.raises(ValueError, match="Must be equal"):
            self.generator.generate(self.median, self.lower[:10], self.upper)


class TestWidthChart:
    """Test suite for WidthProfileGenerator."""

    def test_generate(self):
        """Test the narrowest method is named."""
        profiles = {"reinforced": np.full(24, 0.4), "ar-noise": np.full(24, 0.9)}

        result = WidthProfileGenerator().generate(profiles)

        assert result["title"] == "50% PI width by hour"
        assert result["description"] == "narrowest on average: reinforced"
        assert SvgValidator().validate_svg(result["svg"])[0] is True

    def test_generate_empty(self):
        """Test an empty input renders the placeholder."""
        result = WidthProfileGenerator().generate({})

        assert result["title"] == "No Profiles Available"


class TestToyChart:
    """Test suite for ToyFitGenerator."""

    def setup_method(self):
        """Set up test fixtures."""
        self.mixture = ToySpec().mixture()

    def test_generate_both_fits(self):
        """Test mixture, KL and W1 curves are drawn."""
        result = ToyFitGenerator(n_points=101).generate(self.mixture, 1.1, 0.8)

        assert set(result["series"]) == {"x", "mixture", "kl", "w1"}
        assert len(result["series"]["x"]) == 101
        assert result["svg"].count("<polyline") == 3
        assert SvgValidator().validate_svg(result["svg"])[0] is True

    def test_point_mass_fit(self):
        """Test a zero-variance W1 fit is drawn as a vertical line."""
        result = ToyFitGenerator(n_points=101).generate(self.mixture, 1.1, 0.0)

        assert "w1" not in result["series"]
        assert "point mass" in result["svg"]
        assert SvgValidator().validate_svg(result["svg"])[0] is True
