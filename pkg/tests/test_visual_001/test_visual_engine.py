"""
Integration tests for VisualEngine.
"""

import numpy as np
import pytest

from src.modules.training_001 import ToySpec
from src.modules.visual_001 import CHART_TYPES, VisualEngine


class TestVisualEngine:
    """Test suite for VisualEngine integration."""

    def setup_method(self):
        """Set up test fixtures."""
        self.messages = []
        self.engine = VisualEngine(callback=self.messages.append)
        grid = np.round(np.linspace(0.0, 1.0, 11), 1)
        band = np.linspace(1.0, 2.0, 24)
        self.sample_data = {
            "coverage": {
                "reinforced": (grid, np.linspace(0.3, 0.0, 11)),
                "ar-noise": (grid, np.linspace(0.5, 0.05, 11)),
            },
            "fan": {
                "reinforced": {
                    "median": band,
                    "lower": band - 0.2,
                    "upper": band + 0.2,
                    "realized": band + 0.05,
                    "window_id": 7,
                },
            },
            "width": {"reinforced": np.full(24, 0.4), "ar-noise": np.full(24, 0.8)},
            "toy": {"mixture": ToySpec().mixture(), "kl_sigma2": 1.1, "w1_sigma2": 0.9},
        }

    def test_generate_all_charts(self):
        """Test every chart type is generated and valid."""
        result = self.engine.generate_all(self.sample_data, {"chart_types": CHART_TYPES})

        assert set(result["charts"]) == {"deviation_coverage", "fan_reinforced", "width_profile", "toy_fit"}
        assert result["validation"]["all_valid"] is True
        assert all(chart["valid"] for chart in result["charts"].values())
        assert "Generated 4 charts" in self.messages

    def test_generate_subset(self):
        """Test only the requested chart types are produced."""
        result = self.engine.generate_all(self.sample_data, {"chart_types": ["width"]})

        assert list(result["charts"]) == ["width_profile"]

    def test_missing_data_is_skipped(self):
        """Test requested charts without inputs are left out."""
        result = self.engine.generate_all({"width": self.sample_data["width"]}, {})

        assert list(result["charts"]) == ["width_profile"]

    def test_validation_can_be_disabled(self):
        """Test validate=False leaves charts unmarked."""
        result = self.engine.generate_all(self.sample_data, {"chart_types": ["toy"], "validate": False})

        assert "valid" not in result["charts"]["toy_fit"]
        assert result["validation"]["errors"] == []

    def test_unknown_chart_type(self):
        """Test unknown chart types raise ValueError."""
        with pytest.raises(ValueError, match="Must be one of"):
            self.engine.generate_all(self.sample_data, {"chart_types": ["timeline"]})
