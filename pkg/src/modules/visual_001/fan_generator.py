"""
VISUAL-001: Fan Chart Generator
Median trajectory with a shaded prediction band against the realized load.
"""

from typing import Dict, Optional

import numpy as np

from .canvas import SvgCanvas, color_for, data_range


class FanChartGenerator:
    """Generate fan charts for one forecast window."""

    def generate(
        self,
        median,
        lower,
        upper,
        realized: Optional[np.ndarray] = None,
        method: str = "flow",
        window_id: int = 0,
        coverage: float = 0.5,
    ) -> Dict:
        """
        Build the chart (values are floored at 0 kW for display).

        Args:
            median / lower / upper: Array[k] band for one window
            realized: Array[k] realized load, optional
            method: method label (colour and title)
            window_id: forecast window shown
            coverage: band coverage size, for the legend

        Returns:
            Dict with svg, title, description and series (median, lower, upper, realized)

        Raises:
            ValueError: If band arrays differ in length
        """
        median, lower, upper = (np.maximum(np.asarray(a, dtype=float), 0.0) for a in (median, lower, upper))
        if not (median.shape == lower.shape == upper.shape):
            raise ValueError(
                f"Invalid band shapes {lower.shape}, {median.shape}, {upper.shape}. Must be equal"
            )
        hours = np.arange(median.shape[0])
        arrays = [lower, upper] + ([realized] if realized is not None else [])
        title = f"{method}: window {window_id}"
        canvas = SvgCanvas((0, max(hours[-1], 1)), data_range(arrays, floor=0.0), title=title,
                           x_label="hour ahead", y_label="load (kW)")
        color = color_for(method)
        canvas.band(hours, lower, upper, color, label=f"{int(round(coverage * 100))}% band")
        canvas.polyline(hours, median, color, label="median")
        series = {"median": median.tolist(), "lower": lower.tolist(), "upper": upper.tolist()}
        if realized is not None:
            realized = np.asarray(realized, dtype=float)
            canvas.polyline(hours, realized, color_for("realized"), label="realized", dashed=True)
            series["realized"] = realized.tolist()

        return {
            "svg": canvas.render(),
            "title": title,
            "description": f"median and {int(round(coverage * 100))}% band over {hours.size} hours",
            "series": series,
        }
