"""
VISUAL-001: Deviation-Coverage Chart Generator
One polyline per method: average deviation against coverage size.
"""

from typing import Dict, Tuple

import numpy as np

from .canvas import SvgCanvas, color_for, data_range


class CoverageChartGenerator:
    """
    Generate reliability (deviation vs coverage) charts.

    Lower curves are better; a perfect forecast lies on zero.
    """

    def generate(self, curves: Dict[str, Tuple[np.ndarray, np.ndarray]], title: str = "") -> Dict:
        """
        Build the chart.

        Args:
            curves: method -> (coverages, deviations)
            title: optional title override

        Returns:
            Dict with:
                - svg: str
                - title: str
                - description: str
                - series: dict (method -> deviations as list)
        """
        title = title or "Deviation vs Coverage"
        if not curves:
            canvas = SvgCanvas((0.0, 1.0), (0.0, 1.0), title="No Curves Available")
            return {
                "svg": canvas.render(),
                "title": "No Curves Available",
                "description": "No coverage curves provided",
                "series": {},
            }

        y_lo, y_hi = data_range([d for _, d in curves.values()], floor=0.0)
        canvas = SvgCanvas((0.0, 1.0), (y_lo, y_hi), title=title,
                           x_label="coverage size 1 - alpha", y_label="average deviation (kW)")
        for index, (method, (coverages, deviations)) in enumerate(curves.items()):
            canvas.polyline(coverages, deviations, color_for(method, index), label=method)

        best = min(curves, key=lambda m: float(np.mean(curves[m][1])))
        return {
            "svg": canvas.render(),
            "title": title,
            "description": f"{len(curves)} method(s); lowest mean deviation: {best}",
            "series": {m: np.asarray(d, dtype=float).tolist() for m, (_, d) in curves.items()},
        }
