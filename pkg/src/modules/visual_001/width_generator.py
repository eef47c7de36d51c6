"""
VISUAL-001: PI Width Profile Generator
Average prediction-interval width per hour of the day, one line per method.
"""

from typing import Dict

import numpy as np

from .canvas import SvgCanvas, color_for, data_range


class WidthProfileGenerator:
    """Generate sharpness (PI width) profile charts."""

    def generate(self, profiles: Dict[str, np.ndarray], coverage: float = 0.5) -> Dict:
        """
        Args:
            profiles: method -> Array[k] mean width per hour
            coverage: interval coverage size, for the title

        Returns:
            Dict with svg, title, description and series
        """
        title = f"{int(round(coverage * 100))}% PI width by hour"
        if not profiles:
            canvas = SvgCanvas((0.0, 1.0), (0.0, 1.0), title="No Profiles Available")
            return {"svg": canvas.render(), "title": "No Profiles Available",
                    "description": "No width profiles provided", "series": {}}

        k = max(len(p) for p in profiles.values())
        canvas = SvgCanvas((0, max(k - 1, 1)), data_range(list(profiles.values()), floor=0.0),
                           title=title, x_label="hour ahead", y_label="width (kW)")
        for index, (method, profile) in enumerate(profiles.items()):
            canvas.polyline(np.arange(len(profile)), profile, color_for(method, index), label=method)

        narrowest = min(profiles, key=lambda m: float(np.mean(profiles[m])))
        return {
            "svg": canvas.render(),
            "title": title,
            "description": f"narrowest on average: {narrowest}",
            "series": {m: np.asarray(p, dtype=float).tolist() for m, p in profiles.items()},
        }
