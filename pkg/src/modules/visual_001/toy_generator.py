"""
VISUAL-001: Toy Fit Generator
Mixture density next to its best KL and best W1 zero-mean Gaussian fits.
"""

from typing import Dict

import numpy as np
from scipy import stats

from .canvas import SvgCanvas, color_for


class ToyFitGenerator:
    """Generate the KL-vs-W1 fit comparison chart."""

    def __init__(self, n_points: int = 401):
        self.n_points = n_points

    def generate(self, mixture, kl_sigma2: float, w1_sigma2: float) -> Dict:
        """
        Args:
            mixture: object with pdf(x), means and stds (MixtureQuantile)
            kl_sigma2: KL-optimal variance
            w1_sigma2: W1-optimal variance (0 is drawn as a spike at 0)

        Returns:
            Dict with svg, title, description and series (x, mixture, kl, w1)
        """
        span = float(np.max(np.abs(mixture.means) + 4.0 * mixture.stds))
        span = max(span, 3.0 * np.sqrt(max(kl_sigma2, w1_sigma2)))
        x = np.linspace(-span, span, self.n_points)
        p = mixture.pdf(x)
        q_kl = stats.norm.pdf(x, 0.0, np.sqrt(kl_sigma2))
        curves = {"mixture": p, "kl": q_kl}
        if w1_sigma2 > 0:
            curves["w1"] = stats.norm.pdf(x, 0.0, np.sqrt(w1_sigma2))

        y_hi = 1.05 * max(float(np.max(c)) for c in curves.values())
        title = "Fitting N(0, sigma^2) to a Gaussian mixture"
        canvas = SvgCanvas((x[0], x[-1]), (0.0, y_hi), title=title, x_label="x", y_label="density")
        canvas.polyline(x, p, color_for("mixture"), label="mixture")
        canvas.polyline(x, q_kl, color_for("kl"), label=f"KL fit (s2={kl_sigma2:.3f})")
        if w1_sigma2 > 0:
            canvas.polyline(x, curves["w1"], color_for("w1"), label=f"W1 fit (s2={w1_sigma2:.3f})")
        else:
            canvas.vline(0.0, color_for("w1"), label="W1 fit (point mass)")

        return {
            "svg": canvas.render(),
            "title": title,
            "description": f"KL optimum {kl_sigma2:.3f}, W1 optimum {w1_sigma2:.3f}",
            "series": {name: np.asarray(c).tolist() for name, c in {"x": x, **curves}.items()},
        }
