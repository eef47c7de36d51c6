"""
EVAL-001: Quantile bands, deviation-coverage curves and PI widths

For a band [lower, upper] of coverage size 1 - alpha the deviation of a
realization y is

    dev = lower - y   if y < lower
          y - upper   if y > upper
          0           otherwise

and Dev(1 - alpha) is its average over every look-ahead hour.
"""

from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from .scenarios import ScenarioSet
from ...utils.errors import DimensionMismatchError, InputError

# Coverage sizes 1 - alpha for reliability curves
COVERAGE_GRID = np.round(np.linspace(0.0, 1.0, 11), 1)
BAND_TOLERANCE = 1e-12


@dataclass
class QuantileBand:
    """Per-hour lower / median / upper quantiles for one coverage size"""

    lower: np.ndarray
    median: np.ndarray
    upper: np.ndarray
    coverage: float

    def __post_init__(self):
        if not (np.all(self.lower <= self.median + BAND_TOLERANCE)
                and np.all(self.median <= self.upper + BAND_TOLERANCE)):
            raise InputError("quantile band violates lower <= median <= upper")

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, realized) -> np.ndarray:
        realized = np.asarray(realized, dtype=np.float64)
        return (realized >= self.lower) & (realized <= self.upper)

    def deviation(self, realized) -> np.ndarray:
        realized = np.asarray(realized, dtype=np.float64)
        if realized.shape != self.lower.shape:
            raise DimensionMismatchError(
                f"realized shape {realized.shape} does not match band shape {self.lower.shape}"
            )
        return np.maximum(self.lower - realized, 0.0) + np.maximum(realized - self.upper, 0.0)


@dataclass
class CoverageCurve:
    """Dev(1 - alpha) over a grid of coverage sizes"""

    coverages: np.ndarray
    deviations: np.ndarray

    def rows(self):
        return list(zip(self.coverages.tolist(), self.deviations.tolist()))

    def area(self) -> float:
        """Deviation-coverage area (trapezoid over the grid)."""
        c, d = self.coverages, self.deviations
        return float(np.sum(0.5 * (d[1:] + d[:-1]) * np.diff(c)))


def _scenario_values(scenarios: Union[ScenarioSet, np.ndarray]) -> np.ndarray:
    values = scenarios.values if isinstance(scenarios, ScenarioSet) else np.asarray(scenarios, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] == 0:
        raise InputError("scenario set is empty")
    if values.shape[0] < 2:
        raise InputError(f"quantile bands need at least 2 scenarios, got {values.shape[0]}")
    return values


def quantile_band(scenarios: Union[ScenarioSet, np.ndarray], coverage: float) -> QuantileBand:
    """
    Empirical band of the given coverage size (linear interpolation).

    Args:
        scenarios: ScenarioSet or Array[m, k]
        coverage: 1 - alpha in [0, 1]; 0 collapses the band to the median

    Returns:
        QuantileBand with alpha/2 and 1 - alpha/2 quantiles per hour
    """
    if not 0.0 <= coverage <= 1.0:
        raise InputError(f"coverage must lie in [0, 1], got {coverage}")
    values = _scenario_values(scenarios)
    alpha = 1.0 - coverage
    lower, median, upper = np.quantile(values, [alpha / 2.0, 0.5, 1.0 - alpha / 2.0], axis=0)
    # both tails collapse onto the median when alpha = 1
    if alpha == 1.0:
        lower = upper = median
    return QuantileBand(lower, median, upper, float(coverage))


def deviation_coverage(realized, bands: Sequence[QuantileBand]) -> CoverageCurve:
    """
    Average deviation per coverage size for one aligned realization.

    Args:
        realized: Array[T]
        bands: one QuantileBand (length T) per grid point

    Raises:
        DimensionMismatchError: band / realization length mismatch
    """
    if not bands:
        raise InputError("deviation_coverage needs at least one band")
    realized = np.asarray(realized, dtype=np.float64)
    coverages = np.array([band.coverage for band in bands])
    deviations = np.array([float(np.mean(band.deviation(realized))) for band in bands])
    order = np.argsort(coverages, kind="stable")
    return CoverageCurve(coverages[order], deviations[order])


def stack_bands(bands: Sequence[QuantileBand]) -> QuantileBand:
    """Concatenate per-window bands of one coverage size along the hour axis."""
    return QuantileBand(
        np.concatenate([b.lower for b in bands]),
        np.concatenate([b.median for b in bands]),
        np.concatenate([b.upper for b in bands]),
        bands[0].coverage,
    )


def coverage_curve_for_windows(
    realized, scenario_sets: Sequence[ScenarioSet], grid=COVERAGE_GRID
) -> CoverageCurve:
    """
    Deviation-coverage curve over many windows, averaged over all W * k hours.

    Args:
        realized: Array[W, k] realized kW per window
        scenario_sets: W ScenarioSets in window order
        grid: coverage sizes
    """
    realized = np.asarray(realized, dtype=np.float64)
    if realized.ndim != 2 or realized.shape[0] != len(scenario_sets):
        raise DimensionMismatchError(
            f"{len(scenario_sets)} scenario sets vs realized shape {realized.shape}"
        )
    for row, scenarios in zip(realized, scenario_sets):
        if scenarios.k != row.shape[0]:
            raise DimensionMismatchError(
                f"window {scenarios.window_id}: {scenarios.k} scenario hours vs {row.shape[0]} realized"
            )
    bands = [stack_bands([quantile_band(s, c) for s in scenario_sets]) for c in grid]
    return deviation_coverage(realized.ravel(), bands)


def pi_width_profile(bands: Sequence[QuantileBand]) -> np.ndarray:
    """Mean band width per hour across windows."""
    if len(bands) == 0:
        raise InputError("width profile needs at least one band")
    return np.mean([band.width for band in bands], axis=0)


def empirical_coverage(realized, bands: Sequence[QuantileBand]) -> float:
    """Fraction of realizations (all windows, all hours) inside their band."""
    realized = np.atleast_2d(np.asarray(realized, dtype=np.float64))
    if realized.shape[0] != len(bands):
        raise DimensionMismatchError(f"{len(bands)} bands vs {realized.shape[0]} realized windows")
    inside: List[np.ndarray] = [band.contains(row) for band, row in zip(bands, realized)]
    return float(np.mean(np.concatenate(inside)))
