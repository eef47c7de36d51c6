"""
DATA-001: Load series and household aggregation
"""

from dataclasses import dataclass
from typing import List

import numpy as np
import pandas as pd

from ...utils.errors import InputError

ONE_HOUR = pd.Timedelta(hours=1)


@dataclass
class LoadSeries:
    """Hourly power (kW) for one household or aggregate"""

    household_id: str
    timestamps: pd.DatetimeIndex
    power: np.ndarray

    def __post_init__(self):
        self.timestamps = pd.DatetimeIndex(self.timestamps)
        self.power = np.asarray(self.power, dtype=np.float64)
        if len(self.timestamps) != self.power.shape[0]:
            raise InputError(
                f"household {self.household_id}: {len(self.timestamps)} timestamps "
                f"vs {self.power.shape[0]} values"
            )
        if len(self.timestamps) > 1:
            steps = np.diff(self.timestamps.asi8)
            if not np.all(steps == ONE_HOUR.value):
                raise InputError(f"household {self.household_id}: timestamps are not hourly-spaced")
        if np.any(self.power < 0) or not np.all(np.isfinite(self.power)):
            raise InputError(f"household {self.household_id}: power must be finite and >= 0")

    def __len__(self) -> int:
        return self.power.shape[0]

    @property
    def length(self) -> int:
        return len(self)

    def coefficient_of_variation(self) -> float:
        mean = float(np.mean(self.power))
        return float(np.std(self.power) / mean) if mean > 0 else float("inf")


def aggregate(series: List[LoadSeries], n: int, seed: int = 0) -> LoadSeries:
    """
    Pointwise sum of n households chosen with a seeded generator.

    Args:
        series: available households (identical hourly ranges)
        n: number of households to aggregate (1 <= n <= len(series))
        seed: selection seed

    Returns:
        LoadSeries of the summed power

    Raises:
        InputError: n out of range or mismatched time ranges
    """
    if not 1 <= n <= len(series):
        raise InputError(f"cannot aggregate {n} households from {len(series)} available")

    rng = np.random.default_rng(seed)
    chosen = sorted(int(i) for i in rng.choice(len(series), size=n, replace=False))
    reference = series[chosen[0]].timestamps
    for index in chosen[1:]:
        if not series[index].timestamps.equals(reference):
            raise InputError(
                f"household {series[index].household_id} does not share the time range of "
                f"household {series[chosen[0]].household_id}"
            )

    total = np.sum([series[i].power for i in chosen], axis=0)
    household_id = series[chosen[0]].household_id if n == 1 else f"aggregate-{n}"
    return LoadSeries(household_id, reference.copy(), total)
