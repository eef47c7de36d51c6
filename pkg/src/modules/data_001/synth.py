"""
DATA-001: Synthetic residential load

Each household draws its own base level, peak amplitudes and peak hours from
the SynthSpec ranges, then:

    load_t = base + (morning bump + evening bump)(hour) * weekly(hour of week)
    kw_t   = max(0, load_t * (1 + noise_scale * noise_t))

noise_t is a unit-variance AR(1) process, so peak hours are both higher and
noisier than valley hours.
"""

from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.signal import lfilter

from .series import ONE_HOUR, LoadSeries
from ...utils.errors import ConfigError

HOURS_PER_WEEK = 168


@dataclass
class SynthSpec:
    """Synthetic dataset parameters (defaults give a one-year, 105-household set)"""

    households: int = 105
    days: int = 365
    start: str = "2017-01-01"
    base_load: float = 0.4
    morning_peak: float = 0.8
    morning_hour: float = 7.5
    evening_peak: float = 1.6
    evening_hour: float = 19.0
    peak_width: float = 1.5
    weekly_modulation: float = 0.15
    noise_scale: float = 0.6
    noise_autocorr: float = 0.6
    seed: int = 7

    def validate(self) -> "SynthSpec":
        if self.households < 1:
            raise ConfigError(f"households must be >= 1, got {self.households}")
        if self.days < 2:
            raise ConfigError(f"days must be >= 2, got {self.days}")
        for name in ("base_load", "morning_peak", "evening_peak", "noise_scale"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.peak_width <= 0:
            raise ConfigError(f"peak_width must be > 0, got {self.peak_width}")
        if not 0.0 <= self.weekly_modulation < 1.0:
            raise ConfigError(f"weekly_modulation must lie in [0, 1), got {self.weekly_modulation}")
        if not 0.0 <= self.noise_autocorr < 1.0:
            raise ConfigError(f"noise_autocorr must lie in [0, 1), got {self.noise_autocorr}")
        for name in ("morning_hour", "evening_hour"):
            if not 0.0 <= getattr(self, name) < 24.0:
                raise ConfigError(f"{name} must lie in [0, 24), got {getattr(self, name)}")
        try:
            pd.Timestamp(self.start)
        except ValueError:
            raise ConfigError(f"Invalid start date '{self.start}'") from None
        return self

    def to_dict(self) -> Dict:
        return asdict(self)


def _bump(hour_of_day: np.ndarray, center: float, width: float) -> np.ndarray:
    # circular distance so a 23:00 peak spills into 00:00
    distance = np.abs(hour_of_day - center)
    distance = np.minimum(distance, 24.0 - distance)
    return np.exp(-0.5 * (distance / width) ** 2)


def synth_generate(
    spec: SynthSpec, callback: Optional[Callable[[str], None]] = None
) -> List[LoadSeries]:
    """
    Generate spec.households synthetic series, deterministic in spec.seed.

    Returns:
        List of LoadSeries sharing one hourly time index
    """
    spec.validate()
    log = callback or (lambda x: None)
    rng = np.random.default_rng(spec.seed)

    n_hours = spec.days * 24
    timestamps = pd.date_range(pd.Timestamp(spec.start), periods=n_hours, freq=ONE_HOUR)
    t = np.arange(n_hours)
    hour_of_day = (t % 24).astype(np.float64)
    hour_of_week = (t % HOURS_PER_WEEK).astype(np.float64)
    rho = spec.noise_autocorr
    innovation_scale = np.sqrt(1.0 - rho * rho)

    series = []
    for i in range(spec.households):
        base = spec.base_load * rng.uniform(0.6, 1.4)
        morning = spec.morning_peak * rng.uniform(0.5, 1.5)
        evening = spec.evening_peak * rng.uniform(0.5, 1.5)
        morning_hour = (spec.morning_hour + rng.normal(0.0, 0.75)) % 24.0
        evening_hour = (spec.evening_hour + rng.normal(0.0, 0.75)) % 24.0
        phase = rng.uniform(0.0, 2.0 * np.pi)

        weekly = 1.0 + spec.weekly_modulation * np.cos(
            2.0 * np.pi * hour_of_week / HOURS_PER_WEEK + phase
        )
        peaks = (
            morning * _bump(hour_of_day, morning_hour, spec.peak_width)
            + evening * _bump(hour_of_day, evening_hour, spec.peak_width)
        )
        level = base + peaks * weekly

        drive = innovation_scale * rng.standard_normal(n_hours)
        drive[0] /= innovation_scale
        noise = lfilter([1.0], [1.0, -rho], drive)

        power = np.maximum(level + spec.noise_scale * level * noise, 0.0)
        series.append(LoadSeries(str(i + 1), timestamps, power))

    log(f"✓ Generated {spec.households} synthetic households x {n_hours} hours (seed {spec.seed})")
    return series
