"""
DATA-001: Day-aligned (history, future) windows

Window i covers hours [s + i*k, s + i*k + h) as history and the following k
hours as future, where s is the first midnight of the series. With h = k the
future of window i is the history of window i + 1.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from .series import ONE_HOUR, LoadSeries
from ...utils.errors import InputError

SPLITS = ("all", "train", "validation", "test")
STD_FLOOR = 1e-12


@dataclass
class Standardizer:
    """Per-position affine standardization for history and future vectors"""

    past_mean: np.ndarray
    past_std: np.ndarray
    future_mean: np.ndarray
    future_std: np.ndarray

    @classmethod
    def fit(cls, past: np.ndarray, future: np.ndarray) -> "Standardizer":
        def stats(block):
            mean = block.mean(axis=0)
            std = block.std(axis=0)
            return mean, np.where(std < STD_FLOOR, 1.0, std)

        past_mean, past_std = stats(np.asarray(past, dtype=np.float64))
        future_mean, future_std = stats(np.asarray(future, dtype=np.float64))
        return cls(past_mean, past_std, future_mean, future_std)

    def transform_past(self, past):
        return (np.asarray(past, dtype=np.float64) - self.past_mean) / self.past_std

    def transform_future(self, future):
        return (np.asarray(future, dtype=np.float64) - self.future_mean) / self.future_std

    def inverse_past(self, past):
        return np.asarray(past, dtype=np.float64) * self.past_std + self.past_mean

    def inverse_future(self, future):
        return np.asarray(future, dtype=np.float64) * self.future_std + self.future_mean

    def to_dict(self) -> Dict[str, list]:
        return {
            "past_mean": self.past_mean.tolist(),
            "past_std": self.past_std.tolist(),
            "future_mean": self.future_mean.tolist(),
            "future_std": self.future_std.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "Standardizer":
        try:
            return cls(*(np.asarray(data[key], dtype=np.float64) for key in
                         ("past_mean", "past_std", "future_mean", "future_std")))
        except KeyError as e:
            raise InputError(f"standardization stats missing field {e}") from None


@dataclass
class WindowDataset:
    """
    N (history, future) pairs cut from one LoadSeries.

    past / future hold standardized values once a Standardizer is attached
    (standardized=True); raw kW otherwise.
    """

    past: np.ndarray
    future: np.ndarray
    h: int
    k: int
    forecast_start: pd.DatetimeIndex
    household_id: str = ""
    split: str = "all"
    standardizer: Optional[Standardizer] = None
    standardized: bool = False
    window_ids: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.split not in SPLITS:
            raise InputError(f"Invalid split '{self.split}'. Must be one of: {list(SPLITS)}")
        self.forecast_start = pd.DatetimeIndex(self.forecast_start)
        if self.window_ids is None:
            self.window_ids = np.arange(self.past.shape[0])

    def __len__(self) -> int:
        return self.past.shape[0]

    def subset(self, mask, split: str) -> "WindowDataset":
        return WindowDataset(
            past=self.past[mask],
            future=self.future[mask],
            h=self.h,
            k=self.k,
            forecast_start=self.forecast_start[mask],
            household_id=self.household_id,
            split=split,
            standardizer=self.standardizer,
            standardized=self.standardized,
            window_ids=self.window_ids[mask],
        )

    def standardize(self, standardizer: Standardizer) -> "WindowDataset":
        if self.standardized:
            raise InputError("dataset is already standardized")
        return WindowDataset(
            past=standardizer.transform_past(self.past),
            future=standardizer.transform_future(self.future),
            h=self.h,
            k=self.k,
            forecast_start=self.forecast_start,
            household_id=self.household_id,
            split=self.split,
            standardizer=standardizer,
            standardized=True,
            window_ids=self.window_ids,
        )

    def raw_past(self) -> np.ndarray:
        return self.standardizer.inverse_past(self.past) if self.standardized else self.past

    def raw_future(self) -> np.ndarray:
        return self.standardizer.inverse_future(self.future) if self.standardized else self.future

    def timestamps(self, index: int) -> pd.DatetimeIndex:
        """Hourly timestamps of window `index`'s future."""
        return pd.date_range(self.forecast_start[index], periods=self.k, freq=ONE_HOUR)


def make_windows(series: LoadSeries, h: int = 24, k: int = 24) -> WindowDataset:
    """
    Cut day-aligned windows advancing by k hours.

    Args:
        series: LoadSeries (hourly)
        h: history length
        k: forecast horizon

    Returns:
        WindowDataset (raw kW, split "all")

    Raises:
        InputError: non-positive h/k, no midnight, or series shorter than h + k
    """
    if h < 1 or k < 1:
        raise InputError(f"window lengths must be positive, got h={h}, k={k}")
    midnight = np.flatnonzero(series.timestamps.hour == 0)
    if midnight.size == 0:
        raise InputError(f"household {series.household_id}: no midnight timestamp to align windows")
    start = int(midnight[0])
    usable = len(series) - start
    if usable < h + k:
        raise InputError(
            f"household {series.household_id}: series of {usable} aligned hours is shorter "
            f"than h + k = {h + k}"
        )

    n = (usable - h - k) // k + 1
    offsets = start + k * np.arange(n)
    past_idx = offsets[:, None] + np.arange(h)[None, :]
    future_idx = offsets[:, None] + h + np.arange(k)[None, :]
    return WindowDataset(
        past=series.power[past_idx],
        future=series.power[future_idx],
        h=h,
        k=k,
        forecast_start=series.timestamps[offsets + h],
        household_id=series.household_id,
    )


def split_and_standardize(
    dataset: WindowDataset,
    train_end_date,
    test_start_date,
    validation_fraction: float = 0.1,
) -> Tuple[WindowDataset, WindowDataset, WindowDataset]:
    """
    Chronological train / validation / test split with train-only standardization.

    Training pool: windows whose future ends before train_end_date. The last
    validation_fraction of the pool (in time) becomes validation. Test: windows
    whose future starts at or after test_start_date.

    Returns:
        (train, validation, test), all standardized with the train statistics

    Raises:
        InputError: unordered dates, bad fraction, or any empty split
    """
    if dataset.standardized:
        raise InputError("split_and_standardize expects a raw (unstandardized) dataset")
    train_end = pd.Timestamp(train_end_date)
    test_start = pd.Timestamp(test_start_date)
    if test_start < train_end:
        raise InputError(f"test start {test_start} precedes train end {train_end}")
    if not 0.0 < validation_fraction < 1.0:
        raise InputError(f"validation fraction must lie in (0, 1), got {validation_fraction}")

    starts = dataset.forecast_start
    future_end = starts + (dataset.k - 1) * ONE_HOUR
    pool = np.flatnonzero(future_end < train_end)
    test_mask = np.asarray(starts >= test_start)

    n_val = max(1, int(round(len(pool) * validation_fraction)))
    train_idx, val_idx = pool[: len(pool) - n_val], pool[len(pool) - n_val :]
    for name, size in (("train", len(train_idx)), ("validation", len(val_idx)),
                       ("test", int(test_mask.sum()))):
        if size == 0:
            raise InputError(
                f"empty {name} split (train end {train_end.date()}, test start {test_start.date()})"
            )

    train_raw = dataset.subset(train_idx, "train")
    standardizer = Standardizer.fit(train_raw.past, train_raw.future)
    return (
        train_raw.standardize(standardizer),
        dataset.subset(val_idx, "validation").standardize(standardizer),
        dataset.subset(test_mask, "test").standardize(standardizer),
    )
