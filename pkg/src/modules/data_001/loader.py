"""
DATA-001: Load CSV reader / writer

Schema (UTF-8, header required):

    timestamp,household_id,kw
    2013-01-01T00:00:00,26,1.234

One LoadSeries per household id, in order of first appearance. Rows of a
household must be consecutive hours; gaps, duplicates and negative power are
rejected with the offending line number.
"""

from pathlib import Path
from typing import Callable, List, Optional

import numpy as np
import pandas as pd

from .series import ONE_HOUR, LoadSeries
from ...utils.errors import CsvFormatError

COLUMNS = ["timestamp", "household_id", "kw"]
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%S"


def parse_csv(path, callback: Optional[Callable[[str], None]] = None) -> List[LoadSeries]:
    """
    Read a load CSV into per-household series.

    Args:
        path: CSV file path
        callback: Optional logging callback

    Returns:
        List of LoadSeries

    Raises:
        CsvFormatError: malformed row, gap/duplicate timestamp or negative power
        OSError: unreadable file
    """
    log = callback or (lambda x: None)
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise CsvFormatError(f"{path} is empty", line_number=1) from None
    except pd.errors.ParserError as e:
        raise CsvFormatError(f"{path}: {e}") from e

    if list(frame.columns) != COLUMNS:
        raise CsvFormatError(
            f"header must be {','.join(COLUMNS)}, got {','.join(map(str, frame.columns))}",
            line_number=1,
        )

    stamps = pd.to_datetime(frame["timestamp"], format=TIMESTAMP_FORMAT, errors="coerce")
    power = pd.to_numeric(frame["kw"], errors="coerce")
    ids = frame["household_id"].str.strip()

    malformed = stamps.isna() | power.isna() | (ids == "")
    if malformed.any():
        row = int(np.flatnonzero(malformed.to_numpy())[0])
        raise CsvFormatError(f"malformed row {frame.iloc[row].tolist()}", line_number=row + 2)
    negative = power < 0
    if negative.any():
        row = int(np.flatnonzero(negative.to_numpy())[0])
        raise CsvFormatError(f"negative power {power.iloc[row]}", line_number=row + 2)

    frame = pd.DataFrame({"timestamp": stamps, "household_id": ids, "kw": power.astype(float)})
    series = []
    for household_id, group in frame.groupby("household_id", sort=False):
        times = pd.DatetimeIndex(group["timestamp"])
        steps = np.diff(times.asi8)
        bad = np.flatnonzero(steps != ONE_HOUR.value)
        if bad.size:
            i = int(bad[0])
            line = int(group.index[i + 1]) + 2
            if steps[i] > ONE_HOUR.value:
                missing = (times[i] + ONE_HOUR).strftime(TIMESTAMP_FORMAT)
                raise CsvFormatError(
                    f"household {household_id}: missing timestamp {missing}", line_number=line
                )
            raise CsvFormatError(
                f"household {household_id}: duplicate or out-of-order timestamp "
                f"{times[i + 1].strftime(TIMESTAMP_FORMAT)}",
                line_number=line,
            )
        series.append(LoadSeries(str(household_id), times, group["kw"].to_numpy()))

    log(f"✓ Parsed {len(series)} household series from {path}")
    return series


def write_csv(series: List[LoadSeries], path) -> Path:
    """Write series in the input schema, household by household."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frames = [
        pd.DataFrame({
            "timestamp": s.timestamps.strftime(TIMESTAMP_FORMAT),
            "household_id": s.household_id,
            "kw": s.power,
        })
        for s in series
    ]
    table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=COLUMNS)
    with open(path, "w", encoding="utf-8", newline="") as f:
        table.to_csv(f, index=False, columns=COLUMNS, lineterminator="\n")
    return path
