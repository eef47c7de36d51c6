"""
DATA-001: Load Data Pipeline

Hourly household load from CSV or a synthetic generator, shaped for
conditional forecasting:
- CSV ingestion with gap / duplicate / sign checks, and export
- Seeded household aggregation (1 / 10 / 100 households)
- Day-aligned overlapping (history, future) windows
- Chronological split with train-only per-position standardization

Version: 1.0.0
Status: Production Ready
Dependencies: none
"""

from .series import LoadSeries, aggregate
from .loader import parse_csv, write_csv
from .windows import Standardizer, WindowDataset, make_windows, split_and_standardize
from .synth import SynthSpec, synth_generate

__version__ = "1.0.0"
__all__ = [
    "LoadSeries",
    "aggregate",
    "parse_csv",
    "write_csv",
    "Standardizer",
    "WindowDataset",
    "make_windows",
    "split_and_standardize",
    "SynthSpec",
    "synth_generate",
]
