"""Utility modules for errors and run configuration.

``config`` imports the module packages, so it is not re-exported here;
import it as ``src.utils.config``.
"""

from .errors import (
    ConfigError,
    CsvFormatError,
    DimensionMismatchError,
    FlowcastError,
    GraphError,
    exit_code_for,
    InputError,
    NonFiniteError,
    NumericalError,
    TrainingDivergenceError,
)

__all__ = [
    "FlowcastError",
    "InputError",
    "ConfigError",
    "DimensionMismatchError",
    "CsvFormatError",
    "NumericalError",
    "NonFiniteError",
    "TrainingDivergenceError",
    "GraphError",
    "exit_code_for",
]
