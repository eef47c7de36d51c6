"""Run configuration for flowcast commands.

A RunConfig is read from a JSON file (``--config``), patched with CLI flag
overrides, validated as a whole and echoed as ``resolved_config.json`` into
every output directory.
"""

import json
import os
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from .errors import ConfigError
from ..modules.data_001 import SynthSpec
from ..modules.flow_001 import CouplingVariant
from ..modules.training_001 import TrainConfig, ToySpec

RESOLVED_CONFIG_NAME = "resolved_config.json"
THREADS_ENV = "FLOWCAST_THREADS"


def thread_limit() -> int:
    """
    Worker cap for forecast / eval pools.

    Reads FLOWCAST_THREADS; falls back to the CPU count.

    Raises:
        ConfigError: FLOWCAST_THREADS is not a positive integer
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got '{raw}'") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got '{raw}'")
    return value


@dataclass
class ModelSection:
    """Flow architecture"""

    variant: str = "reinforced"
    blocks: int = 9
    hidden_channels: int = 16
    cond_hidden: int = 64
    kernel_width: int = 3

    def validate(self) -> "ModelSection":
        self.variant = CouplingVariant.parse(self.variant).value
        for name in ("blocks", "hidden_channels", "cond_hidden", "kernel_width"):
            if getattr(self, name) < 1:
                raise ConfigError(f"model.{name} must be >= 1, got {getattr(self, name)}")
        return self


@dataclass
class DataSection:
    """Dataset source, aggregation level, window shape and date split"""

    csv_path: Optional[str] = None
    households: int = 10
    aggregation_seed: int = 0
    h: int = 24
    k: int = 24
    train_end: str = "2017-10-01"
    test_start: str = "2017-10-01"
    validation_fraction: float = 0.1

    def validate(self) -> "DataSection":
        if self.households < 1:
            raise ConfigError(f"data.households must be >= 1, got {self.households}")
        if self.h < 1 or self.k < 2:
            raise ConfigError(f"window shape needs h >= 1 and k >= 2, got h={self.h}, k={self.k}")
        for name in ("train_end", "test_start"):
            try:
                pd.Timestamp(getattr(self, name))
            except ValueError:
                raise ConfigError(f"data.{name} is not a date: '{getattr(self, name)}'") from None
        if pd.Timestamp(self.test_start) < pd.Timestamp(self.train_end):
            raise ConfigError(f"data.test_start {self.test_start} precedes data.train_end {self.train_end}")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError(
                f"data.validation_fraction must lie in (0, 1), got {self.validation_fraction}"
            )
        return self


@dataclass
class ForecastSection:
    """Scenario count, sampling seed and the coverage grid for evaluation"""

    scenarios: int = 100
    seed: int = 0
    coverage_grid: List[float] = field(default_factory=lambda: [round(0.1 * i, 1) for i in range(11)])

    def validate(self) -> "ForecastSection":
        if self.scenarios < 2:
            raise ConfigError(f"forecast.scenarios must be >= 2, got {self.scenarios}")
        grid = [float(c) for c in self.coverage_grid]
        if not grid or any(not 0.0 <= c <= 1.0 for c in grid):
            raise ConfigError(f"forecast.coverage_grid values must lie in [0, 1], got {grid}")
        self.coverage_grid = sorted(set(grid))
        return self


@dataclass
class RunConfig:
    """Every setting of a flowcast run"""

    out: str = "out"
    model: ModelSection = field(default_factory=ModelSection)
    data: DataSection = field(default_factory=DataSection)
    train: TrainConfig = field(default_factory=TrainConfig)
    synth: SynthSpec = field(default_factory=SynthSpec)
    forecast: ForecastSection = field(default_factory=ForecastSection)
    toy: ToySpec = field(default_factory=ToySpec)

    @classmethod
    def from_dict(cls, data: Dict) -> "RunConfig":
        """
        Build from a (possibly partial) nested dict.

        Raises:
            ConfigError: unknown section or key, or a value of the wrong type
        """
        return _build(cls, data, "config")

    @classmethod
    def load(cls, path=None) -> "RunConfig":
        """Read a JSON config file; no path gives the defaults."""
        if path is None:
            return cls()
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
        return cls.from_dict(data)

    def apply_overrides(self, command: str, **flags) -> "RunConfig":
        """
        Apply CLI flag overrides (None means "not given").

        --households sets the synthetic household count for ``synth`` and the
        aggregation level otherwise; --seed seeds generation, training and
        sampling together.
        """
        if flags.get("out") is not None:
            self.out = str(flags["out"])
        if flags.get("variant") is not None:
            self.model.variant = flags["variant"]
        if flags.get("blocks") is not None:
            self.model.blocks = int(flags["blocks"])
        if flags.get("beta") is not None:
            self.train.beta = float(flags["beta"])
        if flags.get("scenarios") is not None:
            self.forecast.scenarios = int(flags["scenarios"])
        if flags.get("households") is not None:
            if command == "synth":
                self.synth.households = int(flags["households"])
            else:
                self.data.households = int(flags["households"])
        if flags.get("seed") is not None:
            seed = int(flags["seed"])
            self.synth.seed = seed
            self.train.seed = seed
            self.forecast.seed = seed
        if flags.get("data") is not None:
            self.data.csv_path = str(flags["data"])
        return self

    def validate(self) -> "RunConfig":
        """Validate every section; returns self."""
        if not self.out:
            raise ConfigError("out directory must not be empty")
        self.model.validate()
        self.data.validate()
        self.train.validate()
        self.synth.validate()
        self.forecast.validate()
        self.toy.validate()
        return self

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["toy"]["weights"] = list(self.toy.weights)
        return data


def _coerce(value, default, name: str):
    """Coerce a JSON value to the type of the field default."""
    if default is None or value is None:
        return value
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{name} must be true or false, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return int(value)
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{name} must be a string, got {value!r}")
        return value
    if isinstance(default, (list, tuple)):
        if not isinstance(value, list):
            raise ConfigError(f"{name} must be a list, got {value!r}")
        return type(default)(value)
    return value


def _build(cls, data: Dict, name: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{name} must be a JSON object, got {data!r}")
    instance = cls()
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Invalid key '{name}.{unknown[0]}'. Must be one of: {sorted(known)}")
    for key, value in data.items():
        current = getattr(instance, key)
        if is_dataclass(current):
            setattr(instance, key, _build(type(current), value, key))
        else:
            setattr(instance, key, _coerce(value, current, f"{name}.{key}"))
    return instance
