"""
TRAINING-001: Training configuration
"""

from dataclasses import asdict, dataclass
from typing import Dict

from ...utils.errors import ConfigError


@dataclass
class TrainConfig:
    """Optimizer, schedule and Wasserstein-regularization settings"""

    learning_rate: float = 1e-3
    batch_size: int = 64
    epochs: int = 100
    beta: float = 0.0  # weight of the Wasserstein term; 0 is plain maximum likelihood
    clamp: float = 0.01  # critic weight clamp bound
    critic_steps: int = 5  # critic updates per generator step
    critic_hidden: int = 128
    critic_learning_rate: float = 1e-3
    seed: int = 0
    validation_fraction: float = 0.1
    patience: int = 10  # epochs without validation improvement before stopping

    def validate(self) -> "TrainConfig":
        """
        Check every field; returns self so calls can be chained.

        Raises:
            ConfigError: naming the first invalid field
        """
        for name in ("learning_rate", "critic_learning_rate", "clamp"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("batch_size", "epochs", "critic_steps", "critic_hidden", "patience"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.batch_size < 2:
            raise ConfigError(f"batch_size must be >= 2 for batch norm, got {self.batch_size}")
        if self.beta < 0:
            raise ConfigError(f"beta must be >= 0, got {self.beta}")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError(
                f"validation_fraction must lie in (0, 1), got {self.validation_fraction}"
            )
        return self

    def to_dict(self) -> Dict:
        return asdict(self)
