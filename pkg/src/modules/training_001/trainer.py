"""
TRAINING-001: Flow trainer

FlowTrainer fits a FlowModel on a WindowDataset (future given history) by
mini-batch Adam on

    loss = nll + beta * W_hat(data, model)

beta = 0 is conditional maximum likelihood. For beta > 0 a clamped critic is
updated critic_steps times before every generator step, and model samples
for the Wasserstein term are drawn pathwise through the inverse flow so the
generator receives gradients through them. Early stopping keeps the weights
with the best validation nll.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .config import TrainConfig
from .critic import CriticNet, critic_update, dual_estimate_graph
from .objectives import nll, nll_graph
from ..data_001 import WindowDataset
from ..flow_001 import FlowModel, sample
from ..numerics_001 import Adam, Graph
from ...utils.errors import InputError, NonFiniteError, TrainingDivergenceError

# Divergence threshold on the per-epoch training nll (nats)
DIVERGENCE_LIMIT = 1e8


@dataclass
class EpochRecord:
    """One row of the loss history (epoch 0 is the untrained model)"""

    epoch: int
    train_nll: float
    val_nll: float
    w_estimate: float = math.nan


@dataclass
class TrainingResult:
    """Outcome of a training run"""

    model: FlowModel
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_nll: float = math.inf
    stopped_early: bool = False
    beta: float = 0.0

    @property
    def initial_val_nll(self) -> float:
        return self.history[0].val_nll

    @property
    def final_val_nll(self) -> float:
        return self.best_val_nll

    def loss_rows(self) -> List[Tuple[int, float, float, float]]:
        return [(r.epoch, r.train_nll, r.val_nll, r.w_estimate) for r in self.history]


def _holdout(dataset: WindowDataset, fraction: float) -> Tuple[WindowDataset, WindowDataset]:
    """Chronological split of the trailing fraction of a dataset."""
    n = len(dataset)
    n_val = max(1, int(round(n * fraction)))
    if n - n_val < 2:
        raise InputError(f"{n} windows are too few to hold out a validation split")
    return dataset.subset(np.arange(n - n_val), dataset.split), dataset.subset(
        np.arange(n - n_val, n), "validation"
    )


class FlowTrainer:
    """
    Trains a FlowModel with maximum likelihood or the Wasserstein-regularized objective.

    Args:
        config: TrainConfig
        callback: Optional logging function
    """

    def __init__(self, config: Optional[TrainConfig] = None, callback=None):
        self.config = (config or TrainConfig()).validate()
        self.callback = callback or (lambda x: None)

    def _log(self, message: str):
        self.callback(message)

    # ------------------------------------------------------------------
    # public entry points
    # ------------------------------------------------------------------

    def train_mle(
        self,
        dataset: WindowDataset,
        model: Optional[FlowModel] = None,
        validation: Optional[WindowDataset] = None,
    ) -> TrainingResult:
        """Conditional maximum likelihood (beta forced to 0)."""
        return self._fit(dataset, model, validation, beta=0.0)

    def train_wflow(
        self,
        dataset: WindowDataset,
        model: Optional[FlowModel] = None,
        validation: Optional[WindowDataset] = None,
    ) -> TrainingResult:
        """Wasserstein-regularized training with beta = config.beta."""
        return self._fit(dataset, model, validation, beta=self.config.beta)

    # ------------------------------------------------------------------
    # loop
    # ------------------------------------------------------------------

    def _fit(
        self,
        dataset: WindowDataset,
        model: Optional[FlowModel],
        validation: Optional[WindowDataset],
        beta: float,
    ) -> TrainingResult:
        cfg = self.config
        if validation is None:
            dataset, validation = _holdout(dataset, cfg.validation_fraction)
        if len(dataset) < 2:
            raise InputError(f"training needs at least 2 windows, got {len(dataset)}")
        if len(validation) == 0:
            raise InputError("empty validation split")
        if model is None:
            model = FlowModel(dim=dataset.k, cond_dim=dataset.h, seed=cfg.seed)
        if (model.dim, model.cond_dim) != (dataset.k, dataset.h):
            raise InputError(
                f"model expects (k={model.dim}, h={model.cond_dim}), "
                f"dataset has (k={dataset.k}, h={dataset.h})"
            )

        x_train, c_train = dataset.future, dataset.past
        x_val, c_val = validation.future, validation.past
        batch_rng = np.random.default_rng(cfg.seed)

        optimizer = Adam(model.parameters(), learning_rate=cfg.learning_rate)
        critic = critic_opt = latent_rng = None
        if beta > 0:
            latent_rng = np.random.default_rng([cfg.seed, 1])
            critic = CriticNet(model.dim, model.cond_dim, latent_rng, cfg.critic_hidden, cfg.clamp)
            critic_opt = Adam(critic.parameters(), learning_rate=cfg.critic_learning_rate)

        model.zero_grad()
        initial = EpochRecord(0, nll(x_train, c_train, model), nll(x_val, c_val, model))
        result = TrainingResult(model=model, history=[initial], best_val_nll=initial.val_nll, beta=beta)
        best_state = self._snapshot(model)
        stale = 0
        mode = "W-flow" if beta > 0 else "MLE"
        self._log(
            f"Training {model.variant.value} flow ({mode}, beta={beta}) on {len(dataset)} windows, "
            f"initial val nll {initial.val_nll:.4f}"
        )

        for epoch in range(1, cfg.epochs + 1):
            model.train()
            losses, weights, estimates = [], [], []
            for batch in self._batches(len(dataset), batch_rng):
                xb, cb = x_train[batch], c_train[batch]
                try:
                    loss, estimate = self._step(model, optimizer, xb, cb, beta, critic, critic_opt, latent_rng)
                except NonFiniteError as e:
                    raise TrainingDivergenceError(f"epoch {epoch}: {e}") from e
                losses.append(loss)
                weights.append(len(batch))
                if estimate is not None:
                    estimates.append(estimate)

            train_nll = float(np.average(losses, weights=weights))
            if not np.isfinite(train_nll) or abs(train_nll) > DIVERGENCE_LIMIT:
                raise TrainingDivergenceError(f"epoch {epoch}: training nll diverged ({train_nll})")
            try:
                val_nll = nll(x_val, c_val, model)
            except NonFiniteError as e:
                raise TrainingDivergenceError(f"epoch {epoch}: validation {e}") from e
            record = EpochRecord(
                epoch, train_nll, val_nll, float(np.mean(estimates)) if estimates else math.nan
            )
            result.history.append(record)

            if val_nll < result.best_val_nll:
                result.best_val_nll = val_nll
                result.best_epoch = epoch
                best_state = self._snapshot(model)
                stale = 0
            else:
                stale += 1
            self._log(
                f"  epoch {epoch}: train nll {train_nll:.4f}, val nll {val_nll:.4f}"
                + (f", W {record.w_estimate:.5f}" if estimates else "")
            )
            if stale >= cfg.patience:
                result.stopped_early = True
                self._log(f"⚠ Early stop at epoch {epoch} (no improvement for {cfg.patience} epochs)")
                break

        model.load_state_arrays(best_state)
        model.eval()
        model.trained = True
        self._log(f"✓ Best val nll {result.best_val_nll:.4f} at epoch {result.best_epoch}")
        return result

    def _step(self, model, optimizer, xb, cb, beta, critic, critic_opt, latent_rng):
        """One generator step (preceded by critic steps when beta > 0)."""
        estimate = None
        if beta > 0:
            for _ in range(self.config.critic_steps):
                z = latent_rng.standard_normal(xb.shape)
                estimate = critic_update(critic, critic_opt, xb, sample(model, cb, z), cb, cb)

        graph = Graph()
        x, c = graph.constant(xb), graph.constant(cb)
        loss = nll_graph(graph, model, x, c)
        value = float(loss.value)
        if beta > 0:
            z = graph.constant(latent_rng.standard_normal(xb.shape))
            with model.inference():
                x_model = model.inverse_graph(graph, z, c)
            w_hat = dual_estimate_graph(graph, critic, x, c, x_model, c)
            loss = graph.add(loss, graph.scale(w_hat, beta))

        graph.backward(loss)
        optimizer.step()
        if critic is not None:
            critic.zero_grad()
        return value, estimate

    def _batches(self, n: int, rng: np.random.Generator) -> List[np.ndarray]:
        order = rng.permutation(n)
        size = self.config.batch_size
        batches = [order[i : i + size] for i in range(0, n, size)]
        if len(batches) > 1 and len(batches[-1]) < 2:
            # batch norm needs two rows
            batches[-2] = np.concatenate([batches[-2], batches.pop()])
        return batches

    @staticmethod
    def _snapshot(model: FlowModel):
        return {name: np.array(value, copy=True) for name, value in model.state_arrays()}


def train_mle(
    dataset: WindowDataset,
    config: Optional[TrainConfig] = None,
    model: Optional[FlowModel] = None,
    validation: Optional[WindowDataset] = None,
    callback: Optional[Callable[[str], None]] = None,
) -> TrainingResult:
    """Functional form of FlowTrainer(config).train_mle(...)."""
    return FlowTrainer(config, callback).train_mle(dataset, model, validation)


def train_wflow(
    dataset: WindowDataset,
    config: Optional[TrainConfig] = None,
    model: Optional[FlowModel] = None,
    validation: Optional[WindowDataset] = None,
    callback: Optional[Callable[[str], None]] = None,
) -> TrainingResult:
    """Functional form of FlowTrainer(config).train_wflow(...)."""
    return FlowTrainer(config, callback).train_wflow(dataset, model, validation)
