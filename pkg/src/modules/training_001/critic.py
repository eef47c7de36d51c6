"""
TRAINING-001: Weight-clamped Wasserstein critic

The critic g(x, c) is a one-hidden-layer ReLU net with scalar output. Its
dual estimate

    W_hat = mean g(x_data, c) - mean g(x_model, c)

is maximized over critic weights that are clipped to [-clamp, +clamp] after
every update. The raw network output is divided by clamp^2 * hidden: with
every weight inside the clamp box the rescaled g is then at most 1-Lipschitz
per input coordinate, so W_hat is on the scale of W1 itself rather than
shrunk by the clamp.
"""

from typing import Optional

import numpy as np

from ..numerics_001 import Adam, Dense, Graph, Module, Node
from ...utils.errors import InputError, TrainingDivergenceError


class CriticNet(Module):
    """
    Condition-aware scalar critic.

    Args:
        dim: data dimension
        cond_dim: condition dimension (0 for unconditional use)
        rng: generator for weight initialization
        hidden: hidden width
        clamp: weight clamp bound
    """

    def __init__(
        self,
        dim: int,
        cond_dim: int,
        rng: np.random.Generator,
        hidden: int = 128,
        clamp: float = 0.01,
    ):
        super().__init__()
        if clamp <= 0:
            raise InputError(f"critic clamp must be > 0, got {clamp}")
        self.dim = dim
        self.cond_dim = cond_dim
        self.clamp = clamp
        # clamped weights of both layers, averaged over hidden units
        self.output_scale = 1.0 / (clamp * clamp * hidden)
        self.hidden = self.add_module("hidden", Dense(dim + cond_dim, hidden, rng))
        self.output = self.add_module("output", Dense(hidden, 1, rng))
        for param in self.parameters():
            param.value = rng.uniform(-clamp, clamp, size=param.shape)

    def clamp_weights(self):
        for param in self.parameters():
            np.clip(param.value, -self.clamp, self.clamp, out=param.value)

    def max_abs_weight(self) -> float:
        return max(float(np.max(np.abs(p.value))) for p in self.parameters())

    def __call__(self, graph: Graph, x: Node, c: Optional[Node] = None) -> Node:
        inputs = graph.concat([x, c]) if self.cond_dim else x
        h = graph.relu(self.hidden(graph, inputs))
        out = graph.scale(self.output(graph, h), self.output_scale)
        return graph.reshape(out, (out.shape[0],))

    def score(self, x, c=None) -> np.ndarray:
        x, c = self._inputs(x, c)
        graph = Graph(grad_enabled=False)
        return self(graph, graph.constant(x), graph.constant(c)).value

    def _inputs(self, x, c):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None] if self.dim == 1 else x[None, :]
        if x.shape[0] == 0:
            raise InputError("critic needs a nonempty batch")
        if x.shape[1] != self.dim:
            raise InputError(f"critic expects width {self.dim}, got shape {x.shape}")
        if c is None:
            if self.cond_dim:
                raise InputError("conditional critic needs a condition batch")
            c = np.zeros((x.shape[0], 0))
        c = np.asarray(c, dtype=np.float64)
        if c.ndim == 1:
            c = np.broadcast_to(c, (x.shape[0], c.shape[0]))
        if c.shape != (x.shape[0], self.cond_dim):
            raise InputError(
                f"critic expects condition shape ({x.shape[0]}, {self.cond_dim}), got {c.shape}"
            )
        return x, np.ascontiguousarray(c)


def dual_estimate_graph(
    graph: Graph, critic: CriticNet, x_data: Node, c_data: Node, x_model: Node, c_model: Node
) -> Node:
    """Record mean g(x_data, c_data) - mean g(x_model, c_model)."""
    return graph.sub(
        graph.mean(critic(graph, x_data, c_data)), graph.mean(critic(graph, x_model, c_model))
    )


def wasserstein_dual_estimate(x_data, x_model, critic: CriticNet, c_data=None, c_model=None) -> float:
    """
    Dual (Kantorovich-Rubinstein) estimate of W1 between data and model batches.

    Args:
        x_data: Array[N, D] data samples
        x_model: Array[M, D] model samples
        critic: CriticNet with clamped weights
        c_data: conditions for x_data (None for an unconditional critic)
        c_model: conditions for x_model

    Returns:
        mean g(x_data, c_data) - mean g(x_model, c_model)

    Raises:
        InputError: empty batch or shape mismatch
    """
    return float(np.mean(critic.score(x_data, c_data)) - np.mean(critic.score(x_model, c_model)))


def critic_update(
    critic: CriticNet, optimizer: Adam, x_data, x_model, c_data=None, c_model=None
) -> float:
    """
    One gradient-ascent step on the dual estimate, followed by weight clamping.

    Returns:
        The estimate before the update

    Raises:
        TrainingDivergenceError: non-finite estimate
    """
    xd, cd = critic._inputs(x_data, c_data)
    xm, cm = critic._inputs(x_model, c_model)
    critic.zero_grad()
    graph = Graph()
    estimate = dual_estimate_graph(
        graph, critic, graph.constant(xd), graph.constant(cd), graph.constant(xm), graph.constant(cm)
    )
    value = float(estimate.value)
    if not np.isfinite(value):
        raise TrainingDivergenceError(f"critic estimate diverged ({value})")
    graph.backward(graph.neg(estimate))
    optimizer.step()
    critic.clamp_weights()
    return value
