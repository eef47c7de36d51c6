"""
FLOW-001: Conditional normalizing flow

FlowModel chains K coupling blocks with alternating orientation on top of a
standard-normal prior:

    log p(x | c) = log N(f(x; c); 0, I) + sum_k log|det J_k|
    sample:  x = f^-1(z; c),  z ~ N(0, I)
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..numerics_001 import Graph, Module, Node
from .coupling import CouplingBlock, CouplingVariant, as_batch
from ...utils.errors import ConfigError, NonFiniteError

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class FlowTrace:
    """Per-block log-det contributions and the final latent"""

    logdets: List[np.ndarray] = field(default_factory=list)
    z: np.ndarray = None

    @property
    def total_logdet(self) -> np.ndarray:
        return np.sum(self.logdets, axis=0)


class FlowModel(Module):
    """
    K-block conditional normalizing flow.

    Args:
        dim: data dimension D (forecast horizon k)
        cond_dim: condition dimension D' (history length h)
        n_blocks: number of coupling blocks K (default 9)
        variant: "vanilla" or "reinforced"
        hidden_channels: channels of the convolutional s / t nets
        cond_hidden: hidden width of the condition-only nets
        kernel_width: 1-D convolution kernel width
        seed: weight-initialization seed
    """

    def __init__(
        self,
        dim: int,
        cond_dim: int,
        n_blocks: int = 9,
        variant="reinforced",
        hidden_channels: int = 16,
        cond_hidden: int = 64,
        kernel_width: int = 3,
        seed: int = 0,
    ):
        super().__init__()
        if n_blocks < 1:
            raise ConfigError(f"flow needs at least one block, got {n_blocks}")
        if cond_dim < 1:
            raise ConfigError(f"condition dimension must be positive, got {cond_dim}")
        self.dim = dim
        self.cond_dim = cond_dim
        self.n_blocks = n_blocks
        self.variant = CouplingVariant.parse(variant)
        self.hidden_channels = hidden_channels
        self.cond_hidden = cond_hidden
        self.kernel_width = kernel_width
        self.seed = seed
        self.trained = False

        rng = np.random.default_rng(seed)
        self.blocks: List[CouplingBlock] = [
            self.add_module(
                f"block{i}",
                CouplingBlock(
                    self.variant, dim, cond_dim, i % 2, rng,
                    hidden_channels, cond_hidden, kernel_width,
                ),
            )
            for i in range(n_blocks)
        ]

    def config(self) -> Dict:
        """Constructor arguments (checkpoint manifest section)."""
        return {
            "dim": self.dim,
            "cond_dim": self.cond_dim,
            "n_blocks": self.n_blocks,
            "variant": self.variant.value,
            "hidden_channels": self.hidden_channels,
            "cond_hidden": self.cond_hidden,
            "kernel_width": self.kernel_width,
            "seed": self.seed,
        }

    # ------------------------------------------------------------------
    # graph-level passes
    # ------------------------------------------------------------------

    def forward_graph(self, graph: Graph, x: Node, c: Node) -> Tuple[Node, Node, List[Node]]:
        """Record z = f(x; c); returns (z, total logdet (N,), per-block logdets)."""
        contributions = []
        h = x
        for block in self.blocks:
            h, logdet = block.forward_graph(graph, h, c)
            contributions.append(logdet)
        total = contributions[0]
        for logdet in contributions[1:]:
            total = graph.add(total, logdet)
        return h, total, contributions

    def inverse_graph(self, graph: Graph, z: Node, c: Node) -> Node:
        h = z
        for block in reversed(self.blocks):
            h = block.inverse_graph(graph, h, c)
        return h

    def log_prob_graph(self, graph: Graph, x: Node, c: Node) -> Node:
        """Per-row conditional log-density, shape (N,)."""
        z, logdet, _ = self.forward_graph(graph, x, c)
        quad = graph.scale(graph.sum(graph.mul(z, z), axis=1), -0.5)
        log_pz = graph.add(quad, graph.constant(-0.5 * self.dim * LOG_2PI))
        return graph.add(log_pz, logdet)


def log_prob(x, c, model: FlowModel):
    """
    Exact conditional log-density in the model's current batch-norm mode.

    Args:
        x: Array[D] or Array[N, D]
        c: Array[D'] or Array[N, D']
        model: FlowModel

    Returns:
        (log p, FlowTrace): float for 1-D x, else Array[N]

    Raises:
        NonFiniteError: naming the first row with a non-finite log-density
    """
    xb, cb, single = as_batch(x, c, model.dim, model.cond_dim)
    graph = Graph(grad_enabled=False)
    z, logdet, contributions = model.forward_graph(graph, graph.constant(xb), graph.constant(cb))
    quad = np.sum(z.value * z.value, axis=1)
    values = -0.5 * quad - 0.5 * model.dim * LOG_2PI + logdet.value
    if not np.all(np.isfinite(values)):
        bad = int(np.argwhere(~np.isfinite(values))[0][0])
        raise NonFiniteError(f"non-finite log-density at row {bad}", index=bad)
    trace = FlowTrace(logdets=[node.value for node in contributions], z=z.value)
    if single:
        trace = FlowTrace(logdets=[v[0] for v in trace.logdets], z=trace.z[0])
        return float(values[0]), trace
    return values, trace


def sample(model: FlowModel, c, z) -> np.ndarray:
    """
    Push latent draws through the inverse flow, batch norm frozen.

    Args:
        model: FlowModel
        c: Array[D'] (shared) or Array[N, D']
        z: Array[D] or Array[N, D], drawn from N(0, I) by the caller

    Returns:
        x = f^-1(z; c), shaped like z
    """
    zb, cb, single = as_batch(z, c, model.dim, model.cond_dim)
    with model.inference():
        graph = Graph(grad_enabled=False)
        x = model.inverse_graph(graph, graph.constant(zb), graph.constant(cb)).value
    return x[0] if single else x
