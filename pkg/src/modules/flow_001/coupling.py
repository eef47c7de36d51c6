"""
FLOW-001: Conditional affine coupling blocks

Vanilla block (pass half p, transformed half q, condition c):
    y_p = x_p
    y_q = x_q * exp(s(x_p, c)) + t(x_p, c)
Reinforced block additionally moves the pass half with condition-only nets:
    y_p = x_p * exp(s_c(c)) + t_c(c)
The Jacobian stays block-triangular, so log|det| = sum s_c(c) + sum s(x_p, c).
"""

from enum import Enum
from typing import List, Tuple

import numpy as np

from ..numerics_001 import Graph, Module, Node
from .networks import ConvNet, DenseNet
from ...utils.errors import ConfigError, DimensionMismatchError, NonFiniteError


class CouplingVariant(str, Enum):
    """Coupling layer variant; the value is the stable serialization tag"""

    VANILLA = "vanilla"
    REINFORCED = "reinforced"

    @classmethod
    def parse(cls, tag) -> "CouplingVariant":
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).lower())
        except ValueError:
            valid = [v.value for v in cls]
            raise ConfigError(f"Invalid variant '{tag}'. Must be one of: {valid}") from None


def as_batch(x, c, dim: int, cond_dim: int) -> Tuple[np.ndarray, np.ndarray, bool]:
    """
    Promote single vectors to a batch of one and check dimensions.

    Returns:
        (x (N, dim), c (N, cond_dim), single) where single is True for 1-D input
    """
    x = np.asarray(x, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if c.ndim == 1:
        c = np.broadcast_to(c, (x.shape[0], c.shape[0]))
    if x.ndim != 2 or x.shape[1] != dim:
        raise DimensionMismatchError(f"expected data of width {dim}, got shape {x.shape}")
    if c.ndim != 2 or c.shape[1] != cond_dim:
        raise DimensionMismatchError(f"expected condition of width {cond_dim}, got shape {c.shape}")
    if c.shape[0] != x.shape[0]:
        raise DimensionMismatchError(
            f"batch size mismatch: {x.shape[0]} data rows vs {c.shape[0]} conditions"
        )
    return x, np.ascontiguousarray(c), single


def _check_scale(node: Node, label: str):
    if not np.all(np.isfinite(node.value)):
        bad = int(np.argwhere(~np.isfinite(node.value))[0][0])
        raise NonFiniteError(f"non-finite {label} output at batch row {bad}", index=bad)


class CouplingBlock(Module):
    """
    One conditional affine coupling layer.

    Args:
        variant: CouplingVariant
        dim: data dimension D (>= 2)
        cond_dim: condition dimension D'
        orientation: 0 keeps x[:d] as the pass half, 1 keeps x[d:]
        rng: generator for weight initialization
        hidden_channels: channels of the convolutional s / t nets
        cond_hidden: hidden width of the condition-only nets
    """

    def __init__(
        self,
        variant: CouplingVariant,
        dim: int,
        cond_dim: int,
        orientation: int,
        rng: np.random.Generator,
        hidden_channels: int = 16,
        cond_hidden: int = 64,
        kernel_width: int = 3,
    ):
        super().__init__()
        self.variant = CouplingVariant.parse(variant)
        self.dim = dim
        self.cond_dim = cond_dim
        self.split = dim // 2
        if not 1 <= self.split < dim:
            raise ConfigError(f"coupling needs data dimension >= 2, got {dim}")
        self.orientation = orientation % 2

        first = list(range(self.split))
        second = list(range(self.split, dim))
        self.pass_idx: List[int] = first if self.orientation == 0 else second
        self.trans_idx: List[int] = second if self.orientation == 0 else first
        self._restore = np.argsort(self.pass_idx + self.trans_idx)

        in_len = len(self.pass_idx) + cond_dim
        n_trans = len(self.trans_idx)
        n_pass = len(self.pass_idx)
        self.s = self.add_module(
            "s", ConvNet(in_len, n_trans, rng, hidden_channels, "tanh", True, kernel_width)
        )
        if self.variant is CouplingVariant.REINFORCED:
            self.s_c = self.add_module("s_c", DenseNet(cond_dim, n_pass, rng, cond_hidden, "tanh", True))
        self.t = self.add_module(
            "t", ConvNet(in_len, n_trans, rng, hidden_channels, "relu", False, kernel_width)
        )
        if self.variant is CouplingVariant.REINFORCED:
            self.t_c = self.add_module("t_c", DenseNet(cond_dim, n_pass, rng, cond_hidden, "relu", False))

    @property
    def reinforced(self) -> bool:
        return self.variant is CouplingVariant.REINFORCED

    def _merge(self, graph: Graph, first: Node, second: Node) -> Node:
        return graph.take(graph.concat([first, second]), self._restore)

    def forward_graph(self, graph: Graph, x: Node, c: Node) -> Tuple[Node, Node]:
        """Record y = f(x; c) and per-row log|det| (shape (N,))."""
        x_pass = graph.take(x, self.pass_idx)
        x_trans = graph.take(x, self.trans_idx)
        h = graph.concat([x_pass, c])
        s = self.s(graph, h)
        _check_scale(s, "scale net")
        y_trans = graph.add(graph.mul(x_trans, graph.exp(s)), self.t(graph, h))
        logdet = graph.sum(s, axis=1)

        if self.reinforced:
            s_c = self.s_c(graph, c)
            _check_scale(s_c, "condition scale net")
            y_pass = graph.add(graph.mul(x_pass, graph.exp(s_c)), self.t_c(graph, c))
            logdet = graph.add(graph.sum(s_c, axis=1), logdet)
        else:
            y_pass = x_pass
        return self._merge(graph, y_pass, y_trans), logdet

    def inverse_graph(self, graph: Graph, y: Node, c: Node) -> Node:
        """Record x = f^-1(y; c)."""
        y_pass = graph.take(y, self.pass_idx)
        y_trans = graph.take(y, self.trans_idx)
        if self.reinforced:
            s_c = self.s_c(graph, c)
            _check_scale(s_c, "condition scale net")
            x_pass = graph.mul(graph.sub(y_pass, self.t_c(graph, c)), graph.exp(graph.neg(s_c)))
        else:
            x_pass = y_pass
        h = graph.concat([x_pass, c])
        s = self.s(graph, h)
        _check_scale(s, "scale net")
        x_trans = graph.mul(graph.sub(y_trans, self.t(graph, h)), graph.exp(graph.neg(s)))
        return self._merge(graph, x_pass, x_trans)


def coupling_forward(x, c, block: CouplingBlock):
    """
    Apply one coupling block in its current batch-norm mode.

    Args:
        x: Array[D] or Array[N, D]
        c: Array[D'] or Array[N, D']
        block: CouplingBlock

    Returns:
        (y, logdet): y shaped like x; logdet a float for 1-D x, else Array[N]
    """
    xb, cb, single = as_batch(x, c, block.dim, block.cond_dim)
    graph = Graph(grad_enabled=False)
    y, logdet = block.forward_graph(graph, graph.constant(xb), graph.constant(cb))
    if single:
        return y.value[0], float(logdet.value[0])
    return y.value, logdet.value


def coupling_inverse(y, c, block: CouplingBlock) -> np.ndarray:
    """Invert coupling_forward for the same block and condition."""
    yb, cb, single = as_batch(y, c, block.dim, block.cond_dim)
    graph = Graph(grad_enabled=False)
    x = block.inverse_graph(graph, graph.constant(yb), graph.constant(cb))
    return x.value[0] if single else x.value
