"""
FLOW-001: Scale / translate networks

ConvNet  - three-layer 1-D CNN used for s(x_pass, c) and t(x_pass, c)
DenseNet - one-hidden-layer fully-connected net used for s_c(c) and t_c(c)

Scale nets use tanh hidden activations and a tanh output (|s| <= 1);
translate nets use ReLU hidden activations and a linear output. The last layer
of every net starts at zero so each coupling block starts as the identity.
"""

import numpy as np

from ..numerics_001 import BatchNormState, Conv1d, Dense, Graph, Module, Node

ACTIVATIONS = ("tanh", "relu")


def _activate(graph: Graph, node: Node, activation: str) -> Node:
    return graph.tanh(node) if activation == "tanh" else graph.relu(node)


class ConvNet(Module):
    """
    conv -> act -> batch-norm -> conv -> act -> batch-norm -> dense readout.

    The input vector (pass-through half concatenated with the condition) is
    treated as a one-channel sequence; batch norm precedes every layer after
    the input layer.
    """

    def __init__(
        self,
        in_len: int,
        out_dim: int,
        rng: np.random.Generator,
        hidden_channels: int = 16,
        activation: str = "tanh",
        bounded: bool = True,
        kernel_width: int = 3,
    ):
        super().__init__()
        if activation not in ACTIVATIONS:
            raise ValueError(f"Invalid activation '{activation}'. Must be one of: {ACTIVATIONS}")
        self.in_len = in_len
        self.out_dim = out_dim
        self.hidden_channels = hidden_channels
        self.activation = activation
        self.bounded = bounded

        self.conv1 = self.add_module("conv1", Conv1d(1, hidden_channels, rng, width=kernel_width))
        self.norm1 = self.add_module("norm1", BatchNormState(hidden_channels))
        self.conv2 = self.add_module(
            "conv2", Conv1d(hidden_channels, hidden_channels, rng, width=kernel_width)
        )
        self.norm2 = self.add_module("norm2", BatchNormState(hidden_channels))
        self.readout = self.add_module(
            "readout", Dense(hidden_channels * in_len, out_dim, rng, zero=True)
        )

    def __call__(self, graph: Graph, inputs: Node) -> Node:
        n = inputs.shape[0]
        h = graph.reshape(inputs, (n, 1, self.in_len))
        h = self.norm1(graph, _activate(graph, self.conv1(graph, h), self.activation))
        h = self.norm2(graph, _activate(graph, self.conv2(graph, h), self.activation))
        h = graph.reshape(h, (n, self.hidden_channels * self.in_len))
        out = self.readout(graph, h)
        return graph.tanh(out) if self.bounded else out


class DenseNet(Module):
    """Fully connected net with one hidden layer (condition-only nets)"""

    def __init__(
        self,
        in_dim: int,
        out_dim: int,
        rng: np.random.Generator,
        hidden: int = 64,
        activation: str = "tanh",
        bounded: bool = True,
    ):
        super().__init__()
        if activation not in ACTIVATIONS:
            raise ValueError(f"Invalid activation '{activation}'. Must be one of: {ACTIVATIONS}")
        self.activation = activation
        self.bounded = bounded
        self.hidden = self.add_module("hidden", Dense(in_dim, hidden, rng))
        self.output = self.add_module("output", Dense(hidden, out_dim, rng, zero=True))

    def __call__(self, graph: Graph, inputs: Node) -> Node:
        h = _activate(graph, self.hidden(graph, inputs), self.activation)
        out = self.output(graph, h)
        return graph.tanh(out) if self.bounded else out
