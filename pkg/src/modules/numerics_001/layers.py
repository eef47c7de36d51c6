"""
NUMERICS-001: Layers

Module containers owning Parameters and BatchNormStates, plus the dense,
1-D convolution and batch-norm layers the flow and critic networks are built from.
"""

from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .graph import Graph, Node, Parameter, as_array


class Module:
    """
    Ordered container of named Parameters and child Modules.

    Registration order is the serialization order used by checkpoints.
    """

    def __init__(self):
        self._params: Dict[str, Parameter] = {}
        self._children: Dict[str, "Module"] = {}

    def add_param(self, name: str, value) -> Parameter:
        param = Parameter(value, name=name)
        self._params[name] = param
        return param

    def add_module(self, name: str, module: "Module") -> "Module":
        self._children[name] = module
        return module

    def named_parameters(self, prefix: str = "") -> Iterator[Tuple[str, Parameter]]:
        for name, param in self._params.items():
            yield f"{prefix}{name}", param
        for name, child in self._children.items():
            yield from child.named_parameters(f"{prefix}{name}.")

    def parameters(self) -> List[Parameter]:
        return [p for _, p in self.named_parameters()]

    def named_modules(self, prefix: str = "") -> Iterator[Tuple[str, "Module"]]:
        yield prefix.rstrip("."), self
        for name, child in self._children.items():
            yield from child.named_modules(f"{prefix}{name}.")

    def batchnorms(self) -> List["BatchNormState"]:
        return [m for _, m in self.named_modules() if isinstance(m, BatchNormState)]

    def train(self):
        for bn in self.batchnorms():
            bn.training = True
        return self

    def eval(self):
        for bn in self.batchnorms():
            bn.training = False
        return self

    @contextmanager
    def inference(self):
        """Temporarily switch every batch norm to inference mode."""
        modes = [(bn, bn.training) for bn in self.batchnorms()]
        self.eval()
        try:
            yield self
        finally:
            for bn, mode in modes:
                bn.training = mode

    @property
    def is_training(self) -> bool:
        return any(bn.training for bn in self.batchnorms())

    def zero_grad(self):
        for param in self.parameters():
            param.zero_grad()

    def release(self):
        for param in self.parameters():
            param.release()

    def state_arrays(self) -> List[Tuple[str, np.ndarray]]:
        """Own parameters (then running stats for batch norms), module by module, depth first."""
        arrays = []
        for name, module in self.named_modules():
            prefix = f"{name}." if name else ""
            for pname, param in module._params.items():
                arrays.append((f"{prefix}{pname}", param.value))
            if isinstance(module, BatchNormState):
                arrays.append((f"{prefix}running_mean", module.running_mean))
                arrays.append((f"{prefix}running_var", module.running_var))
        return arrays

    def load_state_arrays(self, arrays: Dict[str, np.ndarray]):
        """Inverse of state_arrays(); every expected name must be present."""
        for name, param in self.named_parameters():
            param.value = np.array(arrays[name], dtype=np.float64).reshape(param.shape)
            param.zero_grad()
        for name, module in self.named_modules():
            if isinstance(module, BatchNormState):
                module.running_mean = np.array(arrays[f"{name}.running_mean"], dtype=np.float64)
                module.running_var = np.array(arrays[f"{name}.running_var"], dtype=np.float64)


class Dense(Module):
    """Affine map x @ W + b; zero=True gives an all-zero (identity-starting) layer"""

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator, zero: bool = False):
        super().__init__()
        if zero:
            weight = np.zeros((n_in, n_out))
        else:
            weight = rng.normal(0.0, np.sqrt(2.0 / (n_in + n_out)), size=(n_in, n_out))
        self.weight = self.add_param("weight", weight)
        self.bias = self.add_param("bias", np.zeros(n_out))

    def __call__(self, graph: Graph, x: Node) -> Node:
        return graph.affine(x, graph.param(self.weight), graph.param(self.bias))


class Conv1d(Module):
    """Length-preserving 1-D convolution (zero padding, stride 1)"""

    def __init__(
        self,
        c_in: int,
        c_out: int,
        rng: np.random.Generator,
        width: int = 3,
        zero: bool = False,
    ):
        super().__init__()
        if width % 2 != 1:
            raise ValueError(f"kernel width must be odd, got {width}")
        fan_in = c_in * width
        if zero:
            weight = np.zeros((c_out, c_in, width))
        else:
            weight = rng.normal(0.0, np.sqrt(1.0 / fan_in), size=(c_out, c_in, width))
        self.weight = self.add_param("weight", weight)
        self.bias = self.add_param("bias", np.zeros(c_out))

    def __call__(self, graph: Graph, x: Node) -> Node:
        return graph.conv1d(x, graph.param(self.weight), graph.param(self.bias))


class BatchNormState(Module):
    """Per-channel scale/shift with running statistics and a mode flag"""

    def __init__(self, channels: int, momentum: float = 0.1, eps: float = 1e-5):
        super().__init__()
        self.gamma = self.add_param("gamma", np.ones(channels))
        self.beta = self.add_param("beta", np.zeros(channels))
        self.running_mean = np.zeros(channels)
        self.running_var = np.ones(channels)
        self.momentum = momentum
        self.eps = eps
        self.training = True

    def update_running(self, mean: np.ndarray, var: np.ndarray):
        m = self.momentum
        self.running_mean = (1.0 - m) * self.running_mean + m * mean
        self.running_var = (1.0 - m) * self.running_var + m * var

    def __call__(self, graph: Graph, x: Node) -> Node:
        return graph.batch_norm(x, self)


def batchnorm(x, state: BatchNormState, graph: Optional[Graph] = None) -> np.ndarray:
    """
    Apply batch normalization to an Array[batch x channels(, length)].

    Args:
        x: input array; channel axis is 1
        state: BatchNormState (its mode flag selects batch vs running stats)
        graph: optional graph to record into; a value-only graph is used otherwise

    Returns:
        Normalized array of the same shape
    """
    graph = graph or Graph(grad_enabled=False)
    return graph.batch_norm(graph.constant(as_array(x)), state).value
