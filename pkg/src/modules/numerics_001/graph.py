"""
NUMERICS-001: Reverse-mode autodiff graph

A Graph is a tape: every primitive appends one Node in execution order, so the
tape is already topologically sorted and backward() is a single reverse sweep.
Values are float64 numpy arrays.
"""

import itertools
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ...utils.errors import GraphError, InputError

_PARAM_IDS = itertools.count()

BackwardFn = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


def as_array(value) -> np.ndarray:
    """Coerce to a float64 ndarray (the universal Array value)."""
    return np.asarray(value, dtype=np.float64)


class Parameter:
    """Trainable array with an accumulated gradient of the same shape"""

    def __init__(self, value, name: str = ""):
        self.value = np.array(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        self.id = next(_PARAM_IDS)
        self.name = name
        self.released = False

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def zero_grad(self):
        self.grad = np.zeros_like(self.value)

    def release(self):
        """Mark as freed; any graph still referencing it refuses backward."""
        self.released = True

    def __repr__(self):
        return f"Parameter(name={self.name!r}, shape={self.value.shape})"


class Node:
    """One recorded value in a graph"""

    __slots__ = ("value", "grad", "parents", "backward_fn", "op", "param")

    def __init__(
        self,
        value: np.ndarray,
        op: str,
        parents: Tuple["Node", ...] = (),
        backward_fn: Optional[BackwardFn] = None,
        param: Optional[Parameter] = None,
    ):
        self.value = value
        self.grad: Optional[np.ndarray] = None
        self.parents = parents
        self.backward_fn = backward_fn
        self.op = op
        self.param = param

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def __repr__(self):
        return f"Node(op={self.op!r}, shape={self.value.shape})"


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to `shape`."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Graph:
    """
    Record of primitive operations linking Arrays to Parameters.

    With grad_enabled=False the same primitives compute values without
    recording anything (inference and sampling paths).
    """

    def __init__(self, grad_enabled: bool = True):
        self.grad_enabled = grad_enabled
        self.nodes: List[Node] = []
        self._param_nodes = {}

    # ------------------------------------------------------------------
    # leaves
    # ------------------------------------------------------------------

    def _record(self, value, op, parents=(), backward_fn=None, param=None) -> Node:
        if not self.grad_enabled:
            return Node(value, op, param=param)
        node = Node(value, op, parents, backward_fn, param)
        self.nodes.append(node)
        return node

    def constant(self, value) -> Node:
        return self._record(as_array(value), "const")

    def param(self, parameter: Parameter) -> Node:
        """Leaf node bound to a Parameter; one node per parameter per graph."""
        node = self._param_nodes.get(parameter.id)
        if node is None:
            node = self._record(parameter.value, "param", param=parameter)
            self._param_nodes[parameter.id] = node
        return node

    # ------------------------------------------------------------------
    # elementwise
    # ------------------------------------------------------------------

    def add(self, a: Node, b: Node) -> Node:
        def grad_fn(g):
            return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

        return self._record(a.value + b.value, "add", (a, b), grad_fn)

    def sub(self, a: Node, b: Node) -> Node:
        def grad_fn(g):
            return _unbroadcast(g, a.shape), -_unbroadcast(g, b.shape)

        return self._record(a.value - b.value, "sub", (a, b), grad_fn)

    def mul(self, a: Node, b: Node) -> Node:
        av, bv = a.value, b.value

        def grad_fn(g):
            return _unbroadcast(g * bv, a.shape), _unbroadcast(g * av, b.shape)

        return self._record(av * bv, "mul", (a, b), grad_fn)

    def neg(self, a: Node) -> Node:
        return self._record(-a.value, "neg", (a,), lambda g: (-g,))

    def scale(self, a: Node, factor: float) -> Node:
        factor = float(factor)
        return self._record(a.value * factor, "scale", (a,), lambda g: (g * factor,))

    def exp(self, a: Node) -> Node:
        out = np.exp(a.value)
        return self._record(out, "exp", (a,), lambda g: (g * out,))

    def tanh(self, a: Node) -> Node:
        out = np.tanh(a.value)
        return self._record(out, "tanh", (a,), lambda g: (g * (1.0 - out * out),))

    def relu(self, a: Node) -> Node:
        mask = a.value > 0.0
        return self._record(a.value * mask, "relu", (a,), lambda g: (g * mask,))

    # ------------------------------------------------------------------
    # reductions and structure
    # ------------------------------------------------------------------

    def sum(self, a: Node, axis=None) -> Node:
        shape = a.shape

        def grad_fn(g):
            if axis is not None:
                g = np.expand_dims(g, axis)
            return (np.broadcast_to(g, shape).copy(),)

        return self._record(np.sum(a.value, axis=axis), "sum", (a,), grad_fn)

    def mean(self, a: Node, axis=None) -> Node:
        count = a.value.size if axis is None else a.shape[axis]
        return self.scale(self.sum(a, axis=axis), 1.0 / count)

    def take(self, a: Node, indices: Sequence[int]) -> Node:
        """Gather columns along the last axis."""
        idx = np.asarray(indices, dtype=np.int64)
        shape = a.shape

        def grad_fn(g):
            full = np.zeros(shape)
            np.add.at(full, (Ellipsis, idx), g)
            return (full,)

        return self._record(a.value[..., idx], "take", (a,), grad_fn)

    def concat(self, parts: Sequence[Node], axis: int = -1) -> Node:
        sizes = [p.shape[axis] for p in parts]
        bounds = np.cumsum(sizes)[:-1]

        def grad_fn(g):
            return tuple(np.split(g, bounds, axis=axis))

        value = np.concatenate([p.value for p in parts], axis=axis)
        return self._record(value, "concat", tuple(parts), grad_fn)

    def reshape(self, a: Node, shape: Tuple[int, ...]) -> Node:
        original = a.shape
        return self._record(
            a.value.reshape(shape), "reshape", (a,), lambda g: (g.reshape(original),)
        )

    # ------------------------------------------------------------------
    # layers
    # ------------------------------------------------------------------

    def affine(self, x: Node, weight: Node, bias: Node) -> Node:
        """x (N, in) @ W (in, out) + b (out,)"""
        xv, wv = x.value, weight.value

        def grad_fn(g):
            return g @ wv.T, xv.T @ g, g.sum(axis=0)

        return self._record(xv @ wv + bias.value, "affine", (x, weight, bias), grad_fn)

    def conv1d(self, x: Node, weight: Node, bias: Node) -> Node:
        """
        Zero-padded, stride-1 1-D convolution preserving length.

        x (N, C_in, L), weight (C_out, C_in, W) with odd W, bias (C_out,)
        """
        xv, wv = x.value, weight.value
        width = wv.shape[2]
        pad = width // 2
        length = xv.shape[2]
        padded = np.pad(xv, ((0, 0), (0, 0), (pad, pad)))

        out = np.zeros((xv.shape[0], wv.shape[0], length))
        for k in range(width):
            out += np.einsum("oc,ncl->nol", wv[:, :, k], padded[:, :, k : k + length])
        out += bias.value[None, :, None]

        def grad_fn(g):
            grad_w = np.empty_like(wv)
            grad_padded = np.zeros_like(padded)
            for k in range(width):
                window = padded[:, :, k : k + length]
                grad_w[:, :, k] = np.einsum("nol,ncl->oc", g, window)
                grad_padded[:, :, k : k + length] += np.einsum("oc,nol->ncl", wv[:, :, k], g)
            grad_x = grad_padded[:, :, pad : pad + length]
            return grad_x, grad_w, g.sum(axis=(0, 2))

        return self._record(out, "conv1d", (x, weight, bias), grad_fn)

    def batch_norm(self, x: Node, state) -> Node:
        """
        Batch normalization over every axis except the channel axis 1.

        Training mode standardizes with batch statistics and updates the
        running averages on `state`; inference mode uses the running stats.
        """
        gamma = self.param(state.gamma)
        beta = self.param(state.beta)
        xv = x.value
        axes = tuple(a for a in range(xv.ndim) if a != 1)
        bshape = [1] * xv.ndim
        bshape[1] = xv.shape[1]

        if state.training:
            if xv.shape[0] < 2:
                raise InputError(
                    f"batch norm in training mode needs batch >= 2, got {xv.shape[0]}"
                )
            mean = xv.mean(axis=axes)
            var = xv.var(axis=axes)
            state.update_running(mean, var)
        else:
            mean, var = state.running_mean, state.running_var

        std = np.sqrt(var + state.eps).reshape(bshape)
        xhat = (xv - mean.reshape(bshape)) / std
        gv = gamma.value.reshape(bshape)
        out = gv * xhat + beta.value.reshape(bshape)
        count = xv.size // xv.shape[1]
        training = state.training

        def grad_fn(g):
            grad_gamma = np.sum(g * xhat, axis=axes)
            grad_beta = np.sum(g, axis=axes)
            gx = g * gv
            if training:
                s1 = np.sum(gx, axis=axes).reshape(bshape)
                s2 = np.sum(gx * xhat, axis=axes).reshape(bshape)
                grad_x = (count * gx - s1 - xhat * s2) / (count * std)
            else:
                grad_x = gx / std
            return grad_x, grad_gamma, grad_beta

        return self._record(out, "batchnorm", (x, gamma, beta), grad_fn)

    # ------------------------------------------------------------------
    # backward
    # ------------------------------------------------------------------

    def backward(self, output: Node):
        """Accumulate d(output)/d(parameter) into every reachable Parameter.grad."""
        if not self.grad_enabled:
            raise GraphError("graph was built with grad_enabled=False")
        if output.value.size != 1:
            raise GraphError(f"backward needs a scalar output, got shape {output.shape}")
        released = [n.param.name or repr(n.param) for n in self.nodes
                    if n.param is not None and n.param.released]
        if released:
            raise GraphError(f"graph references freed parameter(s): {', '.join(released)}")

        for node in self.nodes:
            node.grad = None
        output.grad = np.ones_like(output.value)

        for node in reversed(self.nodes):
            if node.grad is None:
                continue
            if node.param is not None:
                node.param.grad += node.grad
                continue
            if node.backward_fn is None:
                continue
            for parent, grad in zip(node.parents, node.backward_fn(node.grad)):
                if grad is None:
                    continue
                parent.grad = grad if parent.grad is None else parent.grad + grad


def backward(graph: Graph, output: Node):
    """Module-level entry point: graph.backward(output)."""
    graph.backward(output)
