"""
NUMERICS-001: Array, Autodiff & Optimization Substrate

Foundation module every other flowcast module computes on:
- float64 numpy arrays as the universal Array value
- Tape-based reverse-mode autodiff over a closed primitive set
  (affine, conv1d, tanh, relu, exp, add/sub/mul, sum, batch-norm, take, concat)
- Module containers, dense / conv1d / batch-norm layers
- Bias-corrected Adam
- Finite-difference gradient and Jacobian oracles

Version: 1.0.0
Status: Production Ready
Dependencies: numpy
"""

from .graph import Graph, Node, Parameter, as_array, backward
from .layers import BatchNormState, Conv1d, Dense, Module, batchnorm
from .optim import Adam, AdamState, adam_step
from .gradcheck import numerical_gradient, numerical_jacobian, relative_error

__version__ = "1.0.0"
__all__ = [
    "Graph",
    "Node",
    "Parameter",
    "as_array",
    "backward",
    "Module",
    "Dense",
    "Conv1d",
    "BatchNormState",
    "batchnorm",
    "Adam",
    "AdamState",
    "adam_step",
    "numerical_gradient",
    "numerical_jacobian",
    "relative_error",
]
