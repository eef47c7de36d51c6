"""
NUMERICS-001: Adam optimizer

Bias-corrected Adam. A step with any non-finite gradient is rejected whole:
no parameter or moment is touched and NonFiniteError names the parameter.
"""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .graph import Parameter
from ...utils.errors import NonFiniteError


@dataclass
class AdamState:
    """Per-parameter moments plus hyperparameters"""

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    first_moment: Dict[int, np.ndarray] = field(default_factory=dict)
    second_moment: Dict[int, np.ndarray] = field(default_factory=dict)


def adam_step(state: AdamState, params: List[Parameter]) -> List[Parameter]:
    """
    Apply one Adam update in place and reset gradients to zero.

    Args:
        state: AdamState (moments keyed by Parameter.id)
        params: parameters whose .grad is populated

    Returns:
        The updated parameters

    Raises:
        NonFiniteError: if any gradient holds NaN/inf (step rejected)
    """
    for index, param in enumerate(params):
        if not np.all(np.isfinite(param.grad)):
            raise NonFiniteError(
                f"non-finite gradient in parameter {param.name or param.id}; step rejected",
                index=index,
            )

    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    for param in params:
        m = state.first_moment.get(param.id)
        v = state.second_moment.get(param.id)
        if m is None:
            m = np.zeros_like(param.value)
            v = np.zeros_like(param.value)
        g = param.grad
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        state.first_moment[param.id] = m
        state.second_moment[param.id] = v
        m_hat = m / (1.0 - b1 ** t)
        v_hat = v / (1.0 - b2 ** t)
        param.value = param.value - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps)
        param.zero_grad()
    return params


class Adam:
    """Convenience wrapper binding an AdamState to a parameter list"""

    def __init__(self, params: List[Parameter], learning_rate: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.state = AdamState(learning_rate=learning_rate, beta1=beta1, beta2=beta2, eps=eps)

    def step(self):
        adam_step(self.state, self.params)

    def zero_grad(self):
        for param in self.params:
            param.zero_grad()
