"""
TRAINING-001: Negative log-likelihood objective
"""

import numpy as np

from ..flow_001 import FlowModel, log_prob
from ..flow_001.coupling import as_batch
from ..numerics_001 import Graph, Node
from ...utils.errors import InputError


def nll_graph(graph: Graph, model: FlowModel, x: Node, c: Node) -> Node:
    """Record -(1/N) sum log p(x_i | c_i) in the model's current batch-norm mode."""
    return graph.scale(graph.mean(model.log_prob_graph(graph, x, c)), -1.0)


def nll(x, c, model: FlowModel) -> float:
    """
    Mean negative conditional log-likelihood with frozen batch-norm statistics.

    Args:
        x: Array[N, D] (or a single Array[D])
        c: Array[N, D'] (or a single Array[D'])
        model: FlowModel

    Returns:
        -(1/N) sum_i log p(x_i | c_i)

    Raises:
        InputError: empty batch
        NonFiniteError: naming the first sample with a non-finite log-density
    """
    xb, cb, _ = as_batch(x, c, model.dim, model.cond_dim)
    if xb.shape[0] == 0:
        raise InputError("nll needs a nonempty batch")
    with model.inference():
        values, _ = log_prob(xb, cb, model)
    return float(-np.mean(values))
