"""
FLOW-001: Conditional Normalizing Flow

Affine coupling layers (vanilla and reinforced), their K-block composition,
exact conditional log-density and inverse-direction sampling:
- CouplingBlock / coupling_forward / coupling_inverse
- FlowModel / log_prob / sample
- Checkpoint codec (JSON manifest + little-endian float64 parameters)

Version: 1.0.0
Status: Production Ready
Dependencies: NUMERICS-001
"""

from .coupling import CouplingBlock, CouplingVariant, coupling_forward, coupling_inverse
from .model import FlowModel, FlowTrace, LOG_2PI, log_prob, sample
from .checkpoint import load_checkpoint, save_checkpoint

__version__ = "1.0.0"
__all__ = [
    "CouplingBlock",
    "CouplingVariant",
    "coupling_forward",
    "coupling_inverse",
    "FlowModel",
    "FlowTrace",
    "LOG_2PI",
    "log_prob",
    "sample",
    "load_checkpoint",
    "save_checkpoint",
]
