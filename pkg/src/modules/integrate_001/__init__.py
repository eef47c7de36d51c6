"""
INTEGRATE-001: Pipeline Orchestration & Export

Wires the modules into the flowcast commands.

Components:
- PipelineOrchestrator: runs synth / train / forecast / eval / toy
- ExportManager: deterministic CSV / JSON / SVG artifact writer

Version: 1.0.0
Status: Production Ready
Dependencies: DATA-001, FLOW-001, TRAINING-001, EVAL-001, VISUAL-001
"""

from .workflow_orchestrator import (
    AR_METHOD,
    COMMANDS,
    PipelineOrchestrator,
    method_name,
    read_realized,
    read_scenarios,
    realized_frame,
    scenario_frame,
)
from .export_manager import ExportManager

__version__ = "1.0.0"
__all__ = [
    "PipelineOrchestrator",
    "ExportManager",
    "COMMANDS",
    "AR_METHOD",
    "method_name",
    "scenario_frame",
    "realized_frame",
    "read_realized",
    "read_scenarios",
]
