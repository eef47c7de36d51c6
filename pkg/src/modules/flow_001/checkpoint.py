"""
FLOW-001: Checkpoint codec

A checkpoint is a directory holding:
- manifest.json   UTF-8 JSON (sorted keys): model config, format version,
                  array table (name, shape, offset, count) and free metadata
- parameters.bin  flat little-endian float64 arrays, block by block, nets in
                  name order, batch-norm running stats after their layer

Identical parameters give byte-identical files.
"""

import json
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from .model import FlowModel
from ...utils.errors import InputError

CHECKPOINT_FORMAT = "flowcast-checkpoint"
CHECKPOINT_VERSION = 1
MANIFEST_NAME = "manifest.json"
PARAMETERS_NAME = "parameters.bin"


def save_checkpoint(model: FlowModel, directory, metadata: Optional[Dict] = None) -> Path:
    """
    Write model parameters and running statistics.

    Args:
        model: FlowModel to serialize
        directory: target directory (created if missing)
        metadata: JSON-serializable extras (e.g. standardization stats)

    Returns:
        Path to the manifest
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    table = []
    chunks = []
    offset = 0
    for name, array in model.state_arrays():
        data = np.ascontiguousarray(array, dtype="<f8")
        table.append(
            {"name": name, "shape": list(data.shape), "offset": offset, "count": int(data.size)}
        )
        chunks.append(data.tobytes())
        offset += int(data.size)

    manifest = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "model": model.config(),
        "trained": bool(model.trained),
        "arrays": table,
        "metadata": metadata or {},
    }
    manifest_path = directory / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    (directory / PARAMETERS_NAME).write_bytes(b"".join(chunks))
    return manifest_path


def load_checkpoint(directory) -> Tuple[FlowModel, Dict]:
    """
    Rebuild a FlowModel (in inference mode) from a checkpoint directory.

    Returns:
        (model, metadata)

    Raises:
        InputError: missing files, unknown format/version, or size mismatch
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    params_path = directory / PARAMETERS_NAME
    if not manifest_path.exists() or not params_path.exists():
        raise InputError(f"checkpoint not found in {directory}")

    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"corrupt checkpoint manifest {manifest_path}: {e}") from e
    if manifest.get("format") != CHECKPOINT_FORMAT:
        raise InputError(f"{manifest_path} is not a flowcast checkpoint")
    if manifest.get("version") != CHECKPOINT_VERSION:
        raise InputError(
            f"unsupported checkpoint version {manifest.get('version')}, expected {CHECKPOINT_VERSION}"
        )

    flat = np.frombuffer(params_path.read_bytes(), dtype="<f8")
    expected = sum(entry["count"] for entry in manifest["arrays"])
    if flat.size != expected:
        raise InputError(f"parameter file holds {flat.size} values, manifest expects {expected}")

    model = FlowModel(**manifest["model"])
    arrays = {
        entry["name"]: flat[entry["offset"] : entry["offset"] + entry["count"]].reshape(entry["shape"])
        for entry in manifest["arrays"]
    }
    known = {name for name, _ in model.state_arrays()}
    if known != set(arrays):
        raise InputError("checkpoint array table does not match the model configuration")
    model.load_state_arrays(arrays)
    model.trained = bool(manifest.get("trained", False))
    model.eval()
    return model, manifest.get("metadata", {})
