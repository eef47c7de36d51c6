"""
Export Manager - INTEGRATE-001 Component

Writes run artifacts deterministically:
- CSV tables (header row, shortest round-trip floats, LF line endings)
- JSON documents (sorted keys, indent 2, numpy values converted)
- SVG charts (as generated by VISUAL-001)

Identical inputs produce byte-identical files.
"""

import json
import math
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import numpy as np
import pandas as pd


def _plain(value):
    """numpy scalars / arrays -> JSON-native values; non-finite floats -> null."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class ExportManager:
    """
    Writes CSV, JSON and SVG artifacts into an output directory.

    Every export returns a result dict (success, file_path, size_bytes) and
    is recorded in ``self.exports``.
    """

    def __init__(self, output_path, callback=None):
        """
        Args:
            output_path: base output directory (created on first export)
            callback: Optional logging callback function
        """
        self.output_path = Path(output_path)
        self.callback = callback or (lambda x: None)
        self.exports: Dict[str, Dict] = {}

    def _target(self, name: str) -> Path:
        self.output_path.mkdir(parents=True, exist_ok=True)
        return self.output_path / name

    def register(self, name: str, path: Path) -> Dict:
        """Record a file written by another component (checkpoint, load CSV)."""
        result = {"success": True, "file_path": str(path), "size_bytes": path.stat().st_size}
        self.exports[name] = result
        self.callback(f"  ✓ {name}")
        return result

    def export_table(self, name: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Dict:
        """
        Write rows under a header.

        Args:
            name: file name inside the output directory
            columns: header fields
            rows: row tuples, one value per column
        """
        frame = pd.DataFrame(list(rows), columns=list(columns))
        return self.export_frame(name, frame)

    def export_frame(self, name: str, frame: pd.DataFrame) -> Dict:
        """Write a DataFrame as CSV (no index)."""
        path = self._target(name)
        frame.to_csv(path, index=False, lineterminator="\n", float_format=None)
        return self.register(name, path)

    def export_json(self, name: str, data: Dict) -> Dict:
        """Write a JSON document with sorted keys."""
        path = self._target(name)
        path.write_text(json.dumps(_plain(data), sort_keys=True, indent=2) + "\n", encoding="utf-8")
        return self.register(name, path)

    def export_svg(self, name: str, svg: str) -> Dict:
        """Write an SVG chart."""
        path = self._target(name)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(svg)
        return self.register(name, path)

    def file_list(self) -> List[str]:
        return sorted(self.exports)
