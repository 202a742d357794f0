"""Deterministic JSON/CSV output and run manifests.

Floats are written with ``repr``, the shortest text that parses back to the
same double. Data files never contain timestamps; the manifest does, and
records a SHA-256 for every data file so reruns can be compared.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__

__all__ = ["to_jsonable", "dumps_json", "csv_text", "format_cell", "RunManifest", "write_outputs", "sha256"]


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        return repr(x) if math.isfinite(x) else ""
    if v is None:
        return ""
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class RunManifest:
    command: str
    config_hash: Optional[str]
    rng_seed: Optional[int]
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    outputs: dict[str, str] = field(default_factory=dict)

    @property
    def payload_hash(self) -> str:
        """Hash over data files only, so it is stable across reruns."""
        joined = "\n".join(f"{name}:{digest}" for name, digest in sorted(self.outputs.items()))
        return sha256(joined.encode("utf-8"))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "rng_seed": self.rng_seed,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "outputs": dict(sorted(self.outputs.items())),
            "payload_hash": self.payload_hash,
        }


def write_outputs(out_dir, files: dict[str, str], manifest: RunManifest) -> Path:
    """Write data files plus ``manifest.json``; raises OSError on I/O failure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        data = text.encode("utf-8")
        (out / name).write_bytes(data)
        manifest.outputs[name] = sha256(data)
    (out / "manifest.json").write_text(dumps_json(manifest.to_dict()), encoding="utf-8")
    return out
