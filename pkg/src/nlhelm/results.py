"""Deterministic result serialization shared by all subcommands.

Every output file embeds a schema version and an echo of the effective
configuration (including the seed), floats are rendered with 17 significant
digits so values round-trip losslessly, keys are sorted, and files are
written atomically (temp file + rename).  Wall-clock timing is kept on the
in-memory envelope but serialized as null so that identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"

__all__ = ["SCHEMA_VERSION", "ResultEnvelope", "canonical_json", "write_json", "write_csv"]


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _render(obj) -> str:
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: kv[0])
        inner = ",".join(f"{json.dumps(str(k))}:{_render(v)}" for k, v in items)
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_render(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, (int, str)) or obj is None:
        return json.dumps(obj)
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):  # numpy scalar
        return _render(obj.item())
    if hasattr(obj, "tolist"):  # numpy array
        return _render(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Sorted-key JSON with 17-significant-digit floats and a newline."""
    return _render(obj) + "\n"


@dataclass
class ResultEnvelope:
    """Standard wrapper around a subcommand's payload."""

    command: str
    config: dict
    seed: int
    payload: object
    warnings: list = field(default_factory=list)
    timing_s: float = None
    schema_version: str = SCHEMA_VERSION

    def to_dict(self, deterministic: bool = True) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "warnings": list(self.warnings),
            "timing_s": None if deterministic else self.timing_s,
            "payload": self.payload,
        }


def _atomic_write(path: str, data: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, envelope: ResultEnvelope) -> None:
    _atomic_write(str(path), canonical_json(envelope.to_dict()))


def write_csv(path, header, rows) -> None:
    """CSV with the same 17-digit float convention, written atomically."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            _format_float(float(v)) if isinstance(v, (float, int)) or hasattr(v, "item")
            else str(v)
            for v in row
        ))
    _atomic_write(str(path), "\n".join(lines) + "\n")
