"""Run manifests: provenance record written next to every output set."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

MANIFEST_FILENAME = "manifest.json"


def file_digest(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    h = hashlib.sha256()
    size = 0
    with open(p, "rb") as fh:
        while True:
            block = fh.read(1 << 20)
            if not block:
                break
            h.update(block)
            size += len(block)
    return {"path": str(p), "sha256": h.hexdigest(), "bytes": size}


@dataclass
class RunManifest:
    command: str
    argv: list[str]
    config: dict[str, Any]
    inputs: list[dict[str, Any]] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    tool_version: str = ""
    timestamp: str = ""

    def write(self, out_dir: str | Path) -> Path:
        from . import __version__

        if not self.tool_version:
            self.tool_version = __version__
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()
        path = Path(out_dir) / MANIFEST_FILENAME
        payload = {
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "inputs": self.inputs,
            "counts": self.counts,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
