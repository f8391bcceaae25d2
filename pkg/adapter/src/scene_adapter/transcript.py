"""Replayable transcripts of model interactions.

A transcript is newline-delimited JSON, one entry per (stage, image)::

    {"stage": "labels",  "image": "img001.png", "responses": ["...", ...]}
    {"stage": "detect",  "image": "img001.png",
     "response": {"detections": [{"label": ..., "bbox": [...], "score": ...}]}}
    {"stage": "segment", "image": "img001.png",
     "response": {"masks": [{"counts": ..., "size": [h, w]} | null, ...]}}

``labels`` entries carry one response per attempt (the last one repeats
when the pipeline retries past the recorded list), which lets a transcript
exercise the retry path deterministically. Replay mode never touches the
network; record mode appends entries as live backends answer.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import TranscriptError

STAGES = ("labels", "detect", "segment")


class TranscriptStore:
    def __init__(self, entries: dict[tuple[str, str], dict[str, Any]]):
        self._entries = entries

    @classmethod
    def load(cls, path: str | Path) -> "TranscriptStore":
        entries: dict[tuple[str, str], dict[str, Any]] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as e:
                    raise TranscriptError(
                        f"{path}:{line_no}: invalid JSON: {e.msg}"
                    ) from e
                if not isinstance(entry, dict):
                    raise TranscriptError(f"{path}:{line_no}: entry must be an object")
                stage = entry.get("stage")
                image = entry.get("image")
                if stage not in STAGES or not isinstance(image, str):
                    raise TranscriptError(
                        f"{path}:{line_no}: entry needs a stage in {STAGES} "
                        f"and an image name"
                    )
                entries[(stage, image)] = entry
        return cls(entries)

    def label_response(self, image: str, attempt: int) -> str:
        entry = self._entries.get(("labels", image))
        if entry is None:
            raise TranscriptError(f"no labels entry recorded for {image!r}")
        responses = entry.get("responses")
        if not isinstance(responses, list) or not responses \
                or not all(isinstance(r, str) for r in responses):
            raise TranscriptError(f"labels entry for {image!r} has no responses")
        return responses[min(attempt, len(responses) - 1)]

    def detect_response(self, image: str) -> dict[str, Any]:
        entry = self._entries.get(("detect", image))
        if entry is None:
            raise TranscriptError(f"no detect entry recorded for {image!r}")
        response = entry.get("response")
        if not isinstance(response, dict):
            raise TranscriptError(f"detect entry for {image!r} has no response")
        return response

    def segment_response(self, image: str) -> dict[str, Any]:
        entry = self._entries.get(("segment", image))
        if entry is None:
            raise TranscriptError(f"no segment entry recorded for {image!r}")
        response = entry.get("response")
        if not isinstance(response, dict):
            raise TranscriptError(f"segment entry for {image!r} has no response")
        return response


class TranscriptRecorder:
    """Appends entries while live backends answer, for later replay."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._labels: dict[str, list[str]] = {}

    def record_label_attempt(self, image: str, response: str) -> None:
        self._labels.setdefault(image, []).append(response)

    def flush_labels(self, image: str) -> None:
        responses = self._labels.pop(image, [])
        if responses:
            self._append({"stage": "labels", "image": image,
                          "responses": responses})

    def record_detect(self, image: str, response: dict) -> None:
        self._append({"stage": "detect", "image": image, "response": response})

    def record_segment(self, image: str, response: dict) -> None:
        self._append({"stage": "segment", "image": image, "response": response})

    def _append(self, entry: dict) -> None:
        with open(self._path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True, separators=(",", ":")))
            fh.write("\n")
