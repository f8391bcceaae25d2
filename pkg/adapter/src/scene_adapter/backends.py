"""Model backends: protocols, transcript replay, and a generic HTTP client.

The three pipeline stages are injected as small protocols so tests and
offline runs replay recorded transcripts while live deployments wire in
real services. The bundled HTTP label backend posts JSON to a configured
endpoint; detector and segmenter services differ too much between
deployments to ship more than the protocol and the replay implementation.
"""

from __future__ import annotations

import json
import urllib.request
from typing import Any, Optional, Protocol

from .config import AdapterConfig
from .errors import BackendError
from .transcript import TranscriptRecorder, TranscriptStore


class LabelModel(Protocol):
    def labels(self, image: str, data: bytes, prompt: str, attempt: int) -> str: ...


class Detector(Protocol):
    def detect(self, image: str, data: bytes,
               labels: list[str]) -> dict[str, Any]: ...


class Segmenter(Protocol):
    def segment(self, image: str, data: bytes,
                boxes: list[list[float]]) -> dict[str, Any]: ...


class ReplayLabelModel:
    def __init__(self, store: TranscriptStore):
        self._store = store

    def labels(self, image: str, data: bytes, prompt: str, attempt: int) -> str:
        return self._store.label_response(image, attempt)


class ReplayDetector:
    def __init__(self, store: TranscriptStore):
        self._store = store

    def detect(self, image: str, data: bytes, labels: list[str]) -> dict[str, Any]:
        return self._store.detect_response(image)


class ReplaySegmenter:
    def __init__(self, store: TranscriptStore):
        self._store = store

    def segment(self, image: str, data: bytes,
                boxes: list[list[float]]) -> dict[str, Any]:
        return self._store.segment_response(image)


class HttpLabelModel:
    """POSTs {prompt, image_base64} to the configured endpoint.

    Expects a JSON reply with a ``text`` field. Credentials come from the
    environment variable named in the config, sent as a bearer token.
    """

    def __init__(self, cfg: AdapterConfig):
        if not cfg.llm_endpoint:
            raise BackendError("llm_endpoint is not configured")
        self._cfg = cfg

    def labels(self, image: str, data: bytes, prompt: str, attempt: int) -> str:
        import base64

        payload = json.dumps({
            "prompt": prompt,
            "image_base64": base64.b64encode(data).decode("ascii"),
        }).encode("utf-8")
        request = urllib.request.Request(
            self._cfg.llm_endpoint, data=payload,
            headers={"Content-Type": "application/json"},
        )
        token = self._cfg.credentials()
        if token:
            request.add_header("Authorization", f"Bearer {token}")
        with urllib.request.urlopen(request,
                                    timeout=self._cfg.request_timeout) as reply:
            body = json.loads(reply.read().decode("utf-8"))
        text = body.get("text")
        if not isinstance(text, str):
            raise BackendError("label endpoint reply has no text field")
        return text


class RecordingLabelModel:
    def __init__(self, inner: LabelModel, recorder: TranscriptRecorder):
        self._inner = inner
        self._recorder = recorder

    def labels(self, image: str, data: bytes, prompt: str, attempt: int) -> str:
        response = self._inner.labels(image, data, prompt, attempt)
        self._recorder.record_label_attempt(image, response)
        return response


class RecordingDetector:
    def __init__(self, inner: Detector, recorder: TranscriptRecorder):
        self._inner = inner
        self._recorder = recorder

    def detect(self, image: str, data: bytes, labels: list[str]) -> dict[str, Any]:
        response = self._inner.detect(image, data, labels)
        self._recorder.record_detect(image, response)
        return response


class RecordingSegmenter:
    def __init__(self, inner: Segmenter, recorder: TranscriptRecorder):
        self._inner = inner
        self._recorder = recorder

    def segment(self, image: str, data: bytes,
                boxes: list[list[float]]) -> dict[str, Any]:
        response = self._inner.segment(image, data, boxes)
        self._recorder.record_segment(image, response)
        return response


def replay_backends(store: TranscriptStore) -> tuple[LabelModel, Detector, Segmenter]:
    return ReplayLabelModel(store), ReplayDetector(store), ReplaySegmenter(store)
