"""The three-stage annotation pipeline emitting interchange records.

Per image: prompt the label model (validating the identification code,
retrying within the budget), hand the surviving labels to the detector,
segment each detection, and emit one interchange line containing every
raw detection at the permissive score floor. Deduplication, size caps and
the calibrated confidence threshold are deliberately NOT applied here;
that post-processing belongs to the analysis side, so stage separation is
preserved and nothing is filtered twice.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .backends import Detector, LabelModel, Segmenter
from .config import AdapterConfig
from .errors import BackendError, ResponseInvalidError
from .images import image_dimensions
from .rle import encode_counts
from .validate import identification_code, parse_label_response

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnotationOutcome:
    """Either a schema-valid interchange record or a failure report."""

    image: str
    record: Optional[dict] = None
    failure: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.record is not None


def _normalize_mask(mask: Any, width: int, height: int, image: str) -> dict:
    if not isinstance(mask, dict):
        raise BackendError(f"{image}: segmenter mask must be an object")
    size = mask.get("size")
    if size != [height, width] and tuple(size or ()) != (height, width):
        raise BackendError(f"{image}: segmenter mask size {size} does not "
                           f"match the {width}x{height} frame")
    counts = mask.get("counts")
    if isinstance(counts, list):
        if any((not isinstance(v, int)) or isinstance(v, bool) or v < 0
               for v in counts):
            raise BackendError(f"{image}: segmenter mask counts must be "
                               f"non-negative integers")
        if sum(counts) != width * height:
            raise BackendError(f"{image}: segmenter mask counts sum to "
                               f"{sum(counts)}, expected {width * height}")
        counts = encode_counts(counts)
    if not isinstance(counts, str):
        raise BackendError(f"{image}: segmenter mask needs counts")
    return {"counts": counts, "size": [height, width]}


def _parse_detections(response: dict, width: int, height: int,
                      image: str) -> list[dict]:
    raw = response.get("detections")
    if not isinstance(raw, list):
        raise BackendError(f"{image}: detector response has no detections array")
    out = []
    for k, det in enumerate(raw):
        if not isinstance(det, dict):
            raise BackendError(f"{image}: detector entry {k} is not an object")
        label = det.get("label")
        bbox = det.get("bbox")
        score = det.get("score")
        if not isinstance(label, str):
            raise BackendError(f"{image}: detector entry {k} lacks a label")
        if (not isinstance(bbox, list) or len(bbox) != 4
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           for v in bbox) or bbox[2] <= 0 or bbox[3] <= 0):
            raise BackendError(f"{image}: detector entry {k} has a bad bbox")
        if (isinstance(score, bool) or not isinstance(score, (int, float))
                or not 0.0 <= float(score) <= 1.0):
            raise BackendError(f"{image}: detector entry {k} has a bad score")
        out.append({"label": label, "bbox": [float(v) for v in bbox],
                    "score": float(score)})
    return out


def annotate_image(path: str | Path, cfg: AdapterConfig, label_model: LabelModel,
                   detector: Detector, segmenter: Segmenter,
                   code_salt: int = 0) -> AnnotationOutcome:
    """Run the pipeline for one image file."""
    path = Path(path)
    image = path.name
    data = path.read_bytes()
    width, height = image_dimensions(data)
    code = identification_code(image, code_salt)
    prompt = cfg.prompt_template.format(code=code)

    words: Optional[list[str]] = None
    raw = ""
    attempts = 0
    for attempt in range(cfg.retry_budget + 1):
        attempts = attempt + 1
        raw = label_model.labels(image, data, prompt, attempt)
        try:
            words = parse_label_response(raw, code)
            break
        except ResponseInvalidError as e:
            log.warning("%s: attempt %d rejected: %s", image, attempts, e)
    if words is None:
        return AnnotationOutcome(image=image, failure={
            "image_id": image,
            "error": "label_response_invalid",
            "attempts": attempts,
            "expected_code": code,
            "raw_response": raw,
        })

    detections: list[dict] = []
    if words:
        response = detector.detect(image, data, words)
        detections = _parse_detections(response, width, height, image)
        detections = [d for d in detections if d["score"] >= cfg.score_floor]
        if detections:
            boxes = [d["bbox"] for d in detections]
            masks = segmenter.segment(image, data, boxes).get("masks")
            if not isinstance(masks, list) or len(masks) != len(boxes):
                raise BackendError(
                    f"{image}: segmenter returned {0 if not isinstance(masks, list) else len(masks)} "
                    f"masks for {len(boxes)} boxes"
                )
            for det, mask in zip(detections, masks):
                if mask is not None:
                    det["mask"] = _normalize_mask(mask, width, height, image)

    record = {"image_id": image, "width": width, "height": height,
              "detections": detections}
    return AnnotationOutcome(image=image, record=record)


def record_to_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def annotate_directory(image_dir: str | Path, cfg: AdapterConfig,
                       label_model: LabelModel, detector: Detector,
                       segmenter: Segmenter, out_path: str | Path,
                       failures_path: str | Path | None = None,
                       code_salt: int = 0) -> tuple[int, int]:
    """Annotate every PNG/JPEG under ``image_dir`` (sorted by name).

    Returns (records_written, failures_written). Failure reports go to the
    sidecar file so the interchange output stays schema-pure.
    """
    image_dir = Path(image_dir)
    files = sorted(p for p in image_dir.iterdir()
                   if p.suffix.lower() in (".png", ".jpg", ".jpeg"))
    ok = 0
    failed = 0
    failures_path = Path(failures_path) if failures_path is not None \
        else Path(str(out_path) + ".failures.ndjson")
    with open(out_path, "w", encoding="utf-8") as out_fh, \
            open(failures_path, "w", encoding="utf-8") as fail_fh:
        for path in files:
            outcome = annotate_image(path, cfg, label_model, detector,
                                     segmenter, code_salt)
            if outcome.ok:
                out_fh.write(record_to_line(outcome.record) + "\n")
                ok += 1
            else:
                fail_fh.write(record_to_line(outcome.failure) + "\n")
                failed += 1
    if failed == 0:
        failures_path.unlink()
    return ok, failed
