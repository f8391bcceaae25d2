"""Response validation and interchange-record schema checks."""

from __future__ import annotations

import hashlib
from typing import Any

from .errors import ResponseInvalidError
from .rle import decode_counts


def identification_code(image_name: str, salt: int = 0) -> str:
    """Deterministic 5-digit code for one image, fresh per image name.

    Derived from a hash so repeated runs (and recorded transcripts) agree
    on the code without any shared state.
    """
    digest = hashlib.sha256(f"{salt}:{image_name}".encode("utf-8")).digest()
    return str(10000 + int.from_bytes(digest[:4], "big") % 90000)


def parse_label_response(raw: str, expected_code: str) -> list[str]:
    """Split a validated label response into normalized words.

    The identification code must occur before the label list or the
    response is rejected. An empty list after cleaning is legal here (the
    image simply has no countable objects).
    """
    idx = raw.find(expected_code)
    if idx < 0:
        raise ResponseInvalidError(
            f"response does not contain the identification code {expected_code!r}"
        )
    rest = raw[idx + len(expected_code):].lstrip(" \t\r\n:;,.-")
    words: list[str] = []
    seen: set[str] = set()
    for token in rest.split(","):
        word = " ".join(token.strip().lower().split())
        if word and word not in seen:
            seen.add(word)
            words.append(word)
    return words


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def validate_interchange_record(record: Any) -> list[str]:
    """Return the list of schema violations (empty means valid).

    Mirrors the published interchange contract: image_id, positive integer
    width/height, detections with label/bbox/score and optional mask whose
    run-length counts sum to height * width.
    """
    problems: list[str] = []
    if not isinstance(record, dict):
        return ["record is not an object"]
    if not isinstance(record.get("image_id"), (int, str)) \
            or isinstance(record.get("image_id"), bool):
        problems.append("image_id must be an integer or text")
    for field in ("width", "height"):
        v = record.get(field)
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            problems.append(f"{field} must be a positive integer")
    detections = record.get("detections")
    if not isinstance(detections, list):
        return problems + ["detections must be an array"]
    for k, det in enumerate(detections):
        where = f"detections[{k}]"
        if not isinstance(det, dict):
            problems.append(f"{where} is not an object")
            continue
        if not isinstance(det.get("label"), str):
            problems.append(f"{where}.label must be text")
        bbox = det.get("bbox")
        if (not isinstance(bbox, list) or len(bbox) != 4
                or not all(_is_number(v) for v in bbox)):
            problems.append(f"{where}.bbox must be [x, y, w, h]")
        elif bbox[2] <= 0 or bbox[3] <= 0:
            problems.append(f"{where}.bbox must have positive extents")
        score = det.get("score")
        if not _is_number(score) or not (0.0 <= float(score) <= 1.0):
            problems.append(f"{where}.score must be in [0, 1]")
        if "mask" in det and det["mask"] is not None:
            problems.extend(_validate_mask(det["mask"], record, where))
    return problems


def _validate_mask(mask: Any, record: dict, where: str) -> list[str]:
    if not isinstance(mask, dict):
        return [f"{where}.mask is not an object"]
    size = mask.get("size")
    if (not isinstance(size, list) or len(size) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool)
                       for v in size)):
        return [f"{where}.mask.size must be [height, width]"]
    if isinstance(record.get("height"), int) and isinstance(record.get("width"), int):
        if size != [record["height"], record["width"]]:
            return [f"{where}.mask.size does not match the image frame"]
    counts = mask.get("counts")
    if isinstance(counts, str):
        try:
            decoded = decode_counts(counts)
        except Exception as e:  # noqa: BLE001 - report as a schema problem
            return [f"{where}.mask.counts does not decode: {e}"]
    elif isinstance(counts, list) and all(
            isinstance(v, int) and not isinstance(v, bool) for v in counts):
        decoded = list(counts)
    else:
        return [f"{where}.mask.counts must be text or an integer array"]
    if any(v < 0 for v in decoded):
        return [f"{where}.mask.counts contains a negative run"]
    if sum(decoded) != size[0] * size[1]:
        return [f"{where}.mask.counts sum to {sum(decoded)}, "
                f"expected {size[0] * size[1]}"]
    return []
