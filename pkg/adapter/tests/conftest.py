import json
import socket
import struct
import zlib

import pytest

from scene_adapter import identification_code

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    """Every adapter test must run fully offline."""

    def guard(*args, **kwargs):
        raise AssertionError("network access attempted during the test run")

    monkeypatch.setattr(socket.socket, "connect", guard)
    monkeypatch.setattr(socket, "create_connection", guard)


def write_png(path, width, height):
    def chunk(tag, payload):
        body = struct.pack(">I", len(payload)) + tag + payload
        return body + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)

    ihdr = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = b"".join(b"\x00" + bytes(width) for _ in range(height))
    blob = (PNG_SIGNATURE + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", zlib.compress(raw)) + chunk(b"IEND", b""))
    path.write_bytes(blob)


def minimal_jpeg_bytes(width, height):
    sof = (b"\xff\xc0" + struct.pack(">H", 17) + b"\x08"
           + struct.pack(">HH", height, width) + b"\x03" + b"\x00" * 9)
    return b"\xff\xd8" + sof + b"\xff\xd9"


def rect_counts(x, y, w, h, width, height):
    """Column-major run lengths of a w*h rectangle at (x, y)."""
    counts = [x * height + y]
    for col in range(w):
        counts.append(h)
        if col < w - 1:
            counts.append(height - h)
    tail = (width - x - w) * height + (height - y - h)
    if tail:
        counts.append(tail)
    return counts


def build_corpus(tmp_path, n_images=20, salt=0):
    """Fixture images plus a matching transcript covering all stages."""
    image_dir = tmp_path / "images"
    image_dir.mkdir()
    entries = []
    width, height = 32, 24
    for k in range(n_images):
        name = f"img{k:03d}.png"
        write_png(image_dir / name, width, height)
        code = identification_code(name, salt)
        n_objects = (k % 3) + 1
        labels = ", ".join(["dog", "ball", "chair"][:n_objects])
        entries.append({"stage": "labels", "image": name,
                        "responses": [f"{code}: {labels}"]})
        detections = []
        masks = []
        for j in range(n_objects):
            x, y, w, h = 2 + 7 * j, 3 + 4 * j, 5, 4
            detections.append({"label": ["dog", "ball", "chair"][j],
                               "bbox": [x, y, w, h],
                               "score": 0.3 + 0.2 * j})
            masks.append({"counts": rect_counts(x, y, w, h, width, height),
                          "size": [height, width]})
        # one sub-floor detection that must be dropped before segmentation
        detections.append({"label": "speck", "bbox": [1, 1, 1, 1],
                           "score": 0.01})
        entries.append({"stage": "detect", "image": name,
                        "response": {"detections": detections}})
        entries.append({"stage": "segment", "image": name,
                        "response": {"masks": masks}})
    transcript = tmp_path / "transcript.ndjson"
    transcript.write_text(
        "".join(json.dumps(e, sort_keys=True) + "\n" for e in entries)
    )
    return image_dir, transcript
