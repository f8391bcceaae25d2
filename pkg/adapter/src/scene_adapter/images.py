"""Image dimension probing from file headers (PNG and JPEG only).

The adapter never decodes pixels; the interchange record just needs the
frame size, which both formats expose in their headers.
"""

from __future__ import annotations

import struct

from .errors import ImageFormatError

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def image_dimensions(data: bytes) -> tuple[int, int]:
    """(width, height) from a PNG or JPEG header."""
    if data.startswith(PNG_SIGNATURE):
        if len(data) < 24 or data[12:16] != b"IHDR":
            raise ImageFormatError("PNG missing IHDR chunk")
        width, height = struct.unpack(">II", data[16:24])
        if width < 1 or height < 1:
            raise ImageFormatError("PNG declares empty dimensions")
        return int(width), int(height)
    if data[:2] == b"\xff\xd8":
        return _jpeg_dimensions(data)
    raise ImageFormatError("unsupported image format (need PNG or JPEG)")


def _jpeg_dimensions(data: bytes) -> tuple[int, int]:
    # walk the segment chain to the first frame header (SOFn)
    offset = 2
    size = len(data)
    while offset + 4 <= size:
        if data[offset] != 0xFF:
            offset += 1
            continue
        marker = data[offset + 1]
        if marker in (0xD8, 0x01) or 0xD0 <= marker <= 0xD7:
            offset += 2
            continue
        if offset + 4 > size:
            break
        length = struct.unpack(">H", data[offset + 2:offset + 4])[0]
        if 0xC0 <= marker <= 0xCF and marker not in (0xC4, 0xC8, 0xCC):
            if offset + 9 > size:
                break
            height, width = struct.unpack(">HH", data[offset + 5:offset + 9])
            if width < 1 or height < 1:
                raise ImageFormatError("JPEG declares empty dimensions")
            return int(width), int(height)
        offset += 2 + length
    raise ImageFormatError("JPEG frame header not found")
