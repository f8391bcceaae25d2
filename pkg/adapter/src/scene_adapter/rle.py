"""Column-major run-length codec, bit-exact with the interchange contract.

Counts start with the background run. Values are delta-coded against the
count two positions back (from the fourth count on) and packed into
little-endian 5-bit chunks as ASCII characters 48..111; chunk bit 0x20
marks continuation and bit 0x10 of a final chunk triggers sign extension.
"""

from __future__ import annotations

from typing import Sequence

from .errors import BackendError


def encode_counts(counts: Sequence[int]) -> str:
    out: list[str] = []
    for i, count in enumerate(counts):
        if count < 0:
            raise BackendError(f"negative run-length count {count}")
        x = int(count)
        if i > 2:
            x -= int(counts[i - 2])
        more = True
        while more:
            chunk = x & 0x1F
            x >>= 5
            more = (x != -1) if (chunk & 0x10) else (x != 0)
            if more:
                chunk |= 0x20
            out.append(chr(chunk + 48))
    return "".join(out)


def decode_counts(encoded: str) -> list[int]:
    counts: list[int] = []
    p = 0
    n = len(encoded)
    while p < n:
        x = 0
        k = 0
        more = True
        while more:
            if p >= n:
                raise BackendError("truncated run-length string")
            c = ord(encoded[p]) - 48
            if not (0 <= c <= 63):
                raise BackendError(f"run-length character {encoded[p]!r} out of range")
            x |= (c & 0x1F) << (5 * k)
            more = bool(c & 0x20)
            p += 1
            k += 1
            if not more and (c & 0x10):
                x |= -1 << (5 * k)
        if len(counts) > 2:
            x += counts[-2]
        counts.append(x)
    return counts
