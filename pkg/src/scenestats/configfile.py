"""Flat TOML-style key/value config files mirroring the CLI flags.

Supported syntax, one assignment per line::

    # comment
    threshold = 0.22
    split = "homogeneous"
    jobs = 4
    exclude-crowds = true

Keys use either dashes or underscores. Values parse as booleans
(true/false), integers, floats, or (optionally quoted) strings. Flags
given on the command line always override file values.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from .errors import ConfigurationError


def _parse_value(raw: str, key: str, line_no: int) -> Any:
    raw = raw.strip()
    if not raw:
        raise ConfigurationError(f"line {line_no}: empty value for {key!r}")
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in ("'", '"'):
        return raw[1:-1]
    low = raw.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def load_config(path: str | Path) -> dict[str, Any]:
    """Parse a config file into {underscored_key: value}."""
    out: dict[str, Any] = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            raise ConfigurationError(
                f"line {line_no}: sections are not supported, use flat keys"
            )
        if "=" not in stripped:
            raise ConfigurationError(f"line {line_no}: expected key = value")
        key, _, value = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if not key:
            raise ConfigurationError(f"line {line_no}: empty key")
        out[key] = _parse_value(value, key, line_no)
    return out
