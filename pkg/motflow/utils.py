"""Small helpers shared across stages: digests, canonical JSON, file loading."""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path
from typing import Any

from motflow.errors import IoFailure


def stable_digest(text: str, length: int = 16) -> str:
    """Return the first *length* hex characters of the SHA-256 of *text*."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:length]


def file_digest(content: bytes) -> str:
    """Full SHA-256 hex digest of a byte string."""
    return hashlib.sha256(content).hexdigest()


def canonical_json(data: Any, indent: int = 4) -> str:
    """Serialize *data* deterministically (insertion-ordered keys, LF, no ASCII escaping)."""
    return json.dumps(data, indent=indent, ensure_ascii=False)


def slugify(value: str, default: str = "mot-application") -> str:
    """Lower-case, dash-separated identifier usable as an npm/serverless name."""
    slug = re.sub(r"[^a-z0-9]+", "-", value.lower()).strip("-")
    return slug or default


def read_json_file(path: str | Path, *, what: str = "file") -> Any:
    """Load JSON from *path*, mapping OS errors to :class:`IoFailure`.

    ``json.JSONDecodeError`` is left to the caller, which knows which domain
    error a syntax problem maps to.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise IoFailure(f"Cannot read {what} '{path}': {exc.strerror or exc}") from exc


def write_text_file(path: str | Path, text: str) -> None:
    """Write UTF-8 text with LF line endings, creating parent directories."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as exc:
        raise IoFailure(f"Cannot write '{target}': {exc.strerror or exc}") from exc
