"""Locate bundled fixture data, honoring the DESIGNLAB_FIXTURES override."""

from __future__ import annotations

import os
from pathlib import Path

from .errors import FixtureError


def fixture_path(*parts: str) -> Path:
    base = os.environ.get("DESIGNLAB_FIXTURES")
    root = Path(base) if base else Path(__file__).parent / "fixtures"
    p = root.joinpath(*parts)
    if not p.is_file():
        raise FixtureError(f"fixture not found: {p}")
    return p
