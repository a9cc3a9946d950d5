"""Load the bundled classification table of irreducible root systems."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Optional

_DATA_DIR = Path(__file__).parent / "data"
_CLASSIFICATION_FILE = _DATA_DIR / "classification.json"


@lru_cache(maxsize=None)
def load_classification(path: Optional[Path] = None) -> dict:
    """Load the classification table.

    Args:
        path: Custom path to a classification JSON file.

    Returns:
        Dict family -> rank (as string) -> {"positive_roots", "degrees"}.
    """
    source = path or _CLASSIFICATION_FILE
    with open(source) as f:
        table = json.load(f)
    table.pop("_comment", None)
    return table


def classified_entry(family: str, rank: int) -> Optional[dict]:
    """Return the table row for one irreducible type, or None if absent."""
    return load_classification().get(family, {}).get(str(rank))


def supported_ranks(family: str) -> list[int]:
    """Return sorted ranks available for ``family``."""
    return sorted(int(r) for r in load_classification().get(family, {}))


def list_families() -> list[str]:
    return sorted(load_classification())
