"""Named random streams derived from one integer seed."""

from __future__ import annotations

import hashlib
import random


def stream(seed: int, name: str) -> random.Random:
    """Independent, reproducible generator for ``(seed, name)``."""
    digest = hashlib.sha256(f"{int(seed)}/{name}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
