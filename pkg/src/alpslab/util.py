"""Shared helpers: seeding, deterministic CSV/JSON output, config hashing."""

from __future__ import annotations

import hashlib
import json
import os
from typing import Iterable, Sequence

import numpy as np


def rng_from(seed_or_rng) -> np.random.Generator:
    """Accept either a seed (int/None) or an existing Generator."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def spawn_rngs(master_seed: int, n: int, stream: str = "") -> list[np.random.Generator]:
    """Independent per-replica generators from one master seed.

    Replica i draws from SeedSequence((master_seed, hash(stream), i)), so
    growing ``n`` later extends the list without perturbing earlier streams.
    """
    tag = int.from_bytes(hashlib.sha256(stream.encode()).digest()[:4], "big")
    return [
        np.random.default_rng(np.random.SeedSequence((master_seed, tag, i)))
        for i in range(n)
    ]


def fmt(x) -> str:
    """Stable text form for CSV cells (floats via repr-exact %.17g)."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence],
              meta: dict | None = None) -> None:
    """Write rows deterministically; provenance goes in '#'-prefixed lines."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="\n") as f:
        if meta:
            for key in sorted(meta):
                f.write(f"# {key}={meta[key]}\n")
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(fmt(x) for x in row) + "\n")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj) -> str:
    """Short sha256 of the canonical JSON form of a config-like dict."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:16]
