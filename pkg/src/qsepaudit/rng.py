"""Deterministic seed-tree utilities.

Every stochastic component in this package draws from a ``numpy`` Generator
obtained through :func:`child_rng`.  Child streams are derived from a master
seed and a label path via ``SeedSequence(master, spawn_key=path)``, with
string labels mixed to 64-bit integers through SHA-256.  Two different label
paths therefore yield statistically independent, individually replayable
streams, which is what lets experiments run trials in any order (or in
parallel) and still produce identical output.
"""

from __future__ import annotations

import hashlib

import numpy as np

_U64 = (1 << 64) - 1


def _label_to_int(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & _U64
    digest = hashlib.sha256(str(label).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def child_seed(master: int, *path) -> np.random.SeedSequence:
    """SeedSequence for the stream identified by ``path`` under ``master``."""
    key = tuple(_label_to_int(p) for p in path)
    return np.random.SeedSequence(int(master) & _U64, spawn_key=key)


def child_rng(master: int, *path) -> np.random.Generator:
    """Seeded PCG64 Generator for the stream identified by ``path``."""
    return np.random.Generator(np.random.PCG64(child_seed(master, *path)))


def derive_seed(master: int, *path) -> int:
    """Deterministic 64-bit integer seed for the stream named by ``path``.

    Used where a component takes a plain integer seed in its config (oracle,
    prover, protocol) rather than a Generator, so nested experiments can hand
    out independent sub-seeds from one master seed.
    """
    words = child_seed(master, *path).generate_state(2, np.uint32)
    return (int(words[0]) << 32) | int(words[1])
