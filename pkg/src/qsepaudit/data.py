"""Synthetic labeled-data oracles.

Two feature distributions over 2-d samples with binary labels:

* ``SEPARABLE_BLOBS`` -- class 0 clusters around (-1, -1) and class 1 around
  (+1, +1), each an isotropic Gaussian with standard deviation ``spread``.
  Labels are recoverable from features (to very high probability) via the
  sign of ``x1 + x2``.
* ``HIDDEN_LABELS`` -- both classes draw from the same Gaussian centered at
  the origin, so features carry zero information about labels.  This is the
  regime under which no prover strategy can beat random label guessing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Distribution(enum.Enum):
    SEPARABLE_BLOBS = "separable-blobs"
    HIDDEN_LABELS = "hidden-labels"


BLOB_CENTERS = {0: np.array([-1.0, -1.0]), 1: np.array([1.0, 1.0])}


@dataclass(frozen=True)
class OracleConfig:
    distribution: Distribution = Distribution.SEPARABLE_BLOBS
    spread: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.distribution, Distribution):
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if not (np.isfinite(self.spread) and self.spread > 0):
            raise ValueError(f"spread must be a finite positive real, got {self.spread}")


def oracle_draw(
    cfg: OracleConfig, n: int, label: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` feature vectors of the given class as an (n, 2) array."""
    if n < 1:
        raise ValueError("need at least one sample")
    if label not in (0, 1):
        raise ValueError(f"label must be 0 or 1, got {label}")
    if cfg.distribution is Distribution.SEPARABLE_BLOBS:
        center = BLOB_CENTERS[label]
    else:
        center = np.zeros(2)
    return center + cfg.spread * rng.standard_normal(size=(n, 2))


def draw_labeled(
    cfg: OracleConfig, n_per_class: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Features (2n, 2) and labels (2n,), class 0 first then class 1."""
    features = np.concatenate(
        [oracle_draw(cfg, n_per_class, 0, rng), oracle_draw(cfg, n_per_class, 1, rng)]
    )
    labels = np.repeat([0, 1], n_per_class)
    return features, labels


def blob_label(x) -> int:
    """Ground-truth decision rule for SEPARABLE_BLOBS features."""
    return 1 if float(x[0]) + float(x[1]) > 0 else 0
