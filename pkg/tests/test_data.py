"""Synthetic oracle distributions: geometry, label information, determinism."""

import numpy as np
import pytest

from qsepaudit.data import (
    BLOB_CENTERS,
    Distribution,
    OracleConfig,
    blob_label,
    draw_labeled,
    oracle_draw,
)
from qsepaudit.rng import child_rng


def test_config_validation():
    OracleConfig(Distribution.HIDDEN_LABELS, spread=1.0, seed=3)
    with pytest.raises(ValueError):
        OracleConfig(distribution="blobs")
    with pytest.raises(ValueError):
        OracleConfig(spread=0.0)
    with pytest.raises(ValueError):
        OracleConfig(spread=float("nan"))


def test_blob_draw_statistics():
    cfg = OracleConfig(Distribution.SEPARABLE_BLOBS, spread=0.3, seed=0)
    for label in (0, 1):
        xs = oracle_draw(cfg, 20000, label, child_rng(0, "t", label))
        assert xs.shape == (20000, 2)
        # sample mean within 5 sigma/sqrt(n) of the blob center
        assert np.allclose(xs.mean(axis=0), BLOB_CENTERS[label], atol=5 * 0.3 / np.sqrt(20000))
        assert np.allclose(xs.std(axis=0), 0.3, atol=0.02)


def test_blob_label_matches_draw_class():
    cfg = OracleConfig(Distribution.SEPARABLE_BLOBS, spread=0.3, seed=0)
    for label in (0, 1):
        xs = oracle_draw(cfg, 5000, label, child_rng(1, "t", label))
        hits = sum(blob_label(x) == label for x in xs)
        # centers at distance sqrt(2) from the boundary: misdraws are ~1e-6
        assert hits >= 4995


def test_hidden_labels_carry_no_feature_information():
    cfg = OracleConfig(Distribution.HIDDEN_LABELS, spread=1.0, seed=0)
    a = oracle_draw(cfg, 30000, 0, child_rng(2, "a"))
    b = oracle_draw(cfg, 30000, 1, child_rng(2, "b"))
    # same law for both classes: means and covariances agree
    assert np.allclose(a.mean(axis=0), b.mean(axis=0), atol=0.03)
    assert np.allclose(np.cov(a.T), np.cov(b.T), atol=0.05)
    assert np.allclose(a.mean(axis=0), [0, 0], atol=0.03)


def test_draw_labeled_layout():
    cfg = OracleConfig(Distribution.SEPARABLE_BLOBS, spread=0.1, seed=0)
    features, labels = draw_labeled(cfg, 10, child_rng(3, "d"))
    assert features.shape == (20, 2)
    assert np.array_equal(labels, np.repeat([0, 1], 10))
    assert all(blob_label(x) == 0 for x in features[:10])
    assert all(blob_label(x) == 1 for x in features[10:])


def test_draws_deterministic_in_rng():
    cfg = OracleConfig(Distribution.SEPARABLE_BLOBS, spread=0.3, seed=0)
    a = oracle_draw(cfg, 50, 0, child_rng(4, "x"))
    b = oracle_draw(cfg, 50, 0, child_rng(4, "x"))
    assert np.array_equal(a, b)


def test_draw_validation():
    cfg = OracleConfig()
    with pytest.raises(ValueError):
        oracle_draw(cfg, 0, 0, child_rng(0, "x"))
    with pytest.raises(ValueError):
        oracle_draw(cfg, 5, 2, child_rng(0, "x"))
