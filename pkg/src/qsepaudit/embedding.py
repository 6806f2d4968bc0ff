"""Trainable single-qubit embedding of 2-d features.

The circuit applies, to |0>, ``L`` layers of the form

    RY(x1) . RZ(x2) . RY(theta[2l]) . RZ(theta[2l+1])

with RY(phi) = exp(-i phi sy/2) and RZ(phi) = exp(-i phi sz/2), so the
parameter vector has length ``2L``.  Training minimizes the separation cost

    1 - 0.5 * (-2*ab + aa + bb)

where ``aa``/``bb`` are the mean squared overlaps over all ordered in-class
state pairs (diagonal included, so ``aa`` equals the ensemble purity) and
``ab`` is the mean squared overlap across classes.  Gradients come from
central finite differences and updates from RMSProp.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .data import OracleConfig, oracle_draw
from .qubits import bures_angle, fidelity
from .rng import child_rng

FD_STEP = 1e-3
RMSPROP_DECAY = 0.9
RMSPROP_EPS = 1e-8
INIT_SCALE = 0.1


@dataclass(frozen=True)
class TrainConfig:
    layers: int = 3
    step_size: float = 0.01
    iterations: int = 500
    batch_a: int = 8
    batch_b: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("need at least one layer")
        if not (np.isfinite(self.step_size) and self.step_size > 0):
            raise ValueError(f"step size must be positive, got {self.step_size}")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.batch_a < 2 or self.batch_b < 2:
            raise ValueError("batch sizes must be at least 2")


class TrainResult(NamedTuple):
    params: np.ndarray
    history: np.ndarray


def validate_params(theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size < 2 or theta.size % 2 != 0:
        raise ValueError(f"parameter vector must have even length >= 2, got {theta.shape}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameters must be finite")
    return theta


def init_params(layers: int, rng: np.random.Generator) -> np.ndarray:
    """Initial angles, uniform in (-0.1, 0.1); small to stay off flat regions."""
    return rng.uniform(-INIT_SCALE, INIT_SCALE, size=2 * layers)


def embed_states(xs: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Embed feature rows ``xs`` (n, 2) into pure states, returned as (n, 2).

    Fully elementwise so each row is computed identically regardless of how
    the batch is split.
    """
    theta = validate_params(theta)
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2 or xs.shape[1] != 2:
        raise ValueError(f"features must be an (n, 2) array, got {xs.shape}")
    x1 = xs[:, 0]
    x2 = xs[:, 1]
    c1, d1 = np.cos(0.5 * x1), np.sin(0.5 * x1)
    phase2 = np.exp(-0.5j * x2)
    s0 = np.ones(len(xs), dtype=complex)
    s1 = np.zeros(len(xs), dtype=complex)
    for layer in range(theta.size // 2):
        a, b = theta[2 * layer], theta[2 * layer + 1]
        fb = cmath.exp(-0.5j * b)
        s0, s1 = s0 * fb, s1 * np.conj(fb)
        ca, da = math.cos(0.5 * a), math.sin(0.5 * a)
        s0, s1 = ca * s0 - da * s1, da * s0 + ca * s1
        s0, s1 = s0 * phase2, s1 * np.conj(phase2)
        s0, s1 = c1 * s0 - d1 * s1, d1 * s0 + c1 * s1
    return np.stack([s0, s1], axis=1)


def embed(x, theta: np.ndarray) -> np.ndarray:
    """Embed a single feature vector into a pure qubit state."""
    return embed_states(np.reshape(np.asarray(x, dtype=float), (1, 2)), theta)[0]


def ensemble_density(states: np.ndarray) -> np.ndarray:
    """Equal-weight mixture of the pure-state projectors of ``states``."""
    if len(states) == 0:
        raise ValueError("ensemble needs at least one state")
    return np.einsum("ni,nj->ij", states, states.conj()) / len(states)


def _mean_sq_overlap(
    states_a: np.ndarray,
    states_b: np.ndarray,
    shots: int | None,
    rng: np.random.Generator | None,
) -> float:
    gram = np.abs(states_a @ states_b.conj().T) ** 2
    if shots is not None:
        # Bernoulli-sampled overlaps, as a hardware-style estimate per pair.
        gram = rng.binomial(shots, np.clip(gram, 0.0, 1.0)) / shots
    return float(np.mean(gram))


def cost(
    theta: np.ndarray,
    batch_a: np.ndarray,
    batch_b: np.ndarray,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Separation cost 1 - 0.5*(-2*ab + aa + bb) of two feature batches.

    With ``shots`` set, every squared overlap is replaced by a Bernoulli
    estimate from that many draws of ``rng``.
    """
    if len(batch_a) == 0 or len(batch_b) == 0:
        raise ValueError("batches must be non-empty")
    if shots is not None and rng is None:
        raise ValueError("shot sampling requires an rng")
    states_a = embed_states(batch_a, theta)
    states_b = embed_states(batch_b, theta)
    aa = _mean_sq_overlap(states_a, states_a, shots, rng)
    bb = _mean_sq_overlap(states_b, states_b, shots, rng)
    ab = _mean_sq_overlap(states_a, states_b, shots, rng)
    return 1.0 - 0.5 * (-2.0 * ab + aa + bb)


def cost_gradient(
    theta: np.ndarray,
    batch_a: np.ndarray,
    batch_b: np.ndarray,
    step: float = FD_STEP,
) -> np.ndarray:
    """Central finite-difference gradient of the cost in each parameter."""
    theta = validate_params(theta)
    grad = np.empty_like(theta)
    for k in range(theta.size):
        shifted = theta.copy()
        shifted[k] = theta[k] + step
        high = cost(shifted, batch_a, batch_b)
        shifted[k] = theta[k] - step
        low = cost(shifted, batch_a, batch_b)
        grad[k] = (high - low) / (2.0 * step)
    return grad


def rmsprop_step(
    theta: np.ndarray,
    grad: np.ndarray,
    accum: np.ndarray,
    step_size: float,
) -> tuple[np.ndarray, np.ndarray]:
    """One RMSProp update; returns the new parameters and accumulator."""
    theta = np.asarray(theta, dtype=float)
    grad = np.asarray(grad, dtype=float)
    accum = np.asarray(accum, dtype=float)
    if not (theta.shape == grad.shape == accum.shape):
        raise ValueError("parameter, gradient and accumulator shapes must agree")
    accum = RMSPROP_DECAY * accum + (1.0 - RMSPROP_DECAY) * grad**2
    theta = theta - step_size * grad / (np.sqrt(accum) + RMSPROP_EPS)
    return theta, accum


def train(
    cfg: TrainConfig,
    oracle: OracleConfig,
    callback: Callable[[int, np.ndarray, float], None] | None = None,
) -> TrainResult:
    """Train the embedding on fresh oracle batches each iteration.

    Returns the final parameters and the per-iteration cost trace (evaluated
    on that iteration's batches, before the update).  Fully reproducible from
    ``cfg.seed``.  ``callback(iteration, theta, cost)`` runs after each step.
    """
    theta = init_params(cfg.layers, child_rng(cfg.seed, "init"))
    accum = np.zeros_like(theta)
    batch_rng = child_rng(cfg.seed, "batches")
    history = []
    for iteration in range(cfg.iterations):
        batch_a = oracle_draw(oracle, cfg.batch_a, 0, batch_rng)
        batch_b = oracle_draw(oracle, cfg.batch_b, 1, batch_rng)
        value = cost(theta, batch_a, batch_b)
        history.append(value)
        grad = cost_gradient(theta, batch_a, batch_b)
        theta, accum = rmsprop_step(theta, grad, accum, cfg.step_size)
        if callback is not None:
            callback(iteration, theta, value)
    return TrainResult(theta, np.array(history))


def class_densities(
    theta: np.ndarray, features: np.ndarray, labels: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Exact ensemble densities of the class-0 and class-1 embeddings."""
    labels = np.asarray(labels)
    if not (np.any(labels == 0) and np.any(labels == 1)):
        raise ValueError("need samples from both classes")
    features = np.asarray(features, dtype=float)
    rho = ensemble_density(embed_states(features[labels == 0], theta))
    sigma = ensemble_density(embed_states(features[labels == 1], theta))
    return rho, sigma


def true_angle(theta: np.ndarray, features: np.ndarray, labels: np.ndarray) -> float:
    """Bures angle between the exact class ensembles of a labeled sample."""
    rho, sigma = class_densities(theta, features, labels)
    return bures_angle(fidelity(rho, sigma))
