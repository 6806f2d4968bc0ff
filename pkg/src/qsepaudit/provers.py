"""Prover-side implementations of the verification interaction.

A prover answers each feature request with one qubit state (as a density
matrix) and never receives labels.  Besides the honest embedding prover there
are synthetic fixed-angle provers for calibration experiments, a family of
cheating strategies for soundness testing, and a depolarizing-noise wrapper.

Streaming provers answer requests one by one.  A prover with ``batched =
True`` must first see the whole request schedule via :meth:`Prover.prepare`;
the protocol supports this two-phase replay so the strongest clairvoyant
clustering adversary can be expressed.
"""

from __future__ import annotations

import cmath
import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.cluster.vq import kmeans2

from .embedding import embed, validate_params
from .qubits import IDENTITY, KET_0, KET_1, density_of, haar_random_state
from .rng import child_rng


class Prover(ABC):
    """Maps (request index, feature vector) to one qubit density matrix."""

    batched = False

    @abstractmethod
    def respond(self, index: int, x: np.ndarray) -> np.ndarray:
        """Return the prepared state for request ``index`` with features ``x``."""

    def prepare(self, features: np.ndarray) -> None:
        """Receive the full (2N, 2) request schedule before any respond call.

        Only meaningful for ``batched`` provers; the default is a no-op.
        """


class HonestProver(Prover):
    """Applies the claimed embedding circuit to every request, statelessly."""

    def __init__(self, theta: np.ndarray):
        self.theta = validate_params(theta)

    def respond(self, index, x):
        return density_of(embed(x, self.theta))


def honest_prover(theta: np.ndarray) -> HonestProver:
    return HonestProver(theta)


@dataclass(frozen=True)
class SyntheticProverConfig:
    target_angle: float
    perturb_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.target_angle) and 0.0 <= self.target_angle <= math.pi / 2):
            raise ValueError(f"target angle must lie in [0, pi/2], got {self.target_angle}")
        if not (np.isfinite(self.perturb_sigma) and self.perturb_sigma >= 0.0):
            raise ValueError(f"perturbation sigma must be >= 0, got {self.perturb_sigma}")


def _orthogonal_state(psi: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(psi[1]), np.conj(psi[0])])


def _rotate(ket: np.ndarray, angle: float, axis: np.ndarray) -> np.ndarray:
    # exp(-i angle (axis . sigma) / 2) applied to ket
    nx, ny, nz = axis
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    u = np.array(
        [[c - 1j * s * nz, -s * (ny + 1j * nx)], [s * (ny - 1j * nx), c + 1j * s * nz]]
    )
    return u @ ket


class SyntheticAngleProver(Prover):
    """Two reference pure states at an exact Bures angle, with optional jitter.

    The first reference is the computational state |0>; the second lies at
    ``target_angle`` from it within a plane whose azimuth is drawn from the
    config seed, so at target pi/2 the references are exactly |0> and |1> up
    to phase.  Anchoring the pair to the measurement axes keeps the plug-in
    angle estimator's orthogonality bias at its minimum, which is what the
    calibration and completeness sweeps are specified against.  Each request
    is classified by ``label_fn`` (ground truth supplied by the experiment
    harness, never taken from the verifier) and answered with that class's
    reference, rotated by |Normal(0, perturb_sigma)| about a random axis.
    """

    def __init__(self, cfg: SyntheticProverConfig, label_fn: Callable[[np.ndarray], int]):
        self.cfg = cfg
        self.label_fn = label_fn
        rng = child_rng(cfg.seed, "references")
        psi = KET_0.astype(np.complex128)
        plane_phase = cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        phi = (
            math.cos(cfg.target_angle) * psi
            + plane_phase * math.sin(cfg.target_angle) * _orthogonal_state(psi)
        )
        self.references = (psi, phi)
        self._perturb_rng = child_rng(cfg.seed, "perturbations")

    def respond(self, index, x):
        ket = self.references[self.label_fn(x)]
        if self.cfg.perturb_sigma > 0.0:
            rng = self._perturb_rng
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            angle = abs(rng.normal(0.0, self.cfg.perturb_sigma))
            ket = _rotate(ket, angle, axis)
        return density_of(ket)


def synthetic_angle_prover(
    cfg: SyntheticProverConfig, label_fn: Callable[[np.ndarray], int]
) -> SyntheticAngleProver:
    return SyntheticAngleProver(cfg, label_fn)


class Strategy(enum.Enum):
    """Cheating strategies for soundness experiments."""

    RANDOM_ASSIGN = "random-assign"
    CONSTANT_STATE = "constant-state"
    CLUSTER_GUESS = "cluster-guess"


class RandomAssignProver(Prover):
    """Flips a fair coin per request and answers |0><0| or |1><1|."""

    def __init__(self, seed: int):
        self._rng = child_rng(seed, "coins")

    def respond(self, index, x):
        return density_of(KET_0 if self._rng.random() < 0.5 else KET_1)


class ConstantStateProver(Prover):
    """Answers every request with the same Haar-random pure state."""

    def __init__(self, seed: int):
        self._rho = density_of(haar_random_state(child_rng(seed, "constant")))

    def respond(self, index, x):
        return self._rho


class ClusterGuessProver(Prover):
    """Buffers the whole schedule, 2-means clusters it, answers by cluster.

    The strongest classical guessing adversary considered here: it sees all
    2N feature vectors before committing to any state, so it requires the
    protocol's batched-replay mode.
    """

    batched = True

    def __init__(self, seed: int):
        self._seed = seed
        self._assignments = None

    def prepare(self, features):
        features = np.asarray(features, dtype=float)
        _, labels = kmeans2(
            features, 2, minit="++", seed=child_rng(self._seed, "kmeans")
        )
        self._assignments = labels

    def respond(self, index, x):
        if self._assignments is None:
            raise RuntimeError(
                "ClusterGuessProver answers only in batched-replay mode; "
                "call prepare() with the full schedule first"
            )
        return density_of(KET_0 if self._assignments[index] == 0 else KET_1)


_STRATEGY_PROVERS = {
    Strategy.RANDOM_ASSIGN: RandomAssignProver,
    Strategy.CONSTANT_STATE: ConstantStateProver,
    Strategy.CLUSTER_GUESS: ClusterGuessProver,
}


def adversarial_prover(strategy: Strategy, seed: int) -> Prover:
    """Instantiate the cheating prover for ``strategy``."""
    try:
        return _STRATEGY_PROVERS[Strategy(strategy)](seed)
    except KeyError:
        raise ValueError(f"unknown adversary strategy {strategy!r}") from None


class DepolarizingProver(Prover):
    """Mixes every inner response with I/2: rho -> (1-p) rho + p I/2."""

    def __init__(self, inner: Prover, p: float):
        if not (np.isfinite(p) and 0.0 <= p <= 1.0):
            raise ValueError(f"depolarizing probability must lie in [0, 1], got {p}")
        self.inner = inner
        self.p = p
        self.batched = inner.batched

    def prepare(self, features):
        self.inner.prepare(features)

    def respond(self, index, x):
        rho = self.inner.respond(index, x)
        return (1.0 - self.p) * rho + self.p * 0.5 * IDENTITY


def depolarize_wrap(inner: Prover, p: float) -> DepolarizingProver:
    return DepolarizingProver(inner, p)
