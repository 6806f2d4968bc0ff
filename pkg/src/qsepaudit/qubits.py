"""Exact single-qubit numerics: states, densities, Bloch geometry, MUB
measurements, tomographic reconstruction, and state distances.

Conventions used throughout:

* pure states are length-2 complex ``ndarray`` amplitudes over ``{|0>, |1>}``,
* density matrices are 2x2 complex Hermitian ``ndarray`` with unit trace,
* Bloch vectors are length-3 float ``ndarray`` with ``rho = (I + r.sigma)/2``.

The three mutually unbiased bases of a qubit are the standard basis
``{|0>, |1>}``, the Hadamard basis ``{|+>, |->}`` and the circular basis
``{|+i>, |-i>}``.  Outcome 0 always refers to the first (plus) state of the
measured basis, so the plus-outcome probabilities in the three bases are
``(1+r_z)/2``, ``(1+r_x)/2`` and ``(1+r_y)/2``.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

ATOL_INVARIANT = 1e-9
ATOL_EXACT = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

_SQRT2_INV = 1 / math.sqrt(2)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([_SQRT2_INV, _SQRT2_INV], dtype=complex)
KET_MINUS = np.array([_SQRT2_INV, -_SQRT2_INV], dtype=complex)
KET_PLUS_I = np.array([_SQRT2_INV, _SQRT2_INV * 1j], dtype=complex)
KET_MINUS_I = np.array([_SQRT2_INV, -_SQRT2_INV * 1j], dtype=complex)


class Basis(enum.Enum):
    """One of the three single-qubit mutually unbiased measurement bases."""

    STANDARD = "standard"
    HADAMARD = "hadamard"
    CIRCULAR = "circular"

    @property
    def plus_state(self) -> np.ndarray:
        return _PLUS_STATE[self]


_PLUS_STATE = {
    Basis.STANDARD: KET_0,
    Basis.HADAMARD: KET_PLUS,
    Basis.CIRCULAR: KET_PLUS_I,
}


class ProbTriple(NamedTuple):
    """Plus-outcome frequencies in the standard, Hadamard and circular bases."""

    p0: float
    p_plus: float
    p_plus_i: float


def pure_state(alpha: complex, beta: complex) -> np.ndarray:
    """Amplitude pair as a validated pure qubit state."""
    psi = np.array([alpha, beta], dtype=complex)
    if not (np.all(np.isfinite(psi.real)) and np.all(np.isfinite(psi.imag))):
        raise ValueError("state amplitudes must be finite")
    norm_sq = float(np.real(np.vdot(psi, psi)))
    if abs(norm_sq - 1.0) > ATOL_INVARIANT:
        raise ValueError(f"state is not normalized: |alpha|^2+|beta|^2 = {norm_sq}")
    return psi


def density_of(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| of a pure state."""
    return np.outer(psi, psi.conj())


def haar_random_state(rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure qubit state."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator) -> np.ndarray:
    """Random mixed state, uniform over the Bloch ball."""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    radius = rng.random() ** (1.0 / 3.0)
    return bloch_to_density(radius * direction)


def density_eigenvalues(rho: np.ndarray) -> tuple[float, float]:
    """Eigenvalues of a 2x2 Hermitian trace-1 matrix, in closed form."""
    half_trace = 0.5 * float(np.real(rho[0, 0] + rho[1, 1]))
    half_gap = 0.5 * float(np.real(rho[0, 0] - rho[1, 1]))
    shift = math.sqrt(half_gap**2 + abs(rho[0, 1]) ** 2)
    return half_trace - shift, half_trace + shift


def validate_density(rho: np.ndarray, atol: float = ATOL_INVARIANT) -> np.ndarray:
    """Check the density-matrix invariants, returning ``rho`` unchanged.

    Raises ``ValueError`` unless ``rho`` is a finite 2x2 matrix that is
    Hermitian, has unit trace, and is positive semidefinite up to ``atol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"density matrix must be 2x2, got shape {rho.shape}")
    if not (np.all(np.isfinite(rho.real)) and np.all(np.isfinite(rho.imag))):
        raise ValueError("density matrix entries must be finite")
    if abs(rho[1, 0] - np.conj(rho[0, 1])) > ATOL_EXACT or \
            abs(rho[0, 0].imag) > ATOL_EXACT or abs(rho[1, 1].imag) > ATOL_EXACT:
        raise ValueError("density matrix is not Hermitian")
    trace = float(np.real(rho[0, 0] + rho[1, 1]))
    if abs(trace - 1.0) > atol:
        raise ValueError(f"density matrix trace is {trace}, expected 1")
    low, _ = density_eigenvalues(rho)
    if low < -atol:
        raise ValueError(f"density matrix has negative eigenvalue {low}")
    return rho


def bloch_to_density(r: np.ndarray) -> np.ndarray:
    """Density matrix (I + r.sigma)/2 of a Bloch vector inside the unit ball."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise ValueError("Bloch vector must be 3 finite reals")
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + ATOL_INVARIANT:
        raise ValueError(f"Bloch vector has norm {norm} > 1")
    rx, ry, rz = r
    return 0.5 * np.array(
        [[1.0 + rz, rx - 1j * ry], [rx + 1j * ry, 1.0 - rz]], dtype=complex
    )


def density_to_bloch(rho: np.ndarray) -> np.ndarray:
    """Bloch vector (tr(rho sx), tr(rho sy), tr(rho sz)) of a density matrix."""
    return np.array(
        [
            2.0 * float(np.real(rho[1, 0])),
            2.0 * float(np.imag(rho[1, 0])),
            float(np.real(rho[0, 0] - rho[1, 1])),
        ]
    )


def born_probability(rho: np.ndarray, basis: Basis) -> float:
    """Probability of the plus outcome when measuring ``rho`` in ``basis``.

    Equals tr(rho P+) with P+ the projector onto |0>, |+> or |+i>; evaluated
    from the matrix entries directly and clamped to [0, 1] against roundoff.
    """
    if basis is Basis.STANDARD:
        p = float(np.real(rho[0, 0]))
    elif basis is Basis.HADAMARD:
        p = 0.5 + float(np.real(rho[1, 0]))
    else:
        p = 0.5 + float(np.imag(rho[1, 0]))
    return min(max(p, 0.0), 1.0)


def sample_outcome(rho: np.ndarray, basis: Basis, rng: np.random.Generator) -> int:
    """Destructively measure ``rho`` in ``basis``: 0 for the plus outcome.

    Consumes one draw from ``rng``; callers own the stream and must treat the
    measured state copy as gone.
    """
    return 0 if rng.random() < born_probability(rho, basis) else 1


def exact_probs(rho: np.ndarray) -> ProbTriple:
    """Noise-free plus-outcome probabilities of ``rho`` in the three MUBs."""
    return ProbTriple(
        born_probability(rho, Basis.STANDARD),
        born_probability(rho, Basis.HADAMARD),
        born_probability(rho, Basis.CIRCULAR),
    )


def reconstruct_density(probs: ProbTriple) -> np.ndarray:
    """Linear-inversion tomography from MUB plus-outcome frequencies.

    Forms the Bloch vector ``(2 p_plus - 1, 2 p_plus_i - 1, 2 p0 - 1)``.
    Sampling noise can push the estimate outside the unit ball, in which case
    it is projected radially back onto the sphere so the result is always a
    valid (positive semidefinite) density matrix.
    """
    for name, value in zip(probs._fields, probs):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"probability {name}={value} outside [0, 1]")
    r = np.array(
        [2.0 * probs.p_plus - 1.0, 2.0 * probs.p_plus_i - 1.0, 2.0 * probs.p0 - 1.0]
    )
    norm = float(np.linalg.norm(r))
    if norm > 1.0:
        r /= norm
    return bloch_to_density(r)


def _det2(rho: np.ndarray) -> float:
    return float(np.real(rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]))


def fidelity(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Uhlmann fidelity of two qubit density matrices.

    Uses the qubit closed form ``tr(ab) + 2 sqrt(det a det b)``, which agrees
    with the general ``(tr sqrt(sqrt(a) b sqrt(a)))^2`` definition exactly in
    dimension two.  Clamped to [0, 1].
    """
    cross = float(np.real(np.vdot(rho_b, rho_a)))
    dets = max(_det2(rho_a), 0.0) * max(_det2(rho_b), 0.0)
    return min(max(cross + 2.0 * math.sqrt(dets), 0.0), 1.0)


def bures_angle(f: float) -> float:
    """Bures angle arccos(sqrt(F)) in [0, pi/2] for a fidelity value."""
    if not math.isfinite(f):
        raise ValueError("fidelity must be finite")
    return math.acos(math.sqrt(min(max(f, 0.0), 1.0)))


def trace_distance(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Trace distance: half the sum of absolute eigenvalues of the difference."""
    eigs = np.linalg.eigvalsh(rho_a - rho_b)
    return 0.5 * float(np.sum(np.abs(eigs)))


def hs_distance(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Hilbert-Schmidt distance sqrt(tr(a^2) + tr(b^2) - 2 tr(ab))."""
    squared = (
        float(np.real(np.vdot(rho_a, rho_a)))
        + float(np.real(np.vdot(rho_b, rho_b)))
        - 2.0 * float(np.real(np.vdot(rho_b, rho_a)))
    )
    return math.sqrt(max(squared, 0.0))


def overlap(a: np.ndarray, b: np.ndarray) -> float:
    """Squared inner product |<a|b>|^2 of two pure states."""
    return min(abs(np.vdot(a, b)) ** 2, 1.0)
