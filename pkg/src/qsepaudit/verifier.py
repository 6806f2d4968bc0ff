"""The limited verifier: label-blind protocol orchestration and the verdict.

One protocol run draws N feature vectors per group, pre-assigns each drawn
sample one of the three MUBs (N/3 each, remainder round-robin), sends all 2N
feature vectors to the prover in a uniformly random interleaved order without
labels, measures every returned qubit in its pre-assigned basis, reconstructs
one density matrix per group from the outcome frequencies, and accepts or
rejects the claimed Bures-angle separation.  Every random choice comes from a
stream derived from the relevant config seed, so runs are replayable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .data import OracleConfig, oracle_draw
from .provers import Prover
from .qubits import (
    Basis,
    ProbTriple,
    bures_angle,
    fidelity,
    reconstruct_density,
    sample_outcome,
)
from .rng import child_rng

ATOL_CLAIM = 1e-12
_BASIS_ORDER = (Basis.STANDARD, Basis.HADAMARD, Basis.CIRCULAR)


@dataclass(frozen=True)
class ProtocolConfig:
    n_per_group: int
    gamma: float = 0.1
    claimed_angle: float = math.pi / 2
    seed: int = 0

    def __post_init__(self):
        if self.n_per_group < 3:
            raise ValueError("need at least 3 samples per group")
        if not (np.isfinite(self.gamma) and 0.0 < self.gamma < math.pi / 2):
            raise ValueError(f"gamma must lie in (0, pi/2), got {self.gamma}")
        if not (np.isfinite(self.claimed_angle) and 0.0 <= self.claimed_angle <= math.pi / 2):
            raise ValueError(f"claimed angle must lie in [0, pi/2], got {self.claimed_angle}")


def suggested_gamma(n_per_group: int) -> float:
    """Threshold margin guideline max(0.05, 3*sqrt(3/N)) from binomial error."""
    return max(0.05, 3.0 * math.sqrt(3.0 / n_per_group))


class Flag(Enum):
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"


class SendEvent(NamedTuple):
    """One feature vector as sent to the prover.  Deliberately label-free."""

    request_index: int
    x1: float
    x2: float


class MeasurementRecord(NamedTuple):
    request_index: int
    group: int
    basis: Basis
    outcome: int


@dataclass(frozen=True)
class Verdict:
    flag: Flag
    theta_hat: float
    fidelity_hat: float
    rho_psi: np.ndarray
    rho_phi: np.ndarray


@dataclass
class Transcript:
    config: ProtocolConfig
    sends: list[SendEvent]
    records: list[MeasurementRecord]
    probs_psi: ProbTriple = None
    probs_phi: ProbTriple = None
    rho_psi: np.ndarray = None
    rho_phi: np.ndarray = None
    verdict: Verdict = None


def allocate_bases(n: int, rng: np.random.Generator) -> list[Basis]:
    """Random basis assignment for ``n`` samples of one group.

    floor(n/3) samples per basis; any remainder goes round-robin in the order
    standard, Hadamard, circular.  The assignment order is a uniform shuffle.
    """
    if n < 3:
        raise ValueError("need at least 3 samples to cover all three bases")
    counts = [n // 3] * 3
    for i in range(n % 3):
        counts[i] += 1
    multiset = [basis for basis, c in zip(_BASIS_ORDER, counts) for _ in range(c)]
    return [multiset[i] for i in rng.permutation(n)]


def interleave_sends(
    samples_psi: np.ndarray, samples_phi: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniformly random interleaving of the two groups' samples.

    Returns ``(features, groups, positions)``: the (2N, 2) feature array in
    send order, and for each send the group (0 for psi, 1 for phi) and the
    sample's position within its group.  The group/position maps stay with
    the verifier; the prover sees only ``features``.
    """
    if len(samples_psi) == 0 or len(samples_phi) == 0:
        raise ValueError("both groups must be non-empty")
    stacked = np.concatenate([samples_psi, samples_phi])
    groups = np.repeat([0, 1], [len(samples_psi), len(samples_phi)])
    positions = np.concatenate([np.arange(len(samples_psi)), np.arange(len(samples_phi))])
    order = rng.permutation(len(stacked))
    return stacked[order], groups[order], positions[order]


def estimate_probs(records: Sequence[MeasurementRecord]) -> ProbTriple:
    """Per-basis plus-outcome frequencies of one group's records.

    Normalizes by the actual per-basis counts, which reduces to the 3/N rule
    when N is divisible by three.
    """
    zeros = {basis: 0 for basis in _BASIS_ORDER}
    totals = {basis: 0 for basis in _BASIS_ORDER}
    for record in records:
        totals[record.basis] += 1
        if record.outcome == 0:
            zeros[record.basis] += 1
    for basis in _BASIS_ORDER:
        if totals[basis] == 0:
            raise ValueError(f"no records measured in the {basis.value} basis")
    return ProbTriple(
        *(zeros[basis] / totals[basis] for basis in _BASIS_ORDER)
    )


def reconstruct_from_records(records: Sequence[MeasurementRecord]) -> np.ndarray:
    """Density estimate from one group's measurement records."""
    return reconstruct_density(estimate_probs(records))


def decide(theta_hat: float, cfg: ProtocolConfig) -> Flag:
    """Accept/reject rule for the estimated angle against the claim.

    A claim of pi/2 is the orthogonality claim: accept iff theta_hat is at
    least pi/2 - gamma.  Any other claim is two-sided: accept iff the
    estimate lies within gamma of it.  Boundaries are inclusive.
    """
    if not (-ATOL_CLAIM <= theta_hat <= math.pi / 2 + ATOL_CLAIM):
        raise ValueError(f"estimated angle {theta_hat} outside [0, pi/2]")
    if math.isclose(cfg.claimed_angle, math.pi / 2, rel_tol=0.0, abs_tol=ATOL_CLAIM):
        accepted = theta_hat >= math.pi / 2 - cfg.gamma
    else:
        accepted = abs(theta_hat - cfg.claimed_angle) <= cfg.gamma
    return Flag.ACCEPT if accepted else Flag.REJECT


def _check_response(rho, index: int) -> None:
    # Cheap per-request invariant check; full checks live in validate_density.
    m00, m01 = rho[0, 0], rho[0, 1]
    m10, m11 = rho[1, 0], rho[1, 1]
    trace = m00.real + m11.real
    half_gap = 0.5 * (m00.real - m11.real)
    min_eig = 0.5 * trace - math.sqrt(half_gap * half_gap + abs(m01) ** 2)
    if (
        not math.isfinite(min_eig)
        or abs(m10 - m01.conjugate()) > 1e-12
        or abs(m00.imag) > 1e-12
        or abs(m11.imag) > 1e-12
        or abs(trace - 1.0) > 1e-9
        or min_eig < -1e-9
    ):
        raise ValueError(f"prover returned an invalid density matrix for request {index}")


def run_protocol(
    oracle: OracleConfig, prover: Prover, cfg: ProtocolConfig
) -> tuple[Verdict, Transcript]:
    """Execute one full verification session against ``prover``."""
    n = cfg.n_per_group
    oracle_rng = child_rng(oracle.seed, "draws")
    samples_psi = oracle_draw(oracle, n, 0, oracle_rng)
    samples_phi = oracle_draw(oracle, n, 1, oracle_rng)
    bases = (
        allocate_bases(n, child_rng(cfg.seed, "bases", 0)),
        allocate_bases(n, child_rng(cfg.seed, "bases", 1)),
    )
    features, groups, positions = interleave_sends(
        samples_psi, samples_phi, child_rng(cfg.seed, "interleave")
    )
    if prover.batched:
        prover.prepare(features)
    measure_rng = child_rng(cfg.seed, "measure")

    sends = []
    records = []
    for k in range(2 * n):
        x = features[k]
        sends.append(SendEvent(k, float(x[0]), float(x[1])))
        rho = prover.respond(k, x)
        _check_response(rho, k)
        group = int(groups[k])
        basis = bases[group][positions[k]]
        outcome = sample_outcome(rho, basis, measure_rng)
        records.append(MeasurementRecord(k, group, basis, outcome))

    return conclude(cfg, sends, records)


def conclude(
    cfg: ProtocolConfig,
    sends: list[SendEvent],
    records: list[MeasurementRecord],
) -> tuple[Verdict, Transcript]:
    """Post-processing: estimate, reconstruct, and decide from raw records."""
    probs_psi = estimate_probs([r for r in records if r.group == 0])
    probs_phi = estimate_probs([r for r in records if r.group == 1])
    rho_psi = reconstruct_density(probs_psi)
    rho_phi = reconstruct_density(probs_phi)
    fidelity_hat = fidelity(rho_psi, rho_phi)
    theta_hat = bures_angle(fidelity_hat)
    verdict = Verdict(decide(theta_hat, cfg), theta_hat, fidelity_hat, rho_psi, rho_phi)
    transcript = Transcript(
        cfg, sends, records, probs_psi, probs_phi, rho_psi, rho_phi, verdict
    )
    return verdict, transcript


@dataclass(frozen=True)
class MultiGroupResult:
    angles: np.ndarray
    min_angle: float
    mean_angle: float
    all_pass: bool


def multi_group_verify(densities: Sequence[np.ndarray], gamma: float) -> MultiGroupResult:
    """Pairwise Bures angles of K reconstructed group states.

    ``angles`` is the symmetric K x K matrix with zero diagonal; the summary
    reports the minimum and mean over the K(K-1)/2 distinct pairs, and
    whether every pairwise angle clears pi/2 - gamma.
    """
    k = len(densities)
    if k < 2:
        raise ValueError("need at least two groups")
    angles = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            theta = bures_angle(fidelity(densities[i], densities[j]))
            angles[i, j] = angles[j, i] = theta
    pairs = angles[np.triu_indices(k, 1)]
    return MultiGroupResult(
        angles=angles,
        min_angle=float(pairs.min()),
        mean_angle=float(pairs.mean()),
        all_pass=bool(np.all(pairs > math.pi / 2 - gamma)),
    )
