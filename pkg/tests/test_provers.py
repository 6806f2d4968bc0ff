"""Prover implementations: honest, synthetic fixed-angle, adversarial, noisy."""

import math

import numpy as np
import pytest

from qsepaudit.embedding import embed
from qsepaudit.provers import (
    ClusterGuessProver,
    ConstantStateProver,
    DepolarizingProver,
    RandomAssignProver,
    Strategy,
    SyntheticAngleProver,
    SyntheticProverConfig,
    adversarial_prover,
    depolarize_wrap,
    honest_prover,
    synthetic_angle_prover,
)
from qsepaudit.qubits import (
    KET_0,
    KET_1,
    bures_angle,
    density_of,
    density_to_bloch,
    fidelity,
    validate_density,
)


def sign_label(x) -> int:
    return 1 if x[0] > 0 else 0


# ---------------------------------------------------------------------------
# honest


def test_honest_prover_embeds_features():
    theta = np.array([0.3, -0.2, 0.5, 0.1])
    prover = honest_prover(theta)
    x = np.array([0.7, -1.2])
    assert np.allclose(prover.respond(0, x), density_of(embed(x, theta)))
    assert prover.batched is False


def test_honest_prover_validates_params():
    with pytest.raises(ValueError):
        honest_prover(np.zeros(3))


# ---------------------------------------------------------------------------
# synthetic fixed-angle


def test_synthetic_config_validation():
    SyntheticProverConfig(math.pi / 2, 0.0, 1)
    with pytest.raises(ValueError):
        SyntheticProverConfig(-0.1)
    with pytest.raises(ValueError):
        SyntheticProverConfig(math.pi)
    with pytest.raises(ValueError):
        SyntheticProverConfig(0.5, perturb_sigma=-1.0)
    with pytest.raises(ValueError):
        SyntheticProverConfig(math.nan)


@pytest.mark.parametrize("target", [0.0, 0.2, math.pi / 4, 1.2, math.pi / 2])
def test_reference_separation_is_exact(target):
    prover = SyntheticAngleProver(SyntheticProverConfig(target, 0.0, 3), sign_label)
    psi, phi = prover.references
    angle = bures_angle(fidelity(density_of(psi), density_of(phi)))
    assert angle == pytest.approx(target, abs=1e-12)


def test_orthogonal_target_gives_computational_pair():
    prover = SyntheticAngleProver(SyntheticProverConfig(math.pi / 2, 0.0, 11), sign_label)
    lo = prover.respond(0, np.array([-1.0, 0.0]))
    hi = prover.respond(1, np.array([1.0, 0.0]))
    assert np.max(np.abs(lo - density_of(KET_0))) <= 1e-12
    assert np.max(np.abs(hi - density_of(KET_1))) <= 1e-12
    psi, phi = prover.references
    assert abs(np.vdot(psi, phi)) <= 1e-12


def test_zero_target_gives_identical_responses():
    prover = SyntheticAngleProver(SyntheticProverConfig(0.0, 0.0, 5), sign_label)
    a = prover.respond(0, np.array([-1.0, 0.0]))
    b = prover.respond(1, np.array([1.0, 0.0]))
    assert np.array_equal(a, b)


def test_label_fn_routes_requests():
    prover = synthetic_angle_prover(SyntheticProverConfig(1.0, 0.0, 7), sign_label)
    psi, phi = prover.references
    assert np.allclose(prover.respond(0, np.array([-2.0, 0.0])), density_of(psi))
    assert np.allclose(prover.respond(1, np.array([2.0, 0.0])), density_of(phi))


def test_synthetic_deterministic_per_seed():
    make = lambda: SyntheticAngleProver(SyntheticProverConfig(0.8, 0.05, 21), sign_label)
    a, b = make(), make()
    for i in range(20):
        x = np.array([(-1.0) ** i, 0.5])
        assert np.array_equal(a.respond(i, x), b.respond(i, x))


def test_perturbation_statistics():
    sigma = 0.1
    prover = SyntheticAngleProver(SyntheticProverConfig(0.5, sigma, 13), sign_label)
    ref = density_of(prover.references[0])
    angles = []
    for i in range(2000):
        rho = prover.respond(i, np.array([-1.0, 0.0]))
        validate_density(rho, atol=1e-9)
        angles.append(bures_angle(fidelity(ref, rho)))
    # rotation angle |N(0, sigma)| halves on the Bures side only through the
    # axis geometry; just pin the scale: mean within a factor band of sigma
    mean = np.mean(angles)
    assert 0.2 * sigma < mean < 1.5 * sigma
    assert max(angles) < 6 * sigma


# ---------------------------------------------------------------------------
# adversaries


def test_random_assign_answers_basis_projectors():
    prover = RandomAssignProver(seed=3)
    seen = set()
    for i in range(400):
        rho = prover.respond(i, np.zeros(2))
        r = density_to_bloch(rho)
        assert abs(abs(r[2]) - 1.0) <= 1e-12 and abs(r[0]) <= 1e-12
        seen.add(round(r[2]))
    assert seen == {-1, 1}


def test_random_assign_is_fair():
    prover = RandomAssignProver(seed=5)
    ups = sum(
        density_to_bloch(prover.respond(i, np.zeros(2)))[2] > 0 for i in range(10000)
    )
    assert abs(ups / 10000 - 0.5) < 5 * math.sqrt(0.25 / 10000)


def test_constant_state_never_varies():
    prover = ConstantStateProver(seed=8)
    first = prover.respond(0, np.array([4.0, -4.0]))
    validate_density(first)
    for i in range(1, 50):
        assert np.array_equal(prover.respond(i, np.random.default_rng(i).normal(size=2)), first)


def test_cluster_guess_requires_prepare():
    prover = ClusterGuessProver(seed=1)
    assert prover.batched is True
    with pytest.raises(RuntimeError):
        prover.respond(0, np.zeros(2))


def test_cluster_guess_separates_clear_blobs():
    rng = np.random.default_rng(17)
    lo = rng.normal(loc=(-3, -3), scale=0.1, size=(40, 2))
    hi = rng.normal(loc=(3, 3), scale=0.1, size=(40, 2))
    features = np.concatenate([lo, hi])
    prover = ClusterGuessProver(seed=2)
    prover.prepare(features)
    responses = [prover.respond(i, features[i]) for i in range(80)]
    lo_z = {round(density_to_bloch(r)[2]) for r in responses[:40]}
    hi_z = {round(density_to_bloch(r)[2]) for r in responses[40:]}
    # each true cluster answered with one consistent projector, and the two
    # clusters got different ones
    assert len(lo_z) == 1 and len(hi_z) == 1 and lo_z != hi_z


def test_adversarial_prover_factory():
    assert isinstance(adversarial_prover(Strategy.RANDOM_ASSIGN, 0), RandomAssignProver)
    assert isinstance(adversarial_prover(Strategy.CONSTANT_STATE, 0), ConstantStateProver)
    assert isinstance(adversarial_prover(Strategy.CLUSTER_GUESS, 0), ClusterGuessProver)
    with pytest.raises(ValueError):
        adversarial_prover("sneaky", 0)


# ---------------------------------------------------------------------------
# depolarizing wrapper


class _FixedProver:
    batched = False
    prepared = None

    def __init__(self, rho):
        self._rho = rho

    def prepare(self, features):
        self.prepared = features

    def respond(self, index, x):
        return self._rho


def test_depolarize_scales_bloch_vector():
    rho = density_of(KET_0)
    wrapped = depolarize_wrap(_FixedProver(rho), p=0.2)
    out = wrapped.respond(0, np.zeros(2))
    assert np.allclose(density_to_bloch(out), [0, 0, 0.8], atol=1e-12)


def test_depolarize_is_linear():
    rng = np.random.default_rng(23)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    sig = b @ b.conj().T
    sig /= np.trace(sig).real
    p, alpha = 0.37, 0.25
    mixed = DepolarizingProver(_FixedProver(alpha * rho + (1 - alpha) * sig), p).respond(0, None)
    parts = (
        alpha * DepolarizingProver(_FixedProver(rho), p).respond(0, None)
        + (1 - alpha) * DepolarizingProver(_FixedProver(sig), p).respond(0, None)
    )
    assert np.max(np.abs(mixed - parts)) <= 1e-12


def test_depolarize_validates_probability():
    with pytest.raises(ValueError):
        depolarize_wrap(_FixedProver(density_of(KET_0)), p=1.5)
    with pytest.raises(ValueError):
        depolarize_wrap(_FixedProver(density_of(KET_0)), p=-0.1)


def test_depolarize_passes_through_prepare_and_batched():
    inner = _FixedProver(density_of(KET_1))
    inner.batched = True
    wrapped = depolarize_wrap(inner, p=0.1)
    assert wrapped.batched is True
    schedule = np.zeros((4, 2))
    wrapped.prepare(schedule)
    assert inner.prepared is schedule
