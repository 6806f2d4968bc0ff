"""Experiment presets: the sweeps behind each CLI verb.

Every runner takes a frozen spec carrying one master seed and derives all
per-trial seeds from it with labeled streams, so results are reproducible
end to end and rows come out in a fixed (parameter, trial) order no matter
how trials would be scheduled.  Runners return plain row tuples; the
``write_*_report`` helpers turn them into the CSV files of record plus an
SVG rendering.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .data import Distribution, OracleConfig, blob_label, draw_labeled
from .embedding import TrainConfig, class_densities, train
from .provers import (
    Strategy,
    SyntheticProverConfig,
    adversarial_prover,
    honest_prover,
    synthetic_angle_prover,
)
from .qubits import bloch_to_density, bures_angle, fidelity, sample_outcome
from .reports import PlotSpec, Series, render_plot, write_csv
from .rng import child_rng, derive_seed
from .transcript import write_transcript
from .verifier import (
    Flag,
    MeasurementRecord,
    ProtocolConfig,
    Transcript,
    Verdict,
    allocate_bases,
    multi_group_verify,
    reconstruct_from_records,
    run_protocol,
)

DEFAULT_CLAIM = 0.3 * math.pi


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


# ---------------------------------------------------------------------------
# angle grid


@dataclass(frozen=True)
class AngleGridSpec:
    points: int = 9
    n_per_group: int = 3000
    trials: int = 20
    perturb_sigma: float = 0.05
    spread: float = 0.3
    gamma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        _require(self.points >= 2, "need at least 2 grid points")
        _require(self.trials >= 1, "need at least 1 trial")
        _require(self.n_per_group >= 3, "need at least 3 samples per group")


class AngleGridRow(NamedTuple):
    true_angle: float
    mean_theta_hat: float
    std_theta_hat: float
    trials: int


ANGLE_GRID_HEADER = ("true_angle", "mean_theta_hat", "std_theta_hat", "trials")


@dataclass(frozen=True)
class AngleGridResult:
    rows: list[AngleGridRow]
    estimates: np.ndarray  # (points, trials)


def run_angle_grid(spec: AngleGridSpec) -> AngleGridResult:
    """Estimated vs target angle for the fixed-angle prover over a grid.

    The prover serves a Haar-random state pair at each grid angle, with a
    fresh pair per trial and per-response perturbation ``perturb_sigma``.
    """
    grid = np.linspace(0.0, math.pi / 2, spec.points)
    estimates = np.empty((spec.points, spec.trials))
    rows = []
    for gi, angle in enumerate(grid):
        for t in range(spec.trials):
            prover = synthetic_angle_prover(
                SyntheticProverConfig(
                    target_angle=float(angle),
                    perturb_sigma=spec.perturb_sigma,
                    seed=derive_seed(spec.seed, "angle-grid", gi, t, "prover"),
                ),
                blob_label,
            )
            oracle = OracleConfig(
                spread=spec.spread,
                seed=derive_seed(spec.seed, "angle-grid", gi, t, "oracle"),
            )
            cfg = ProtocolConfig(
                n_per_group=spec.n_per_group,
                gamma=spec.gamma,
                seed=derive_seed(spec.seed, "angle-grid", gi, t, "protocol"),
            )
            verdict, _ = run_protocol(oracle, prover, cfg)
            estimates[gi, t] = verdict.theta_hat
        rows.append(
            AngleGridRow(
                true_angle=float(angle),
                mean_theta_hat=float(estimates[gi].mean()),
                std_theta_hat=float(estimates[gi].std()),
                trials=spec.trials,
            )
        )
    return AngleGridResult(rows=rows, estimates=estimates)


def write_angle_grid_report(result: AngleGridResult, out_dir: str) -> dict[str, str]:
    csv_path = os.path.join(out_dir, "angle_grid.csv")
    svg_path = os.path.join(out_dir, "angle_grid.svg")
    write_csv(csv_path, ANGLE_GRID_HEADER, result.rows)
    render_plot(
        PlotSpec(
            title="Angle estimation across the target grid",
            xlabel="target angle (rad)",
            ylabel="estimated angle (rad)",
            series=(
                Series(
                    label="mean estimate",
                    x=tuple(r.true_angle for r in result.rows),
                    y=tuple(r.mean_theta_hat for r in result.rows),
                    yerr=tuple(r.std_theta_hat for r in result.rows),
                ),
            ),
            diagonal=True,
        ),
        svg_path,
    )
    return {"csv": csv_path, "svg": svg_path}


# ---------------------------------------------------------------------------
# sample-size sweep


@dataclass(frozen=True)
class NSweepSpec:
    n_values: tuple = (30, 90, 300, 900, 3000, 9000)
    layers: int = 3
    iterations: int = 500
    holdout: int = 20000
    spread: float = 0.3
    gamma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        _require(len(self.n_values) >= 1, "need at least one sample size")
        _require(all(n >= 3 for n in self.n_values), "every N must be >= 3")
        _require(
            list(self.n_values) == sorted(self.n_values),
            "sample sizes must be ascending",
        )
        _require(self.holdout >= 100, "held-out set too small to define the true value")


class NSweepRow(NamedTuple):
    n: int
    estimate: float
    true_value: float


N_SWEEP_HEADER = ("n", "estimate", "true_value")

_QUANTITIES = ("angle", "fidelity")


def run_n_sweep(spec: NSweepSpec, quantity: str = "angle") -> list[NSweepRow]:
    """Protocol estimate vs sample size for a freshly trained embedding.

    Trains once, fixes the true value on a large held-out draw, then runs
    one protocol per N with the honest prover.  The two quantities reuse
    identical seed paths, so the angle and fidelity sweeps for one master
    seed come from the same protocol runs.
    """
    _require(quantity in _QUANTITIES, f"quantity must be one of {_QUANTITIES}")
    oracle = OracleConfig(
        spread=spec.spread, seed=derive_seed(spec.seed, "n-sweep", "train-oracle")
    )
    trained = train(
        TrainConfig(
            layers=spec.layers,
            iterations=spec.iterations,
            seed=derive_seed(spec.seed, "n-sweep", "train"),
        ),
        oracle,
    )
    features, labels = draw_labeled(
        oracle, spec.holdout, child_rng(spec.seed, "n-sweep", "holdout")
    )
    rho, sigma = class_densities(trained.params, features, labels)
    true_fidelity = fidelity(rho, sigma)
    true_value = bures_angle(true_fidelity) if quantity == "angle" else true_fidelity

    prover = honest_prover(trained.params)
    rows = []
    for n in spec.n_values:
        cfg = ProtocolConfig(
            n_per_group=int(n),
            gamma=spec.gamma,
            seed=derive_seed(spec.seed, "n-sweep", int(n), "protocol"),
        )
        run_oracle = OracleConfig(
            spread=spec.spread, seed=derive_seed(spec.seed, "n-sweep", int(n), "oracle")
        )
        verdict, _ = run_protocol(run_oracle, prover, cfg)
        estimate = verdict.theta_hat if quantity == "angle" else verdict.fidelity_hat
        rows.append(NSweepRow(n=int(n), estimate=estimate, true_value=true_value))
    return rows


def write_n_sweep_report(
    rows: Sequence[NSweepRow], quantity: str, out_dir: str
) -> dict[str, str]:
    _require(quantity in _QUANTITIES, f"quantity must be one of {_QUANTITIES}")
    stem = f"n_sweep_{quantity}"
    csv_path = os.path.join(out_dir, stem + ".csv")
    svg_path = os.path.join(out_dir, stem + ".svg")
    write_csv(csv_path, N_SWEEP_HEADER, rows)
    unit = " (rad)" if quantity == "angle" else ""
    render_plot(
        PlotSpec(
            title=f"Estimated {quantity} vs samples per group",
            xlabel="samples per group",
            ylabel=f"estimated {quantity}{unit}",
            series=(
                Series(
                    label="estimate",
                    x=tuple(r.n for r in rows),
                    y=tuple(r.estimate for r in rows),
                ),
            ),
            hline=rows[0].true_value if rows else None,
            hline_label="true value",
            logx=True,
        ),
        svg_path,
    )
    return {"csv": csv_path, "svg": svg_path}


# ---------------------------------------------------------------------------
# soundness sweep


@dataclass(frozen=True)
class SoundnessSpec:
    strategies: tuple = tuple(Strategy)
    n_values: tuple = (3000,)
    trials: int = 200
    spread: float = 1.0
    gamma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        _require(self.trials >= 100, "need at least 100 trials per cell")
        _require(len(self.strategies) >= 1, "need at least one strategy")
        _require(all(n >= 3 for n in self.n_values), "every N must be >= 3")


class SoundnessRow(NamedTuple):
    strategy: str
    n: int
    accept_rate: float
    mean_theta_hat: float


SOUNDNESS_HEADER = ("strategy", "n", "accept_rate", "mean_theta_hat")


def run_soundness_sweep(spec: SoundnessSpec) -> list[SoundnessRow]:
    """Acceptance frequency of dishonest provers on the structureless oracle.

    The oracle draws both groups from one feature distribution, so nothing
    in the sends correlates with group membership and any accept is a
    statistical fluke; claim is orthogonality with the default margin.
    """
    rows = []
    for strategy in spec.strategies:
        for n in spec.n_values:
            accepted = 0
            thetas = np.empty(spec.trials)
            for t in range(spec.trials):
                prover = adversarial_prover(
                    strategy,
                    derive_seed(spec.seed, "soundness", strategy.value, int(n), t, "prover"),
                )
                oracle = OracleConfig(
                    distribution=Distribution.HIDDEN_LABELS,
                    spread=spec.spread,
                    seed=derive_seed(spec.seed, "soundness", strategy.value, int(n), t, "oracle"),
                )
                cfg = ProtocolConfig(
                    n_per_group=int(n),
                    gamma=spec.gamma,
                    seed=derive_seed(spec.seed, "soundness", strategy.value, int(n), t, "protocol"),
                )
                verdict, _ = run_protocol(oracle, prover, cfg)
                accepted += verdict.flag is Flag.ACCEPT
                thetas[t] = verdict.theta_hat
            rows.append(
                SoundnessRow(
                    strategy=strategy.value,
                    n=int(n),
                    accept_rate=accepted / spec.trials,
                    mean_theta_hat=float(thetas.mean()),
                )
            )
    return rows


def write_soundness_report(rows: Sequence[SoundnessRow], out_dir: str) -> dict[str, str]:
    csv_path = os.path.join(out_dir, "soundness.csv")
    svg_path = os.path.join(out_dir, "soundness.svg")
    write_csv(csv_path, SOUNDNESS_HEADER, rows)
    strategies = sorted({r.strategy for r in rows})
    series = tuple(
        Series(
            label=s,
            x=tuple(r.n for r in rows if r.strategy == s),
            y=tuple(r.accept_rate for r in rows if r.strategy == s),
        )
        for s in strategies
    )
    render_plot(
        PlotSpec(
            title="Adversary acceptance rate",
            xlabel="samples per group",
            ylabel="acceptance rate",
            series=series,
            logx=True,
        ),
        svg_path,
    )
    return {"csv": csv_path, "svg": svg_path}


# ---------------------------------------------------------------------------
# completeness sweep


@dataclass(frozen=True)
class CompletenessSpec:
    n_values: tuple = (30, 100, 300, 1000, 3000)
    trials: int = 200
    spread: float = 0.3
    gamma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        _require(self.trials >= 100, "need at least 100 trials per cell")
        _require(all(n >= 3 for n in self.n_values), "every N must be >= 3")


class CompletenessRow(NamedTuple):
    n: int
    accept_rate: float


COMPLETENESS_HEADER = ("n", "accept_rate")


def run_completeness_sweep(spec: CompletenessSpec) -> list[CompletenessRow]:
    """Acceptance frequency of an exactly orthogonal prover per sample size."""
    rows = []
    for n in spec.n_values:
        accepted = 0
        for t in range(spec.trials):
            prover = synthetic_angle_prover(
                SyntheticProverConfig(
                    target_angle=math.pi / 2,
                    perturb_sigma=0.0,
                    seed=derive_seed(spec.seed, "completeness", int(n), t, "prover"),
                ),
                blob_label,
            )
            oracle = OracleConfig(
                spread=spec.spread,
                seed=derive_seed(spec.seed, "completeness", int(n), t, "oracle"),
            )
            cfg = ProtocolConfig(
                n_per_group=int(n),
                gamma=spec.gamma,
                seed=derive_seed(spec.seed, "completeness", int(n), t, "protocol"),
            )
            verdict, _ = run_protocol(oracle, prover, cfg)
            accepted += verdict.flag is Flag.ACCEPT
        rows.append(CompletenessRow(n=int(n), accept_rate=accepted / spec.trials))
    return rows


def write_completeness_report(
    rows: Sequence[CompletenessRow], out_dir: str
) -> dict[str, str]:
    csv_path = os.path.join(out_dir, "completeness.csv")
    svg_path = os.path.join(out_dir, "completeness.svg")
    write_csv(csv_path, COMPLETENESS_HEADER, rows)
    render_plot(
        PlotSpec(
            title="Honest prover acceptance rate",
            xlabel="samples per group",
            ylabel="acceptance rate",
            series=(
                Series(
                    label="orthogonal prover",
                    x=tuple(r.n for r in rows),
                    y=tuple(r.accept_rate for r in rows),
                ),
            ),
            hline=1.0,
            logx=True,
        ),
        svg_path,
    )
    return {"csv": csv_path, "svg": svg_path}


# ---------------------------------------------------------------------------
# train and verify


@dataclass(frozen=True)
class TrainVerifySpec:
    n_per_group: int = 9000
    claim: float = DEFAULT_CLAIM
    gamma: float = 0.1
    layers: int = 3
    iterations: int = 500
    holdout: int = 20000
    spread: float = 0.3
    seed: int = 0

    def __post_init__(self):
        _require(self.n_per_group >= 3, "need at least 3 samples per group")
        _require(self.iterations >= 1, "need at least one training iteration")
        _require(self.holdout >= 100, "held-out set too small to define the true value")


@dataclass(frozen=True)
class TrainVerifyReport:
    params: np.ndarray
    history: np.ndarray
    true_angle: float
    true_fidelity: float
    verdict: Verdict
    transcript: Transcript


TRAIN_HISTORY_HEADER = ("iteration", "cost")
TRAIN_SUMMARY_HEADER = (
    "claim",
    "gamma",
    "n_per_group",
    "true_angle",
    "true_fidelity",
    "theta_hat",
    "fidelity_hat",
    "flag",
    "cost_initial",
    "cost_final",
)


def run_train_and_verify(spec: TrainVerifySpec) -> TrainVerifyReport:
    """Full pipeline: train the embedding, audit it against a claimed angle."""
    oracle = OracleConfig(
        spread=spec.spread, seed=derive_seed(spec.seed, "train-verify", "train-oracle")
    )
    trained = train(
        TrainConfig(
            layers=spec.layers,
            iterations=spec.iterations,
            seed=derive_seed(spec.seed, "train-verify", "train"),
        ),
        oracle,
    )
    features, labels = draw_labeled(
        oracle, spec.holdout, child_rng(spec.seed, "train-verify", "holdout")
    )
    rho, sigma = class_densities(trained.params, features, labels)
    true_fidelity = fidelity(rho, sigma)
    cfg = ProtocolConfig(
        n_per_group=spec.n_per_group,
        gamma=spec.gamma,
        claimed_angle=spec.claim,
        seed=derive_seed(spec.seed, "train-verify", "protocol"),
    )
    run_oracle = OracleConfig(
        spread=spec.spread, seed=derive_seed(spec.seed, "train-verify", "verify-oracle")
    )
    verdict, transcript = run_protocol(run_oracle, honest_prover(trained.params), cfg)
    return TrainVerifyReport(
        params=trained.params,
        history=trained.history,
        true_angle=bures_angle(true_fidelity),
        true_fidelity=true_fidelity,
        verdict=verdict,
        transcript=transcript,
    )


def write_train_verify_report(
    report: TrainVerifyReport, spec: TrainVerifySpec, out_dir: str
) -> dict[str, str]:
    history_csv = os.path.join(out_dir, "train_history.csv")
    history_svg = os.path.join(out_dir, "train_history.svg")
    summary_csv = os.path.join(out_dir, "train_verify_summary.csv")
    transcript_path = os.path.join(out_dir, "transcript.txt")
    write_csv(
        history_csv,
        TRAIN_HISTORY_HEADER,
        [(i, float(c)) for i, c in enumerate(report.history)],
    )
    render_plot(
        PlotSpec(
            title="Embedding training cost",
            xlabel="iteration",
            ylabel="cost",
            series=(
                Series(
                    label="cost",
                    x=tuple(range(len(report.history))),
                    y=tuple(float(c) for c in report.history),
                ),
            ),
        ),
        history_svg,
    )
    write_csv(
        summary_csv,
        TRAIN_SUMMARY_HEADER,
        [
            (
                spec.claim,
                spec.gamma,
                spec.n_per_group,
                report.true_angle,
                report.true_fidelity,
                report.verdict.theta_hat,
                report.verdict.fidelity_hat,
                report.verdict.flag.value,
                float(report.history[0]),
                float(report.history[-1]),
            )
        ],
    )
    write_transcript(report.transcript, transcript_path)
    return {
        "history_csv": history_csv,
        "history_svg": history_svg,
        "summary_csv": summary_csv,
        "transcript": transcript_path,
    }


# ---------------------------------------------------------------------------
# multi-group


@dataclass(frozen=True)
class MultiGroupSpec:
    groups: int = 3
    n_per_group: int = 3000
    gamma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        _require(self.groups >= 2, "need at least two groups")
        _require(self.n_per_group >= 3, "need at least 3 samples per group")


class MultiGroupRow(NamedTuple):
    group_i: int
    group_j: int
    theta: float


MULTI_GROUP_HEADER = ("group_i", "group_j", "theta")


@dataclass(frozen=True)
class MultiGroupReport:
    rows: list[MultiGroupRow]
    angles: np.ndarray
    min_angle: float
    mean_angle: float
    all_pass: bool


def reference_states(k: int) -> list[np.ndarray]:
    """K pure states with Bloch vectors fanned evenly in the x-z plane.

    Adjacent Bloch vectors are 2pi/K apart, the most spread-out coplanar
    arrangement; for K=3 every pair sits at Bures angle pi/3.
    """
    out = []
    for i in range(k):
        phi = 2.0 * math.pi * i / k
        out.append(bloch_to_density(np.array([math.sin(phi), 0.0, math.cos(phi)])))
    return out


def run_multi_group(spec: MultiGroupSpec) -> MultiGroupReport:
    """Tomograph K reference states separately and report pairwise angles."""
    states = reference_states(spec.groups)
    densities = []
    for g, rho in enumerate(states):
        bases = allocate_bases(
            spec.n_per_group, child_rng(spec.seed, "multi-group", g, "bases")
        )
        measure_rng = child_rng(spec.seed, "multi-group", g, "measure")
        records = [
            MeasurementRecord(i, 0, basis, sample_outcome(rho, basis, measure_rng))
            for i, basis in enumerate(bases)
        ]
        densities.append(reconstruct_from_records(records))
    result = multi_group_verify(densities, spec.gamma)
    rows = [
        MultiGroupRow(i, j, float(result.angles[i, j]))
        for i in range(spec.groups)
        for j in range(i + 1, spec.groups)
    ]
    return MultiGroupReport(
        rows=rows,
        angles=result.angles,
        min_angle=result.min_angle,
        mean_angle=result.mean_angle,
        all_pass=result.all_pass,
    )


def write_multi_group_report(
    report: MultiGroupReport, gamma: float, out_dir: str
) -> dict[str, str]:
    csv_path = os.path.join(out_dir, "multi_group.csv")
    svg_path = os.path.join(out_dir, "multi_group.svg")
    write_csv(csv_path, MULTI_GROUP_HEADER, report.rows)
    render_plot(
        PlotSpec(
            title="Pairwise separation angles",
            xlabel="pair index",
            ylabel="Bures angle (rad)",
            series=(
                Series(
                    label="pair angle",
                    x=tuple(range(len(report.rows))),
                    y=tuple(r.theta for r in report.rows),
                ),
            ),
            hline=math.pi / 2 - gamma,
            hline_label="threshold",
        ),
        svg_path,
    )
    return {"csv": csv_path, "svg": svg_path}
