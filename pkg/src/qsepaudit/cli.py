"""Command-line front end: one verb per experiment preset, plus replay.

Common options can also come from a flat ``key = value`` config file via
``--config``; explicit flags win over the file, the file wins over built-in
defaults.  Exit codes: 0 success, 2 validation error (bad arguments,
config, or transcript), 1 runtime failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import experiments as xp
from .provers import Strategy
from .transcript import replay_transcript

_CONFIG_KEYS = {
    "seed": int,
    "out-dir": str,
    "trials": int,
    "n": int,
    "gamma": float,
    "claim": float,
}


def parse_config_file(path: str) -> dict:
    if not os.path.exists(path):
        raise ValueError(f"config file not found: {path}")
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ValueError(f"{path}:{line_no}: expected 'key = value'")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{line_no}: unknown key {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise ValueError(f"{path}:{line_no}: bad value {value!r} for {key}") from None
    return values


def _resolve(args, key: str, fallback):
    explicit = getattr(args, key.replace("-", "_"))
    if explicit is not None:
        return explicit
    return args.config_values.get(key, fallback)


def _common(args) -> dict:
    return {
        "seed": _resolve(args, "seed", 0),
        "out_dir": _resolve(args, "out-dir", "out"),
        "trials": _resolve(args, "trials", None),
        "n": _resolve(args, "n", None),
        "gamma": _resolve(args, "gamma", 0.1),
        "claim": _resolve(args, "claim", None),
    }


def _cmd_angle_grid(args) -> int:
    c = _common(args)
    spec = xp.AngleGridSpec(
        points=args.points,
        n_per_group=c["n"] or 3000,
        trials=c["trials"] or 20,
        perturb_sigma=args.sigma,
        gamma=c["gamma"],
        seed=c["seed"],
    )
    result = xp.run_angle_grid(spec)
    paths = xp.write_angle_grid_report(result, c["out_dir"])
    for row in result.rows:
        print(
            f"target {row.true_angle:.4f}  mean {row.mean_theta_hat:.4f}"
            f"  std {row.std_theta_hat:.4f}"
        )
    print(f"wrote {paths['csv']} and {paths['svg']}")
    return 0


def _cmd_n_sweep(args) -> int:
    c = _common(args)
    spec = xp.NSweepSpec(gamma=c["gamma"], seed=c["seed"])
    rows = xp.run_n_sweep(spec, args.quantity)
    paths = xp.write_n_sweep_report(rows, args.quantity, c["out_dir"])
    for row in rows:
        print(f"N {row.n:>6}  estimate {row.estimate:.6f}  true {row.true_value:.6f}")
    print(f"wrote {paths['csv']} and {paths['svg']}")
    return 0


def _cmd_soundness(args) -> int:
    c = _common(args)
    strategies = tuple(Strategy(s) for s in args.strategy) if args.strategy else tuple(Strategy)
    spec = xp.SoundnessSpec(
        strategies=strategies,
        n_values=(c["n"],) if c["n"] else (3000,),
        trials=c["trials"] or 200,
        gamma=c["gamma"],
        seed=c["seed"],
    )
    rows = xp.run_soundness_sweep(spec)
    paths = xp.write_soundness_report(rows, c["out_dir"])
    for row in rows:
        print(
            f"{row.strategy:<14} N {row.n:>6}  accept {row.accept_rate:.4f}"
            f"  mean angle {row.mean_theta_hat:.4f}"
        )
    print(f"wrote {paths['csv']} and {paths['svg']}")
    return 0


def _cmd_completeness(args) -> int:
    c = _common(args)
    spec = xp.CompletenessSpec(
        n_values=(c["n"],) if c["n"] else xp.CompletenessSpec.n_values,
        trials=c["trials"] or 200,
        gamma=c["gamma"],
        seed=c["seed"],
    )
    rows = xp.run_completeness_sweep(spec)
    paths = xp.write_completeness_report(rows, c["out_dir"])
    for row in rows:
        print(f"N {row.n:>6}  accept {row.accept_rate:.4f}")
    print(f"wrote {paths['csv']} and {paths['svg']}")
    return 0


def _cmd_train_verify(args) -> int:
    c = _common(args)
    spec = xp.TrainVerifySpec(
        n_per_group=c["n"] or 9000,
        claim=c["claim"] if c["claim"] is not None else xp.DEFAULT_CLAIM,
        gamma=c["gamma"],
        layers=args.layers,
        iterations=args.iterations,
        seed=c["seed"],
    )
    report = xp.run_train_and_verify(spec)
    paths = xp.write_train_verify_report(report, spec, c["out_dir"])
    print(f"trained {args.layers} layers, final cost {report.history[-1]:.6f}")
    print(f"true angle {report.true_angle:.6f}  estimated {report.verdict.theta_hat:.6f}")
    print(
        f"claim {spec.claim:.6f} +- {spec.gamma:.3f}: {report.verdict.flag.value}"
    )
    for name in ("history_csv", "history_svg", "summary_csv", "transcript"):
        print(f"wrote {paths[name]}")
    return 0


def _cmd_multi_group(args) -> int:
    c = _common(args)
    spec = xp.MultiGroupSpec(
        groups=args.groups,
        n_per_group=c["n"] or 3000,
        gamma=c["gamma"],
        seed=c["seed"],
    )
    report = xp.run_multi_group(spec)
    paths = xp.write_multi_group_report(report, spec.gamma, c["out_dir"])
    for row in report.rows:
        print(f"groups ({row.group_i},{row.group_j})  angle {row.theta:.6f}")
    print(
        f"min {report.min_angle:.6f}  mean {report.mean_angle:.6f}"
        f"  all_pass {str(report.all_pass).lower()}"
    )
    print(f"wrote {paths['csv']} and {paths['svg']}")
    return 0


def _cmd_replay(args) -> int:
    if not os.path.exists(args.transcript):
        raise ValueError(f"transcript not found: {args.transcript}")
    verdict = replay_transcript(args.transcript)
    print(
        f"{verdict.flag.value} theta={verdict.theta_hat:.12g}"
        f" fidelity={verdict.fidelity_hat:.12g}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--out-dir", default=None, help="output directory (default ./out)")
    common.add_argument("--trials", type=int, default=None, help="trials per sweep cell")
    common.add_argument("--n", type=int, default=None, help="samples per group")
    common.add_argument("--gamma", type=float, default=None, help="decision margin (rad)")
    common.add_argument("--claim", type=float, default=None, help="claimed angle (rad)")
    common.add_argument("--config", default=None, help="flat key = value config file")

    parser = argparse.ArgumentParser(
        prog="qsepaudit",
        description="Black-box separation audits for single-qubit embeddings.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("angle-grid", parents=[common],
                       help="estimation quality across a grid of target angles")
    p.add_argument("--points", type=int, default=9, help="grid points in [0, pi/2]")
    p.add_argument("--sigma", type=float, default=0.05,
                   help="per-response perturbation width")
    p.set_defaults(handler=_cmd_angle_grid)

    p = sub.add_parser("n-sweep", parents=[common],
                       help="estimate vs samples per group for a trained embedding")
    p.add_argument("--quantity", choices=("angle", "fidelity"), default="angle")
    p.set_defaults(handler=_cmd_n_sweep)

    p = sub.add_parser("soundness", parents=[common],
                       help="adversary acceptance rates on the structureless oracle")
    p.add_argument("--strategy", action="append",
                   choices=tuple(s.value for s in Strategy),
                   help="adversary to include (repeatable; default all)")
    p.set_defaults(handler=_cmd_soundness)

    p = sub.add_parser("completeness", parents=[common],
                       help="honest prover acceptance rates per sample size")
    p.set_defaults(handler=_cmd_completeness)

    p = sub.add_parser("train-verify", parents=[common],
                       help="train an embedding, then audit it against a claim")
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--iterations", type=int, default=500)
    p.set_defaults(handler=_cmd_train_verify)

    p = sub.add_parser("multi-group", parents=[common],
                       help="pairwise angles of K tomographed reference groups")
    p.add_argument("--groups", type=int, default=3)
    p.set_defaults(handler=_cmd_multi_group)

    p = sub.add_parser("replay", parents=[common],
                       help="re-derive and check the verdict of a stored transcript")
    p.add_argument("transcript", help="path to a transcript file")
    p.set_defaults(handler=_cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.config_values = parse_config_file(args.config) if args.config else {}
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary between library and shell
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
