"""Audit-trail serialization: plain-text transcripts and offline replay.

A transcript fixes everything needed to re-derive the verdict after the
fact: the protocol parameters, every feature vector in send order (no
labels, matching what the prover saw), and every measurement record.  The
format is a strict line protocol; any structural deviation, including extra
tokens smuggled into a send line, is rejected rather than ignored.

    qsepaudit-transcript 1 n=<int> gamma=<float> claim=<float> seed=<int>
    S <index> <x1> <x2>
    ...
    M <index> <group> <basis> <outcome>
    ...
    V <ACCEPT|REJECT> theta=<float> fidelity=<float>

Feature floats are written with repr so parsing returns bit-identical
values and a parse/format round trip reproduces the file byte for byte.
"""

from __future__ import annotations

import math

from .fileio import atomic_write_text
from .qubits import Basis
from .verifier import (
    Flag,
    MeasurementRecord,
    ProtocolConfig,
    SendEvent,
    Transcript,
    Verdict,
    conclude,
)

FORMAT_NAME = "qsepaudit-transcript"
FORMAT_VERSION = 1
SUMMARY_DIGITS = 12

_BASIS_BY_NAME = {basis.value: basis for basis in Basis}


class TranscriptError(ValueError):
    """Raised for malformed transcripts and replay mismatches."""


def _fmt_summary(value: float) -> str:
    return format(value, f".{SUMMARY_DIGITS}g")


def format_transcript(transcript: Transcript) -> str:
    cfg = transcript.config
    verdict = transcript.verdict
    if verdict is None:
        raise ValueError("cannot serialize a transcript without a verdict")
    lines = [
        f"{FORMAT_NAME} {FORMAT_VERSION} n={cfg.n_per_group}"
        f" gamma={cfg.gamma!r} claim={cfg.claimed_angle!r} seed={cfg.seed}"
    ]
    for send in transcript.sends:
        lines.append(f"S {send.request_index} {send.x1!r} {send.x2!r}")
    for rec in transcript.records:
        lines.append(f"M {rec.request_index} {rec.group} {rec.basis.value} {rec.outcome}")
    lines.append(
        f"V {verdict.flag.value} theta={_fmt_summary(verdict.theta_hat)}"
        f" fidelity={_fmt_summary(verdict.fidelity_hat)}"
    )
    return "\n".join(lines) + "\n"


def write_transcript(transcript: Transcript, path: str) -> None:
    atomic_write_text(path, format_transcript(transcript))


def _fail(line_no: int, reason: str):
    raise TranscriptError(f"line {line_no}: {reason}")


def _keyed(token: str, key: str, line_no: int) -> str:
    prefix = key + "="
    if not token.startswith(prefix):
        _fail(line_no, f"expected {key}=<value>, got {token!r}")
    return token[len(prefix):]


def _parse_float(text: str, line_no: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        _fail(line_no, f"bad {what} {text!r}")
    if not math.isfinite(value):
        _fail(line_no, f"non-finite {what} {text!r}")
    return value


def _parse_int(text: str, line_no: int, what: str) -> int:
    if not (text.isdigit() or (text.startswith("-") and text[1:].isdigit())):
        _fail(line_no, f"bad {what} {text!r}")
    return int(text)


def parse_transcript(text: str) -> Transcript:
    """Strict parse of the line format.  Raises TranscriptError on any deviation."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TranscriptError("empty transcript")

    header = lines[0].split(" ")
    if len(header) != 6 or header[0] != FORMAT_NAME:
        _fail(1, "not a transcript header")
    if header[1] != str(FORMAT_VERSION):
        _fail(1, f"unsupported transcript version {header[1]!r}")
    n = _parse_int(_keyed(header[2], "n", 1), 1, "sample count")
    gamma = _parse_float(_keyed(header[3], "gamma", 1), 1, "gamma")
    claim = _parse_float(_keyed(header[4], "claim", 1), 1, "claim")
    seed = _parse_int(_keyed(header[5], "seed", 1), 1, "seed")
    try:
        cfg = ProtocolConfig(n_per_group=n, gamma=gamma, claimed_angle=claim, seed=seed)
    except ValueError as exc:
        raise TranscriptError(f"line 1: {exc}") from exc

    total = 2 * n
    if len(lines) != 2 + 2 * total:
        raise TranscriptError(
            f"expected {2 + 2 * total} lines for n={n}, found {len(lines)}"
        )

    sends = []
    for pos in range(total):
        line_no = 2 + pos
        tokens = lines[1 + pos].split(" ")
        if len(tokens) != 4 or tokens[0] != "S":
            _fail(line_no, "malformed send line")
        if tokens[1] != str(pos):
            _fail(line_no, f"send index {tokens[1]!r} out of order")
        x1 = _parse_float(tokens[2], line_no, "feature")
        x2 = _parse_float(tokens[3], line_no, "feature")
        sends.append(SendEvent(pos, x1, x2))

    records = []
    group_counts = [0, 0]
    for pos in range(total):
        line_no = 2 + total + pos
        tokens = lines[1 + total + pos].split(" ")
        if len(tokens) != 5 or tokens[0] != "M":
            _fail(line_no, "malformed measurement line")
        if tokens[1] != str(pos):
            _fail(line_no, f"measurement index {tokens[1]!r} out of order")
        if tokens[2] not in ("0", "1"):
            _fail(line_no, f"bad group {tokens[2]!r}")
        if tokens[3] not in _BASIS_BY_NAME:
            _fail(line_no, f"unknown basis {tokens[3]!r}")
        if tokens[4] not in ("0", "1"):
            _fail(line_no, f"bad outcome {tokens[4]!r}")
        group = int(tokens[2])
        group_counts[group] += 1
        records.append(
            MeasurementRecord(pos, group, _BASIS_BY_NAME[tokens[3]], int(tokens[4]))
        )
    if group_counts != [n, n]:
        raise TranscriptError(
            f"group sizes {group_counts} do not match n={n} per group"
        )

    verdict_no = 2 + 2 * total
    tokens = lines[verdict_no - 1].split(" ")
    if len(tokens) != 4 or tokens[0] != "V":
        _fail(verdict_no, "malformed verdict line")
    if tokens[1] not in (Flag.ACCEPT.value, Flag.REJECT.value):
        _fail(verdict_no, f"unknown flag {tokens[1]!r}")
    theta = _parse_float(_keyed(tokens[2], "theta", verdict_no), verdict_no, "theta")
    fid = _parse_float(_keyed(tokens[3], "fidelity", verdict_no), verdict_no, "fidelity")
    verdict = Verdict(Flag(tokens[1]), theta, fid, None, None)
    return Transcript(cfg, sends, records, verdict=verdict)


def read_transcript(path: str) -> Transcript:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_transcript(handle.read())


def replay_transcript(path: str) -> Verdict:
    """Re-derive the verdict from the raw records and check it matches.

    Raises TranscriptError if the recomputed flag, angle, or fidelity
    disagrees with what the transcript claims.
    """
    parsed = read_transcript(path)
    verdict, _ = conclude(parsed.config, parsed.sends, parsed.records)
    stored = parsed.verdict
    if verdict.flag is not stored.flag:
        raise TranscriptError(
            f"replay produced {verdict.flag.value}, transcript says {stored.flag.value}"
        )
    if _fmt_summary(verdict.theta_hat) != _fmt_summary(stored.theta_hat):
        raise TranscriptError(
            f"replay angle {verdict.theta_hat!r} does not match "
            f"stored {stored.theta_hat!r}"
        )
    if _fmt_summary(verdict.fidelity_hat) != _fmt_summary(stored.fidelity_hat):
        raise TranscriptError(
            f"replay fidelity {verdict.fidelity_hat!r} does not match "
            f"stored {stored.fidelity_hat!r}"
        )
    return verdict
