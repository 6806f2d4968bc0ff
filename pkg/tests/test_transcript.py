"""Transcript serialization: byte round-trips, replay, tamper rejection."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsepaudit.data import Distribution, OracleConfig, blob_label
from qsepaudit.provers import SyntheticProverConfig, synthetic_angle_prover
from qsepaudit.transcript import (
    FORMAT_NAME,
    FORMAT_VERSION,
    TranscriptError,
    format_transcript,
    parse_transcript,
    read_transcript,
    replay_transcript,
    write_transcript,
)
from qsepaudit.verifier import Flag, ProtocolConfig, run_protocol

ORACLE = OracleConfig(Distribution.SEPARABLE_BLOBS, spread=0.3, seed=1)


def make_transcript(n=12, seed=4, gamma=0.1):
    prover = synthetic_angle_prover(SyntheticProverConfig(math.pi / 2, 0.0, seed), blob_label)
    cfg = ProtocolConfig(n_per_group=n, gamma=gamma, seed=seed)
    return run_protocol(ORACLE, prover, cfg)


def test_format_parse_round_trip_is_byte_identical():
    _, transcript = make_transcript()
    text = format_transcript(transcript)
    assert format_transcript(parse_transcript(text)) == text


def test_header_carries_config():
    _, transcript = make_transcript(n=15, seed=9, gamma=0.21)
    lines = format_transcript(transcript).splitlines()
    assert lines[0].startswith(f"{FORMAT_NAME} {FORMAT_VERSION} n=15 gamma=0.21")
    assert "seed=9" in lines[0]
    parsed = parse_transcript("\n".join(lines) + "\n")
    assert parsed.config.n_per_group == 15
    assert parsed.config.gamma == 0.21
    assert parsed.config.seed == 9


def test_send_lines_are_label_free():
    _, transcript = make_transcript()
    lines = format_transcript(transcript).splitlines()
    send_lines = [l for l in lines if l.startswith("S ")]
    assert len(send_lines) == 24
    for k, line in enumerate(send_lines):
        tokens = line.split()
        # marker, request index, two feature floats and nothing else
        assert len(tokens) == 4
        assert tokens[1] == str(k)
        float(tokens[2]), float(tokens[3])


def test_write_read_replay_round_trip(tmp_path):
    verdict, transcript = make_transcript(n=30, seed=2)
    path = tmp_path / "session.txt"
    write_transcript(transcript, str(path))
    stored = read_transcript(str(path))
    assert format_transcript(stored) == format_transcript(transcript)
    replayed = replay_transcript(str(path))
    assert replayed.flag is verdict.flag
    assert replayed.theta_hat == verdict.theta_hat
    assert replayed.fidelity_hat == verdict.fidelity_hat


def test_replay_detects_verdict_tampering(tmp_path):
    _, transcript = make_transcript(n=30, seed=3)
    text = format_transcript(transcript)
    flipped = text.replace("V ACCEPT", "V REJECT") if "V ACCEPT" in text else text.replace(
        "V REJECT", "V ACCEPT"
    )
    path = tmp_path / "tampered.txt"
    path.write_text(flipped)
    with pytest.raises(TranscriptError):
        replay_transcript(str(path))


def test_replay_detects_outcome_tampering(tmp_path):
    verdict, transcript = make_transcript(n=60, seed=5)
    lines = format_transcript(transcript).splitlines()
    # flip every measurement outcome of group 0
    flipped = []
    for line in lines:
        if line.startswith("M ") and " 0 " in f" {line.split()[2]} ":
            tokens = line.split()
            tokens[4] = "1" if tokens[4] == "0" else "0"
            line = " ".join(tokens)
        flipped.append(line)
    path = tmp_path / "outcomes.txt"
    path.write_text("\n".join(flipped) + "\n")
    with pytest.raises(TranscriptError):
        replay_transcript(str(path))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace(f"{FORMAT_NAME} {FORMAT_VERSION}", f"{FORMAT_NAME} 99"),
        lambda t: t.replace(FORMAT_NAME, "other-format"),
        lambda t: "\n".join(t.splitlines()[:-2]) + "\n",  # truncated
        lambda t: t + "S 99 0.0 0.0\n",  # trailing junk
        lambda t: t.replace("S 0 ", "S 0 extra ", 1),  # injected field
        lambda t: t.replace("M 0 ", "M 0 2 ", 1),  # bad group value
        lambda t: t.replace(" standard ", " diagonal ", 1),  # unknown basis
        lambda t: t.replace("theta=", "angle=", 1),  # renamed key
        lambda t: "",
    ],
)
def test_parse_rejects_malformed_text(mutate):
    _, transcript = make_transcript(n=12, seed=6)
    broken = mutate(format_transcript(transcript))
    with pytest.raises(TranscriptError):
        parse_transcript(broken)


def test_parse_rejects_group_count_mismatch():
    _, transcript = make_transcript(n=12, seed=7)
    text = format_transcript(transcript)
    # reassign one measurement from group 1 to group 0
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("M ") and line.split()[2] == "1":
            tokens = line.split()
            tokens[2] = "0"
            lines[i] = " ".join(tokens)
            break
    with pytest.raises(TranscriptError):
        parse_transcript("\n".join(lines) + "\n")


def test_parse_error_is_value_error():
    assert issubclass(TranscriptError, ValueError)
    # a missing file is an OS error, not a malformed transcript
    with pytest.raises(FileNotFoundError):
        read_transcript("/nonexistent/path/transcript.txt")


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
@settings(max_examples=300, deadline=None)
def test_feature_floats_survive_the_round_trip(x):
    # features are stored via repr, which round-trips any finite double
    assert float(repr(x)) == x


def test_verdict_line_format():
    verdict, transcript = make_transcript(n=12, seed=8)
    last = format_transcript(transcript).splitlines()[-1]
    tokens = last.split()
    assert tokens[0] == "V"
    assert tokens[1] in (Flag.ACCEPT.value, Flag.REJECT.value)
    assert tokens[2] == f"theta={verdict.theta_hat:.12g}"
    assert tokens[3] == f"fidelity={verdict.fidelity_hat:.12g}"
