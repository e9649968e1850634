"""Interchange format: parsing, validation, round-trip."""

import json
import math

import pytest

from swimmetrics import (
    LandmarkPoint,
    SequenceFormatError,
    generate,
    parse_sequence,
    write_sequence,
    SwimScenario,
)
from conftest import frame_record, header, jsonl, make_frame, make_seq


def test_header_only_sequence():
    seq = parse_sequence(jsonl({"fps": 60, "width": 3840, "height": 2160}))
    assert seq.fps == 60
    assert seq.image_width == 3840
    assert seq.image_height == 2160
    assert seq.frames == ()


def test_miss_marker_frame_without_landmarks_key():
    seq = parse_sequence(jsonl(header(), {"frame": 0, "t": 0.0, "detected": False}))
    assert len(seq.frames) == 1
    assert not seq.frames[0].detected
    assert seq.frames[0].landmarks == ()


def test_wrong_landmark_count_reports_line():
    data = jsonl(header(), frame_record(0, n_landmarks=32))
    with pytest.raises(SequenceFormatError, match=r"landmark count 32 != 33 at line 2"):
        parse_sequence(data)


def test_round_trip_identity():
    seq = make_seq([
        make_frame(0, overrides={5: (123.456789012, 0.000012345)}),
        make_frame(1, detected=False),
        make_frame(3),
    ])
    assert parse_sequence(write_sequence(seq)) == seq


def test_round_trip_preserves_awkward_floats():
    pt = LandmarkPoint(x=1.0 / 3.0, y=2.0 ** -20, visibility=0.1)
    seq = make_seq([make_frame(0, overrides={0: (pt.x, pt.y)})])
    out = parse_sequence(write_sequence(seq))
    assert out.frames[0].point(0).x == 1.0 / 3.0
    assert out.frames[0].point(0).y == 2.0 ** -20


def test_write_is_deterministic_for_generated_sequence():
    scenario = SwimScenario(cadence=2.0, velocity=1.2, duration=2.0 / 60.0, fps=60.0, seed=11)
    a = write_sequence(generate(scenario)[0])
    b = write_sequence(generate(scenario)[0])
    assert a == b


def test_single_undetected_frame_writes_one_miss_line():
    seq = make_seq([make_frame(0), make_frame(1, detected=False), make_frame(2)])
    lines = write_sequence(seq).decode().strip().splitlines()
    assert sum(1 for ln in lines if '"detected":false' in ln) == 1


def test_z_coordinate_accepted_and_discarded():
    rec = frame_record(0)
    for lm in rec["landmarks"]:
        lm["z"] = -0.5
    seq = parse_sequence(jsonl(header(), rec))
    assert '"z"' not in write_sequence(seq).decode()


def test_unknown_keys_tolerated():
    rec = frame_record(0)
    rec["extra"] = {"anything": 1}
    parse_sequence(jsonl(header(), rec))


def test_frame_index_gaps_parse():
    seq = parse_sequence(jsonl(header(), frame_record(0), frame_record(7)))
    assert [f.frame_index for f in seq.frames] == [0, 7]


@pytest.mark.parametrize(
    "records, pattern",
    [
        ([frame_record(0)], "missing header"),
        ([header(), frame_record(1), frame_record(1)], "not strictly increasing"),
        ([header(), frame_record(2), frame_record(1)], "not strictly increasing"),
        ([header(fps=-5)], "fps"),
        ([header(width=0)], "dimensions"),
        ([header(), {"frame": 0, "t": -1.0, "detected": False}], "must be >= 0"),
        ([header(), {"frame": 0, "t": 5.0, "detected": False}], "inconsistent"),
        ([header(), {"frame": 0, "t": 0.0}], "missing 'detected'"),
        ([header(), {"frame": 0, "t": 0.0, "detected": "yes"}], "not a boolean"),
        ([header(), {"frame": 0, "t": 0.0, "detected": True}], "missing 'landmarks'"),
        (
            [header(), dict(frame_record(0, detected=False), landmarks=[{"x": 1, "y": 1, "v": 1}])],
            "undetected frame carries landmarks",
        ),
        ([header(), {"frame": -1, "t": 0.0, "detected": False}], "non-negative"),
    ],
)
def test_invalid_sequences_rejected(records, pattern):
    with pytest.raises(SequenceFormatError, match=pattern):
        parse_sequence(jsonl(*records))


def test_nonfinite_coordinate_rejected_with_line():
    rec = frame_record(1)
    rec["landmarks"][12]["x"] = math.nan
    text = json.dumps(header()) + "\n" + json.dumps(rec) + "\n"
    with pytest.raises(SequenceFormatError, match="line 2") as info:
        parse_sequence(text)
    assert info.value.line == 2


def test_visibility_out_of_range_rejected():
    rec = frame_record(0)
    rec["landmarks"][3]["v"] = 1.5
    with pytest.raises(SequenceFormatError, match="visibility"):
        parse_sequence(jsonl(header(), rec))


def test_malformed_json_line_number():
    data = (json.dumps(header()) + "\n{not json}\n").encode()
    with pytest.raises(SequenceFormatError, match="line 2"):
        parse_sequence(data)


def test_empty_input_rejected():
    with pytest.raises(SequenceFormatError, match="missing header"):
        parse_sequence(b"")


def test_timestamp_within_one_frame_of_index_accepted():
    # t may deviate from frame/fps by up to 1/fps
    rec = {"frame": 6, "t": 6 / 60.0 + 0.9 / 60.0, "detected": False}
    seq = parse_sequence(jsonl(header(), rec))
    assert seq.frames[0].timestamp == pytest.approx(0.115)


def test_parse_accepts_bytes_str_and_stream(tmp_path):
    data = jsonl(header(), frame_record(0))
    assert parse_sequence(data) == parse_sequence(data.decode())
    path = tmp_path / "seq.jsonl"
    path.write_bytes(data)
    with path.open("rb") as fh:
        assert parse_sequence(fh) == parse_sequence(data)
