"""CLI end-to-end behavior and report contract."""

import json
import subprocess
import sys

import pytest

from swimmetrics.cli import main
from conftest import header, jsonl

SCENARIO = {
    "cadence": 2.0,
    "velocity": 1.25,
    "duration": 20.0,
    "fps": 60.0,
    "seed": 42,
}


@pytest.fixture
def sim_files(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(json.dumps(SCENARIO))
    seq_path = tmp_path / "seq.jsonl"
    truth_path = tmp_path / "truth.json"
    code = main([
        "simulate", "--scenario", str(scenario_path),
        "--out", str(seq_path), "--truth", str(truth_path), "--quiet",
    ])
    assert code == 0
    return tmp_path, seq_path, truth_path


def run_analyze(seq_path, report_path, *extra):
    return main([
        "analyze", "--input", str(seq_path), "--report", str(report_path),
        "--quiet", *extra,
    ])


def test_end_to_end_report(sim_files):
    tmp_path, seq_path, _ = sim_files
    report_path = tmp_path / "report.json"
    assert run_analyze(seq_path, report_path) == 0
    report = json.loads(report_path.read_text())
    assert report["detection_rate"] == 1.0
    assert report["direction"] == "ltr"
    assert report["stroke"]["headline"]["method"] == "fft"
    assert abs(report["stroke"]["headline"]["duration_s"] - 2.0) <= 0.3
    assert report["symmetry"]["symmetric"]
    assert report["velocity"] is None  # no marker input given
    assert report["config"]["rate_cutoff"] == 0.9


def test_report_validates_against_schema(sim_files):
    jsonschema = pytest.importorskip("jsonschema")
    from importlib.resources import files

    tmp_path, seq_path, _ = sim_files
    report_path = tmp_path / "report.json"
    run_analyze(seq_path, report_path)
    schema = json.loads(
        files("swimmetrics").joinpath("schemas/report.schema.json").read_text()
    )
    jsonschema.validate(json.loads(report_path.read_text()), schema)


def test_reproducible_reports_are_byte_identical(sim_files):
    tmp_path, seq_path, _ = sim_files
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_analyze(seq_path, a, "--reproducible")
    run_analyze(seq_path, b, "--reproducible")
    assert a.read_bytes() == b.read_bytes()
    assert "generated_at" not in json.loads(a.read_text())


def test_series_and_spectrum_outputs(sim_files):
    tmp_path, seq_path, _ = sim_files
    report_path = tmp_path / "report.json"
    series_dir = tmp_path / "series"
    spectrum = tmp_path / "spectrum.csv"
    run_analyze(seq_path, report_path,
                "--series-out", str(series_dir), "--spectrum-out", str(spectrum))
    left = (series_dir / "angles_left.csv").read_text().splitlines()
    right = (series_dir / "angles_right.csv").read_text().splitlines()
    assert left[0] == "t,angle_deg"
    assert len(left) == len(right) == 1202  # header + one line per frame
    spec_lines = spectrum.read_text().splitlines()
    assert spec_lines[0] == "f_hz,magnitude"
    assert len(spec_lines) > 100


def test_velocity_from_crossing_events(sim_files, tmp_path):
    _, seq_path, _ = sim_files
    events = tmp_path / "events.jsonl"
    events.write_text(
        '{"t":3.0,"frame":180,"distance_m":10.0}\n'
        '{"t":10.0,"frame":600,"distance_m":20.0}\n'
    )
    report_path = tmp_path / "report.json"
    assert run_analyze(seq_path, report_path, "--crossings-in", str(events)) == 0
    velocity = json.loads(report_path.read_text())["velocity"]
    assert velocity["average_mps"] == pytest.approx(10.0 / 7.0)
    assert len(velocity["segments"]) == 1


def test_velocity_from_rendered_frames(tmp_path):
    scenario = dict(SCENARIO, velocity=1.0, duration=21.0, seed=7)
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(json.dumps(scenario))
    seq_path = tmp_path / "seq.jsonl"
    frames_dir = tmp_path / "frames"
    assert main([
        "simulate", "--scenario", str(scenario_path), "--out", str(seq_path),
        "--frames-out", str(frames_dir), "--quiet",
    ]) == 0
    report_path = tmp_path / "report.json"
    code = main([
        "analyze", "--input", str(seq_path), "--report", str(report_path),
        "--frames-dir", str(frames_dir), "--marker-color", "220,40,40",
        "--crop-width", "24", "--quiet",
    ])
    assert code == 0
    velocity = json.loads(report_path.read_text())["velocity"]
    assert velocity is not None
    assert velocity["average_mps"] == pytest.approx(1.0, abs=0.05)


def test_raw_stream_frames(tmp_path):
    scenario = dict(SCENARIO, velocity=1.3, duration=17.0, seed=3)
    scenario_path = tmp_path / "scenario.json"
    scenario_path.write_text(json.dumps(scenario))
    seq_path = tmp_path / "seq.jsonl"
    raw_path = tmp_path / "frames.rgb"
    main([
        "simulate", "--scenario", str(scenario_path), "--out", str(seq_path),
        "--frames-raw-out", str(raw_path), "--quiet",
    ])
    report_path = tmp_path / "report.json"
    crossings_out = tmp_path / "crossings.jsonl"
    code = main([
        "analyze", "--input", str(seq_path), "--report", str(report_path),
        "--frames-raw", str(raw_path), "--marker-color", "220,40,40",
        "--crop-width", "24", "--crossings-out", str(crossings_out), "--quiet",
    ])
    assert code == 0
    velocity = json.loads(report_path.read_text())["velocity"]
    assert velocity["average_mps"] == pytest.approx(1.3, abs=0.05)
    assert len(crossings_out.read_text().splitlines()) == len(velocity["crossings"])


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json}\n")
    assert main(["analyze", "--input", str(bad), "--quiet"]) == 1
    missing = tmp_path / "missing.jsonl"
    assert main(["analyze", "--input", str(missing), "--quiet"]) == 1


def test_exit_code_no_detected_frames(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_bytes(jsonl(
        header(),
        {"frame": 0, "t": 0.0, "detected": False},
        {"frame": 1, "t": 1 / 60.0, "detected": False},
    ))
    assert main(["analyze", "--input", str(path), "--quiet"]) == 2


def test_direction_override(sim_files, tmp_path):
    _, seq_path, _ = sim_files
    report_path = tmp_path / "report.json"
    run_analyze(seq_path, report_path, "--direction", "rtl")
    report = json.loads(report_path.read_text())
    assert report["direction"] == "rtl"
    assert report["config"]["direction"] == "rtl"


def test_fps_override_rescales_time(sim_files, tmp_path):
    _, seq_path, _ = sim_files
    report_path = tmp_path / "report.json"
    run_analyze(seq_path, report_path, "--fps-override", "30")
    report = json.loads(report_path.read_text())
    assert report["input"]["fps"] == 30.0
    # same frames at half the rate last twice as long per cycle
    assert abs(report["stroke"]["headline"]["duration_s"] - 4.0) <= 0.6


def test_batch_mode(tmp_path, sim_files):
    _, seq_path, _ = sim_files
    second = tmp_path / "copy.jsonl"
    second.write_bytes(seq_path.read_bytes())
    out_dir = tmp_path / "reports"
    code = main([
        "analyze", "--input", str(seq_path), str(second),
        "--report", str(out_dir), "--jobs", "2", "--quiet",
    ])
    assert code == 0
    names = sorted(p.name for p in out_dir.glob("*.report.json"))
    assert names == ["copy.report.json", "seq.report.json"]


def test_module_entry_point(sim_files):
    tmp_path, seq_path, _ = sim_files
    proc = subprocess.run(
        [sys.executable, "-m", "swimmetrics", "analyze",
         "--input", str(seq_path), "--reproducible", "--quiet"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["tool"]["name"] == "swimmetrics"
