"""Command-line interface: `analyze` runs the metrics pipeline over a
landmark JSONL file; `simulate` writes synthetic sequences with ground
truth for calibration and testing.

Warnings and progress go to stderr; the report is the only stdout
artifact, so the tool composes in shell pipelines.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import EstimationError, InsufficientDataError
from .kinematics import AngleSeries
from .metrics import (
    DEFAULT_F_MAX,
    DEFAULT_F_MIN,
    DEFAULT_MIN_SEPARATION,
    DEFAULT_PEAK_PROMINENCE,
    DEFAULT_RATE_CUTOFF,
    DEFAULT_SI_THRESHOLD,
    stroke_duration_fft,
)
from .report import (
    EXIT_PARSE_ERROR,
    AnalysisConfig,
    AnalysisResult,
    analyze_file,
    frames_dir_lookup,
    raw_stream_lookup,
)
from .simulate import load_scenario, generate, render_frames
from .velocity import (
    DEFAULT_COLOR_TOLERANCE,
    DEFAULT_CROP_HEIGHT,
    DEFAULT_CROP_WIDTH,
    DEFAULT_MARKER_SPACING,
    DEFAULT_MIN_COLORED_FRACTION,
    DEFAULT_REFRACTORY,
    PoolCalibration,
    save_crossings,
)
from .landmarks import save_sequence, load_sequence

logger = logging.getLogger(__name__)


def _parse_color(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected R,G,B, got {text!r}")
    try:
        rgb = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"non-integer channel in {text!r}") from exc
    if any(not 0 <= c <= 255 for c in rgb):
        raise argparse.ArgumentTypeError(f"channels outside 0..255 in {text!r}")
    return rgb  # type: ignore[return-value]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swimmetrics",
        description="Swimming-performance metrics from landmark time series",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run the metrics pipeline")
    an.add_argument("--input", nargs="+", required=True,
                    help="landmark JSONL file(s)")
    an.add_argument("--report", default=None,
                    help="report JSON path (directory in batch mode); default stdout")
    src = an.add_mutually_exclusive_group()
    src.add_argument("--frames-dir", default=None,
                     help="directory of frame_%%06d images for marker detection")
    src.add_argument("--frames-raw", default=None,
                     help="packed RGB stream (stride width*3) for marker detection")
    src.add_argument("--crossings-in", default=None,
                     help="precomputed marker-crossing events JSONL")
    an.add_argument("--crossings-out", default=None,
                    help="write detected crossing events JSONL")
    an.add_argument("--series-out", default=None, metavar="DIR",
                    help="write per-side angle CSVs (t,angle_deg)")
    an.add_argument("--spectrum-out", default=None, metavar="FILE",
                    help="write the right-arm magnitude spectrum CSV (f_hz,magnitude)")
    an.add_argument("--direction", default="auto",
                    choices=["auto", "ltr", "rtl", "ttb", "btt"])
    an.add_argument("--marker-color", type=_parse_color, default=None,
                    metavar="R,G,B", help="lane marker color (enables velocity)")
    an.add_argument("--marker-tolerance", type=int, default=DEFAULT_COLOR_TOLERANCE)
    an.add_argument("--marker-spacing", type=float, default=DEFAULT_MARKER_SPACING)
    an.add_argument("--crop-width", type=int, default=DEFAULT_CROP_WIDTH)
    an.add_argument("--crop-height", type=int, default=DEFAULT_CROP_HEIGHT)
    an.add_argument("--min-colored-fraction", type=float,
                    default=DEFAULT_MIN_COLORED_FRACTION)
    an.add_argument("--si-threshold", type=float, default=DEFAULT_SI_THRESHOLD)
    an.add_argument("--rate-cutoff", type=float, default=DEFAULT_RATE_CUTOFF)
    an.add_argument("--f-min", type=float, default=DEFAULT_F_MIN)
    an.add_argument("--f-max", type=float, default=DEFAULT_F_MAX)
    an.add_argument("--min-separation", type=float, default=DEFAULT_MIN_SEPARATION)
    an.add_argument("--prominence", type=float, default=DEFAULT_PEAK_PROMINENCE)
    an.add_argument("--refractory", type=float, default=DEFAULT_REFRACTORY)
    an.add_argument("--fps-override", type=float, default=None,
                    help="replace header fps; timestamps are recomputed")
    an.add_argument("--reproducible", action="store_true",
                    help="omit volatile fields so identical inputs give identical bytes")
    an.add_argument("--jobs", type=int, default=1,
                    help="parallel workers in batch mode")
    an.add_argument("--quiet", action="store_true",
                    help="suppress informational logging")

    sim = sub.add_parser("simulate", help="generate a synthetic swim")
    sim.add_argument("--scenario", required=True, help="scenario JSON file")
    sim.add_argument("--out", required=True, help="output landmark JSONL")
    sim.add_argument("--truth", default=None, help="ground-truth JSON sidecar")
    sim.add_argument("--frames-out", default=None, metavar="DIR",
                     help="write rendered frames as frame_%%06d.png")
    sim.add_argument("--frames-raw-out", default=None, metavar="FILE",
                     help="write rendered frames as a packed RGB stream")
    sim.add_argument("--marker-color", type=_parse_color, default=(220, 40, 40))
    sim.add_argument("--marker-spacing", type=float, default=DEFAULT_MARKER_SPACING)
    sim.add_argument("--quiet", action="store_true")
    return parser


def _write_series_csv(series: Optional[AngleSeries], path: Path):
    if series is None:
        return
    lines = ["t,angle_deg"]
    lines += [f"{s.timestamp},{s.angle}" for s in series.samples]
    path.write_text("\n".join(lines) + "\n")


def _write_spectrum_csv(series: Optional[AngleSeries], path: Path,
                        f_min: float, f_max: float):
    if series is None:
        logger.warning("no right-arm series; spectrum not written")
        return
    try:
        est = stroke_duration_fft(series, f_min=f_min, f_max=f_max)
    except (InsufficientDataError, EstimationError) as exc:
        logger.warning("spectrum not written: %s", exc)
        return
    lines = ["f_hz,magnitude"]
    lines += [f"{f},{m}" for f, m in est.spectrum]
    path.write_text("\n".join(lines) + "\n")


def _analyze_one(input_path: str, args, report_path: Optional[Path]) -> AnalysisResult:
    calibration = None
    if args.marker_color is not None:
        calibration = PoolCalibration(
            marker_color=args.marker_color,
            marker_spacing=args.marker_spacing,
            color_tolerance=args.marker_tolerance,
            crop_width=args.crop_width,
            crop_height=args.crop_height,
            min_colored_fraction=args.min_colored_fraction,
        )
    config = AnalysisConfig(
        direction=args.direction,
        si_threshold=args.si_threshold,
        rate_cutoff=args.rate_cutoff,
        f_min=args.f_min,
        f_max=args.f_max,
        min_separation=args.min_separation,
        prominence=args.prominence,
        refractory=args.refractory,
        calibration=calibration,
        fps_override=args.fps_override,
        reproducible=args.reproducible,
    )

    rasters = None
    if args.frames_dir:
        rasters = frames_dir_lookup(args.frames_dir)
    elif args.frames_raw:
        try:
            seq = load_sequence(input_path)
        except Exception:
            seq = None
        if seq is not None:
            rasters = raw_stream_lookup(
                args.frames_raw, seq.image_width, seq.image_height
            )

    result = analyze_file(
        input_path, config, rasters=rasters, crossings_path=args.crossings_in
    )
    if result.exit_code != 0:
        return result

    if args.series_out:
        out_dir = Path(args.series_out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_series_csv(result.series_left, out_dir / "angles_left.csv")
        _write_series_csv(result.series_right, out_dir / "angles_right.csv")
    if args.spectrum_out:
        _write_spectrum_csv(
            result.series_right, Path(args.spectrum_out), args.f_min, args.f_max
        )
    if args.crossings_out:
        save_crossings(result.crossings, args.crossings_out)

    payload = json.dumps(result.report, indent=2) + "\n"
    if report_path is not None:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        report_path.write_text(payload)
        logger.info("report written to %s", report_path)
    else:
        sys.stdout.write(payload)
    return result


def _cmd_analyze(args) -> int:
    inputs = args.input
    if len(inputs) == 1:
        report_path = Path(args.report) if args.report else None
        return _analyze_one(inputs[0], args, report_path).exit_code

    if not args.report:
        logger.error("batch mode needs --report DIRECTORY")
        return EXIT_PARSE_ERROR
    report_dir = Path(args.report)
    report_dir.mkdir(parents=True, exist_ok=True)

    def run(path: str) -> int:
        out = report_dir / (Path(path).stem + ".report.json")
        return _analyze_one(path, args, out).exit_code

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        codes = list(pool.map(run, inputs))
    return max(codes)


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    seq, truth = generate(scenario)
    save_sequence(seq, args.out)
    logger.info("wrote %d frames to %s", len(seq.frames), args.out)
    if args.truth:
        Path(args.truth).write_text(truth.to_json() + "\n")
    if args.frames_out or args.frames_raw_out:
        cal = PoolCalibration(
            marker_color=args.marker_color, marker_spacing=args.marker_spacing
        )
        frames_dir = None
        if args.frames_out:
            frames_dir = Path(args.frames_out)
            frames_dir.mkdir(parents=True, exist_ok=True)
        raw_handle = open(args.frames_raw_out, "wb") if args.frames_raw_out else None
        try:
            for index, raster in render_frames(scenario, cal):
                if frames_dir is not None:
                    from PIL import Image

                    Image.fromarray(raster).save(frames_dir / f"frame_{index:06d}.png")
                if raw_handle is not None:
                    raw_handle.write(raster.tobytes())
        finally:
            if raw_handle is not None:
                raw_handle.close()
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "analyze":
        return _cmd_analyze(args)
    return _cmd_simulate(args)


if __name__ == "__main__":
    sys.exit(main())
