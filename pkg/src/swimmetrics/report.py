"""End-to-end analysis pipeline producing the JSON metrics report.

Stages run in a fixed order: parse, detection rate, direction, side
correction, angle series, symmetry, stroke duration, velocity. A stage
that cannot run (too little data, no marker input) drops its report
section and logs a warning instead of failing the run; only unparseable
input or a sequence with no detected frames is fatal.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .errors import (
    EstimationError,
    GeometryError,
    InsufficientDataError,
    SequenceFormatError,
)
from .kinematics import AngleSeries, Side, angle_series
from .landmarks import LandmarkIndex, LandmarkSequence, load_sequence
from .metrics import (
    DEFAULT_F_MAX,
    DEFAULT_F_MIN,
    DEFAULT_MIN_SEPARATION,
    DEFAULT_PEAK_PROMINENCE,
    DEFAULT_RATE_CUTOFF,
    DEFAULT_SI_THRESHOLD,
    StrokeEstimate,
    stroke_duration,
    symmetry_index,
)
from .preprocess import (
    CorrectedSequence,
    SwimDirection,
    correct_sides,
    detection_rate,
    estimate_direction,
)
from .velocity import (
    DEFAULT_REFRACTORY,
    AdjacencySample,
    MarkerCrossing,
    PoolCalibration,
    extract_crossings,
    load_crossings,
    marker_adjacent,
    velocity_segments,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE_ERROR = 1
EXIT_NO_DETECTIONS = 2

RasterLookup = Callable[[int], Optional[np.ndarray]]


@dataclass
class AnalysisConfig:
    """Every tunable of the pipeline; echoed verbatim into the report."""

    direction: str = "auto"            # auto|ltr|rtl|ttb|btt
    si_threshold: float = DEFAULT_SI_THRESHOLD
    rate_cutoff: float = DEFAULT_RATE_CUTOFF
    f_min: float = DEFAULT_F_MIN
    f_max: float = DEFAULT_F_MAX
    min_separation: float = DEFAULT_MIN_SEPARATION
    prominence: float = DEFAULT_PEAK_PROMINENCE
    refractory: float = DEFAULT_REFRACTORY
    calibration: Optional[PoolCalibration] = None
    fps_override: Optional[float] = None
    reproducible: bool = False

    def to_echo(self) -> dict:
        cal = self.calibration
        return {
            "direction": self.direction,
            "si_threshold_percent": self.si_threshold,
            "rate_cutoff": self.rate_cutoff,
            "f_min_hz": self.f_min,
            "f_max_hz": self.f_max,
            "min_separation_s": self.min_separation,
            "prominence_deg": self.prominence,
            "refractory_s": self.refractory,
            "fps_override": self.fps_override,
            "marker": None
            if cal is None
            else {
                "color_rgb": list(cal.marker_color),
                "tolerance": cal.color_tolerance,
                "spacing_m": cal.marker_spacing,
                "crop_width_px": cal.crop_width,
                "crop_height_px": cal.crop_height,
                "min_colored_fraction": cal.min_colored_fraction,
            },
        }


@dataclass
class AnalysisResult:
    report: dict
    exit_code: int
    warnings: list[str] = field(default_factory=list)
    # non-report artifacts for CSV dumps
    series_left: Optional[AngleSeries] = None
    series_right: Optional[AngleSeries] = None
    crossings: list[MarkerCrossing] = field(default_factory=list)


def _stroke_json(est: Optional[StrokeEstimate]) -> Optional[dict]:
    if est is None:
        return None
    return {
        "method": est.method,
        "duration_s": est.duration,
        "dominant_frequency_hz": est.dominant_frequency,
        "peak_count": est.peak_count,
    }


def _retime(seq: LandmarkSequence, fps: float) -> LandmarkSequence:
    """Rebuild with an overridden frame rate; timestamps follow the new fps."""
    frames = tuple(
        type(f)(
            frame_index=f.frame_index,
            timestamp=f.frame_index / fps,
            detected=f.detected,
            landmarks=f.landmarks,
        )
        for f in seq.frames
    )
    return LandmarkSequence(
        fps=fps,
        image_width=seq.image_width,
        image_height=seq.image_height,
        frames=frames,
    )


def build_adjacency(
    corrected: CorrectedSequence,
    rasters: RasterLookup,
    cal: PoolCalibration,
    warnings: list[str],
) -> list[AdjacencySample]:
    """Head-vs-marker verdict for every detected frame with a raster."""
    samples = []
    missing = 0
    for frame in corrected.base.frames:
        if not frame.detected:
            continue
        raster = rasters(frame.frame_index)
        if raster is None:
            missing += 1
            continue
        head = frame.point(LandmarkIndex.NOSE)
        width, height = corrected.base.image_width, corrected.base.image_height
        if not (0 <= head.x < width and 0 <= head.y < height):
            continue  # head outside the raster, verdict undefined
        samples.append(
            AdjacencySample(
                timestamp=frame.timestamp,
                frame_index=frame.frame_index,
                adjacent=marker_adjacent(raster, head, cal, corrected.direction),
            )
        )
    if missing:
        warnings.append(f"no raster for {missing} detected frames")
    return samples


def analyze(
    seq: LandmarkSequence,
    config: AnalysisConfig,
    rasters: Optional[RasterLookup] = None,
    crossings_in: Optional[list[MarkerCrossing]] = None,
    input_name: str = "<memory>",
) -> AnalysisResult:
    """Run all stages over a parsed sequence and assemble the report."""
    warnings: list[str] = []

    if config.fps_override is not None:
        seq = _retime(seq, config.fps_override)

    detected_count = sum(1 for f in seq.frames if f.detected)
    if detected_count == 0:
        return AnalysisResult(report={}, exit_code=EXIT_NO_DETECTIONS,
                              warnings=["no detected frames"])

    rate = detection_rate(seq)

    if config.direction == "auto":
        try:
            direction = estimate_direction(seq)
        except (InsufficientDataError, EstimationError) as exc:
            warnings.append(f"direction estimation failed: {exc}")
            direction = None
    else:
        direction = SwimDirection(config.direction)

    corrected = correct_sides(seq, direction) if direction else None

    series: dict[Side, Optional[AngleSeries]] = {Side.LEFT: None, Side.RIGHT: None}
    if corrected:
        for side in (Side.LEFT, Side.RIGHT):
            try:
                series[side] = angle_series(corrected, side)
            except (InsufficientDataError, GeometryError) as exc:
                warnings.append(f"{side.value} angle series unavailable: {exc}")

    si_json = None
    if series[Side.LEFT] and series[Side.RIGHT]:
        try:
            si = symmetry_index(
                series[Side.LEFT], series[Side.RIGHT], threshold=config.si_threshold
            )
            si_json = {
                "si_percent": si.si_percent,
                "x_left_deg": si.x_left,
                "x_right_deg": si.x_right,
                "symmetric": si.symmetric,
                "threshold_percent": si.threshold,
            }
        except (InsufficientDataError, EstimationError) as exc:
            warnings.append(f"symmetry index unavailable: {exc}")

    estimates: dict[Side, Optional[StrokeEstimate]] = {Side.LEFT: None, Side.RIGHT: None}
    for side in (Side.LEFT, Side.RIGHT):
        if series[side] is None:
            continue
        try:
            estimates[side] = stroke_duration(
                series[side],
                detection_rate=rate,
                rate_cutoff=config.rate_cutoff,
                f_min=config.f_min,
                f_max=config.f_max,
                min_separation=config.min_separation,
                prominence=config.prominence,
            )
        except (InsufficientDataError, EstimationError) as exc:
            warnings.append(f"{side.value} stroke duration unavailable: {exc}")

    stroke_json = None
    available = [e for e in estimates.values() if e is not None]
    if available:
        methods = {e.method for e in available}
        stroke_json = {
            "headline": {
                "method": methods.pop() if len(methods) == 1 else "mixed",
                "duration_s": sum(e.duration for e in available) / len(available),
            },
            "left": _stroke_json(estimates[Side.LEFT]),
            "right": _stroke_json(estimates[Side.RIGHT]),
        }

    crossings: list[MarkerCrossing] = []
    if crossings_in is not None:
        crossings = crossings_in
    elif rasters is not None and corrected is not None:
        if config.calibration is None:
            warnings.append("frames supplied but no marker calibration; velocity skipped")
        else:
            adjacency = build_adjacency(corrected, rasters, config.calibration, warnings)
            crossings = extract_crossings(
                adjacency, config.calibration, refractory=config.refractory
            )

    velocity_json = None
    if crossings:
        try:
            segments, average = velocity_segments(crossings)
            velocity_json = {
                "average_mps": average,
                "segments": [
                    {
                        "t_start_s": s.t_start,
                        "t_end_s": s.t_end,
                        "distance_m": s.distance,
                        "velocity_mps": s.velocity,
                    }
                    for s in segments
                ],
                "crossings": [
                    {
                        "t": c.timestamp,
                        "frame": c.frame_index,
                        "distance_m": c.cumulative_distance,
                    }
                    for c in crossings
                ],
            }
        except InsufficientDataError as exc:
            warnings.append(f"velocity unavailable: {exc}")
    elif rasters is not None or crossings_in is not None:
        warnings.append("velocity unavailable: no marker crossings found")

    report = {
        "tool": {"name": "swimmetrics", "version": __version__},
        "input": {
            "name": input_name,
            "fps": seq.fps,
            "width": seq.image_width,
            "height": seq.image_height,
            "frames": len(seq.frames),
            "detected_frames": detected_count,
        },
        "detection_rate": rate,
        "direction": direction.value if direction else None,
        "symmetry": si_json,
        "stroke": stroke_json,
        "velocity": velocity_json,
        "config": config.to_echo(),
        "warnings": warnings,
    }
    if not config.reproducible:
        import datetime

        report["generated_at"] = datetime.datetime.now(
            datetime.timezone.utc
        ).isoformat()
    for w in warnings:
        logger.warning("%s", w)
    return AnalysisResult(
        report=report,
        exit_code=EXIT_OK,
        warnings=warnings,
        series_left=series[Side.LEFT],
        series_right=series[Side.RIGHT],
        crossings=list(crossings),
    )


def analyze_file(
    input_path: str | Path,
    config: AnalysisConfig,
    rasters: Optional[RasterLookup] = None,
    crossings_path: Optional[str | Path] = None,
) -> AnalysisResult:
    """Parse a JSONL file and analyze it; maps parse failures to exit code 1."""
    try:
        seq = load_sequence(input_path)
    except (SequenceFormatError, OSError) as exc:
        logger.error("cannot parse %s: %s", input_path, exc)
        return AnalysisResult(report={}, exit_code=EXIT_PARSE_ERROR,
                              warnings=[str(exc)])
    crossings_in = None
    if crossings_path is not None:
        try:
            crossings_in = load_crossings(crossings_path)
        except (SequenceFormatError, OSError) as exc:
            logger.error("cannot parse crossings %s: %s", crossings_path, exc)
            return AnalysisResult(report={}, exit_code=EXIT_PARSE_ERROR,
                                  warnings=[str(exc)])
    return analyze(
        seq,
        config,
        rasters=rasters,
        crossings_in=crossings_in,
        input_name=Path(input_path).name,
    )


def frames_dir_lookup(directory: str | Path) -> RasterLookup:
    """Raster lookup over image files named frame_%06d.<ext>."""
    from PIL import Image

    directory = Path(directory)
    extensions = (".png", ".jpg", ".jpeg", ".bmp")

    def lookup(frame_index: int) -> Optional[np.ndarray]:
        stem = f"frame_{frame_index:06d}"
        for ext in extensions:
            path = directory / (stem + ext)
            if path.exists():
                with Image.open(path) as img:
                    return np.asarray(img.convert("RGB"))
        return None

    return lookup


def raw_stream_lookup(path: str | Path, width: int, height: int) -> RasterLookup:
    """Raster lookup over a packed RGB stream with stride width*3."""
    path = Path(path)
    frame_bytes = width * height * 3
    size = path.stat().st_size
    if size % frame_bytes:
        raise ValueError(
            f"raw stream size {size} is not a multiple of {width}x{height}x3"
        )
    n_frames = size // frame_bytes
    handle = path.open("rb")

    def lookup(frame_index: int) -> Optional[np.ndarray]:
        if not 0 <= frame_index < n_frames:
            return None
        handle.seek(frame_index * frame_bytes)
        buf = handle.read(frame_bytes)
        return np.frombuffer(buf, dtype=np.uint8).reshape(height, width, 3)

    return lookup
