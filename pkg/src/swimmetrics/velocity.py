"""Velocity from lane markers at known spacing.

A pool's lane-rope distance markers sit a fixed distance apart (10 m in
a standard Olympic pool). Each video frame with a detected head is
tested for a marker in a small window on the trailing side of the head;
the rising edges of that boolean series are the marker-crossing times,
and distance over time between crossings gives the velocity. The camera
may move freely: adjacency is relative to the head, never to fixed
image coordinates.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientDataError, SequenceFormatError
from .landmarks import LandmarkPoint
from .preprocess import SwimDirection

logger = logging.getLogger(__name__)

DEFAULT_MARKER_SPACING = 10.0        # m between consecutive lane markers
DEFAULT_COLOR_TOLERANCE = 40         # per-channel distance, 0-255
DEFAULT_CROP_WIDTH = 60              # px, trailing-side search window
DEFAULT_CROP_HEIGHT = 40             # px
DEFAULT_MIN_COLORED_FRACTION = 0.02  # fraction of crop pixels matching
DEFAULT_REFRACTORY = 2.0             # s, merges splash flicker after a crossing


@dataclass(frozen=True)
class PoolCalibration:
    marker_color: tuple[int, int, int]
    marker_spacing: float = DEFAULT_MARKER_SPACING
    color_tolerance: int = DEFAULT_COLOR_TOLERANCE
    crop_width: int = DEFAULT_CROP_WIDTH
    crop_height: int = DEFAULT_CROP_HEIGHT
    min_colored_fraction: float = DEFAULT_MIN_COLORED_FRACTION

    def __post_init__(self):
        if self.marker_spacing <= 0:
            raise ValueError(f"marker_spacing {self.marker_spacing} must be > 0")
        if self.crop_width <= 0 or self.crop_height <= 0:
            raise ValueError("crop dimensions must be > 0")
        if not 0.0 < self.min_colored_fraction <= 1.0:
            raise ValueError(
                f"min_colored_fraction {self.min_colored_fraction} outside (0, 1]"
            )


@dataclass(frozen=True)
class AdjacencySample:
    """One frame's head-next-to-marker verdict."""

    timestamp: float
    frame_index: int
    adjacent: bool


@dataclass(frozen=True)
class MarkerCrossing:
    timestamp: float
    frame_index: int
    cumulative_distance: float  # k * marker_spacing for the k-th crossing


@dataclass(frozen=True)
class VelocitySegment:
    t_start: float
    t_end: float
    distance: float
    velocity: float  # m/s

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("segment must have t_end > t_start")
        if self.velocity <= 0:
            raise ValueError("segment velocity must be > 0")


def _crop_bounds(
    head: LandmarkPoint, cal: PoolCalibration, direction: SwimDirection
) -> tuple[int, int, int, int]:
    """Search window (x0, x1, y0, y1), half-open, on the trailing side."""
    hx, hy = int(round(head.x)), int(round(head.y))
    cw, ch = cal.crop_width, cal.crop_height
    if direction.axis == "horizontal":
        y0, y1 = hy - ch // 2, hy - ch // 2 + ch
        if direction.sense > 0:
            x0, x1 = hx - cw, hx
        else:
            x0, x1 = hx + 1, hx + 1 + cw
    else:
        x0, x1 = hx - cw // 2, hx - cw // 2 + cw
        if direction.sense > 0:
            y0, y1 = hy - ch, hy
        else:
            y0, y1 = hy + 1, hy + 1 + ch
    return x0, x1, y0, y1


def marker_adjacent(
    frame_pixels: np.ndarray,
    head: LandmarkPoint,
    cal: PoolCalibration,
    direction: SwimDirection,
) -> bool:
    """True when the trailing-side window next to the head shows the marker.

    The window is crop_width x crop_height on the side opposite the swim
    direction; a pixel matches when every RGB channel is within
    color_tolerance of the calibrated marker color, and the verdict is
    whether the matching fraction reaches min_colored_fraction. A window
    clipped entirely off the raster yields False with a warning.
    """
    height, width = frame_pixels.shape[:2]
    if not (0 <= head.x < width and 0 <= head.y < height):
        raise ValueError(
            f"head ({head.x:.1f}, {head.y:.1f}) outside raster {width}x{height}"
        )
    x0, x1, y0, y1 = _crop_bounds(head, cal, direction)
    x0, x1 = max(x0, 0), min(x1, width)
    y0, y1 = max(y0, 0), min(y1, height)
    if x0 >= x1 or y0 >= y1:
        logger.warning(
            "marker window fully outside raster for head (%.0f, %.0f)", head.x, head.y
        )
        return False
    crop = frame_pixels[y0:y1, x0:x1].astype(np.int16)
    color = np.asarray(cal.marker_color, dtype=np.int16)
    matches = np.all(np.abs(crop - color) <= cal.color_tolerance, axis=2)
    return bool(matches.mean() >= cal.min_colored_fraction)


def extract_crossings(
    adjacency: Iterable[AdjacencySample],
    cal: PoolCalibration,
    refractory: float = DEFAULT_REFRACTORY,
) -> list[MarkerCrossing]:
    """Rising edges of the adjacency series, one crossing per marker.

    A crossing is stamped at the first sample of each maximal true-run;
    runs starting within `refractory` seconds of the previous crossing
    are merged into it, since one marker stays adjacent over many frames
    and splashes can blink the verdict. The k-th crossing is k spacings
    of cumulative distance.
    """
    crossings: list[MarkerCrossing] = []
    in_run = False
    for sample in adjacency:
        if sample.adjacent and not in_run:
            if not crossings or sample.timestamp - crossings[-1].timestamp > refractory:
                crossings.append(
                    MarkerCrossing(
                        timestamp=sample.timestamp,
                        frame_index=sample.frame_index,
                        cumulative_distance=(len(crossings) + 1) * cal.marker_spacing,
                    )
                )
        in_run = sample.adjacent
    return crossings


def velocity_segments(
    crossings: Sequence[MarkerCrossing],
) -> tuple[list[VelocitySegment], float]:
    """Per-interval velocities plus the first-to-last average.

    Needs at least two crossings; distances come from the crossings'
    cumulative values so externally supplied event files keep their own
    spacing.
    """
    if len(crossings) < 2:
        raise InsufficientDataError(
            f"velocity needs >= 2 marker crossings, got {len(crossings)}"
        )
    segments = []
    for a, b in zip(crossings, crossings[1:]):
        distance = b.cumulative_distance - a.cumulative_distance
        segments.append(
            VelocitySegment(
                t_start=a.timestamp,
                t_end=b.timestamp,
                distance=distance,
                velocity=distance / (b.timestamp - a.timestamp),
            )
        )
    total_distance = crossings[-1].cumulative_distance - crossings[0].cumulative_distance
    total_time = crossings[-1].timestamp - crossings[0].timestamp
    return segments, total_distance / total_time


def load_crossings(path: str | Path) -> list[MarkerCrossing]:
    """Read crossing events from JSONL: {"t": <s>, "frame": <int>, "distance_m": <m>}."""
    crossings = []
    prev_t = -math.inf
    prev_d = -math.inf
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SequenceFormatError(
                f"malformed crossing record ({exc.msg})", line=lineno
            ) from exc
        try:
            t = float(obj["t"])
            frame = int(obj["frame"])
            distance = float(obj["distance_m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SequenceFormatError(
                "crossing record needs numeric t/frame/distance_m", line=lineno
            ) from exc
        if t <= prev_t or distance <= prev_d:
            raise SequenceFormatError(
                "crossing timestamps and distances must strictly increase",
                line=lineno,
            )
        crossings.append(
            MarkerCrossing(timestamp=t, frame_index=frame, cumulative_distance=distance)
        )
        prev_t, prev_d = t, distance
    return crossings


def save_crossings(crossings: Sequence[MarkerCrossing], path: str | Path):
    lines = [
        json.dumps(
            {"t": c.timestamp, "frame": c.frame_index, "distance_m": c.cumulative_distance},
            separators=(",", ":"),
        )
        for c in crossings
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
