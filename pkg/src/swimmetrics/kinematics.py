"""Reference line and per-side upper-arm angle series.

The reference line runs from the hip midpoint to the nose. Each upper
arm (shoulder to elbow) gets a full-circle angle against that line,
measured in opposite rotation senses for the two sides so that
mirror-symmetric arm positions produce equal angles: zero means the arm
points where the nose points, and the angle grows over the arm's
lateral sweep on its own side of the body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import GeometryError, InsufficientDataError
from .landmarks import LandmarkFrame, LandmarkIndex
from .preprocess import CorrectedSequence

# Below this length in pixels a direction vector is considered noise.
EPS_LENGTH_PX = 1.0


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ReferenceLine:
    """Body line: origin at the hip midpoint, unit direction toward the nose."""

    origin: tuple[float, float]
    direction: tuple[float, float]


@dataclass(frozen=True)
class AngleSample:
    timestamp: float
    angle: float  # degrees in [0, 360)

    def __post_init__(self):
        if not 0.0 <= self.angle < 360.0:
            raise ValueError(f"angle {self.angle} outside [0, 360)")
        if self.timestamp < 0:
            raise ValueError(f"timestamp {self.timestamp} < 0")


@dataclass(frozen=True)
class AngleSeries:
    """Time-ordered angle samples for one side; gaps are preserved."""

    side: Side
    samples: tuple[AngleSample, ...]
    source_fps: float

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        prev = -math.inf
        for s in self.samples:
            if s.timestamp <= prev:
                raise ValueError("sample timestamps not strictly increasing")
            prev = s.timestamp

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(s.timestamp for s in self.samples)

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(s.angle for s in self.samples)

    @property
    def span(self) -> float:
        if not self.samples:
            return 0.0
        return self.samples[-1].timestamp - self.samples[0].timestamp


def reference_line(frame: LandmarkFrame) -> ReferenceLine:
    """Hip-midpoint origin and unit vector toward the nose.

    Raises GeometryError when the nose sits within EPS_LENGTH_PX of the
    hip midpoint; such frames are excluded from angle series.
    """
    if not frame.detected:
        raise GeometryError("frame has no landmarks")
    nose = frame.point(LandmarkIndex.NOSE)
    hip_l = frame.point(LandmarkIndex.LEFT_HIP)
    hip_r = frame.point(LandmarkIndex.RIGHT_HIP)
    ox = (hip_l.x + hip_r.x) / 2.0
    oy = (hip_l.y + hip_r.y) / 2.0
    dx = nose.x - ox
    dy = nose.y - oy
    length = math.hypot(dx, dy)
    if length < EPS_LENGTH_PX:
        raise GeometryError(
            f"nose-to-hip-midpoint distance {length:.3g} px is degenerate"
        )
    return ReferenceLine(origin=(ox, oy), direction=(dx / length, dy / length))


def arm_angle(frame: LandmarkFrame, side: Side) -> float:
    """Full-circle upper-arm angle in degrees, [0, 360).

    Uses atan2 of the (cross, dot) of the reference direction with the
    shoulder-to-elbow vector; the cross term is negated for the left arm
    so the two sides rotate in opposite senses and symmetric strokes
    yield equal angles.
    """
    ref = reference_line(frame)
    if side is Side.RIGHT:
        shoulder = frame.point(LandmarkIndex.RIGHT_SHOULDER)
        elbow = frame.point(LandmarkIndex.RIGHT_ELBOW)
    else:
        shoulder = frame.point(LandmarkIndex.LEFT_SHOULDER)
        elbow = frame.point(LandmarkIndex.LEFT_ELBOW)
    ux = elbow.x - shoulder.x
    uy = elbow.y - shoulder.y
    if math.hypot(ux, uy) < EPS_LENGTH_PX:
        raise GeometryError("zero-length upper-arm vector")
    dx, dy = ref.direction
    cross = dx * uy - dy * ux
    dot = dx * ux + dy * uy
    if side is Side.LEFT:
        cross = -cross
    return math.degrees(math.atan2(cross, dot)) % 360.0


def angle_series(seq: CorrectedSequence, side: Side) -> AngleSeries:
    """One AngleSample per frame where the arm angle is computable.

    Misses and degenerate-geometry frames are skipped, so the series can
    have gaps in time. Raises InsufficientDataError when no frame yields
    an angle.
    """
    samples = []
    last_t = -math.inf
    for frame in seq.base.frames:
        if not frame.detected:
            continue
        try:
            angle = arm_angle(frame, side)
        except GeometryError:
            continue
        if frame.timestamp <= last_t:  # duplicate timestamps cannot be ordered
            continue
        samples.append(AngleSample(timestamp=frame.timestamp, angle=angle))
        last_t = frame.timestamp
    if not samples:
        raise InsufficientDataError(f"no computable {side.value}-arm angles")
    return AngleSeries(side=side, samples=tuple(samples), source_fps=seq.base.fps)
