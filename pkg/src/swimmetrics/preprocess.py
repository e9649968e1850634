"""Swim-direction estimation, left/right label correction, detection rate.

Pose models routinely mirror left/right labels on a face-down swimmer.
Because the swimmer is prone, the swim direction fixes which side of the
body line each labeled limb must fall on, so mislabeled symmetric pairs
can be detected and swapped back frame by frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EstimationError, InsufficientDataError
from .landmarks import LandmarkFrame, LandmarkIndex, LandmarkPoint, LandmarkSequence

# Symmetric (left, right) landmark index pairs checked for label swaps.
SYMMETRIC_PAIRS: tuple[tuple[str, int, int], ...] = (
    ("shoulders", LandmarkIndex.LEFT_SHOULDER, LandmarkIndex.RIGHT_SHOULDER),
    ("elbows", LandmarkIndex.LEFT_ELBOW, LandmarkIndex.RIGHT_ELBOW),
    ("wrists", LandmarkIndex.LEFT_WRIST, LandmarkIndex.RIGHT_WRIST),
    ("hips", LandmarkIndex.LEFT_HIP, LandmarkIndex.RIGHT_HIP),
    ("knees", LandmarkIndex.LEFT_KNEE, LandmarkIndex.RIGHT_KNEE),
    ("ankles", LandmarkIndex.LEFT_ANKLE, LandmarkIndex.RIGHT_ANKLE),
)


class SwimDirection(Enum):
    """Dominant travel direction in image coordinates (x right, y down)."""

    LEFT_TO_RIGHT = "ltr"
    RIGHT_TO_LEFT = "rtl"
    TOP_TO_BOTTOM = "ttb"
    BOTTOM_TO_TOP = "btt"

    @property
    def axis(self) -> str:
        if self in (SwimDirection.LEFT_TO_RIGHT, SwimDirection.RIGHT_TO_LEFT):
            return "horizontal"
        return "vertical"

    @property
    def sense(self) -> int:
        """+1 when travel increases the pixel coordinate along the axis."""
        if self in (SwimDirection.LEFT_TO_RIGHT, SwimDirection.TOP_TO_BOTTOM):
            return 1
        return -1

    @property
    def right_side_sign(self) -> int:
        """Sign of (right-limb - left-limb) on the cross-axis coordinate.

        A prone swimmer heading left-to-right carries the right-side limbs
        at larger y; heading right-to-left, at smaller y. For vertical
        travel the same geometry rotated by +-90 degrees puts the rule on
        x with the sign mirrored.
        """
        if self.axis == "horizontal":
            return self.sense
        return -self.sense


@dataclass(frozen=True)
class CorrectedSequence:
    """A sequence with side labels corrected for the given direction.

    ``base`` holds the corrected landmark data; ``swapped_frames`` lists
    the frame indices where at least one pair was relabeled.
    """

    base: LandmarkSequence
    direction: SwimDirection
    swapped_frames: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "swapped_frames", frozenset(self.swapped_frames))
        detected = {f.frame_index for f in self.base.frames if f.detected}
        if not self.swapped_frames <= detected:
            raise ValueError("swapped_frames includes undetected frame indices")


def detection_rate(seq: LandmarkSequence) -> float:
    """Detected frames / total frames, counting index gaps as misses.

    The total spans min..max frame index of the records present, so files
    that omit missed frames entirely score the same as files that mark
    them undetected.
    """
    if not seq.frames:
        raise InsufficientDataError("empty sequence, detection rate undefined")
    total = seq.frames[-1].frame_index - seq.frames[0].frame_index + 1
    detected = sum(1 for f in seq.frames if f.detected)
    return detected / total


def estimate_direction(seq: LandmarkSequence) -> SwimDirection:
    """Dominant axis and sense of the nose's net displacement.

    Compares the first and last detected frames; ties on magnitude fall
    to the horizontal axis (pools are normally filmed along their length).
    """
    detected = [f for f in seq.frames if f.detected]
    if len(detected) < 2:
        raise InsufficientDataError(
            f"direction needs >= 2 detected frames, got {len(detected)}"
        )
    first = detected[0].point(LandmarkIndex.NOSE)
    last = detected[-1].point(LandmarkIndex.NOSE)
    dx = last.x - first.x
    dy = last.y - first.y
    if dx == 0.0 and dy == 0.0:
        raise EstimationError("zero net displacement on both axes")
    if abs(dx) >= abs(dy):
        return SwimDirection.LEFT_TO_RIGHT if dx > 0 else SwimDirection.RIGHT_TO_LEFT
    return SwimDirection.TOP_TO_BOTTOM if dy > 0 else SwimDirection.BOTTOM_TO_TOP


def _cross_coordinate(point: LandmarkPoint, direction: SwimDirection) -> float:
    return point.y if direction.axis == "horizontal" else point.x


def correct_frame(
    frame: LandmarkFrame, direction: SwimDirection
) -> tuple[LandmarkFrame, tuple[str, ...]]:
    """Swap mislabeled symmetric pairs in one frame.

    Returns the corrected frame and the names of the pairs swapped. Each
    pair is judged on its own cross-axis coordinates; exact ties are left
    alone (a swap needs evidence). Coordinates are never altered, only
    the left/right assignment of each pair's two points.
    """
    if not frame.detected:
        return frame, ()
    sign = direction.right_side_sign
    points = list(frame.landmarks)
    swapped = []
    for name, left_idx, right_idx in SYMMETRIC_PAIRS:
        c_left = _cross_coordinate(points[left_idx], direction)
        c_right = _cross_coordinate(points[right_idx], direction)
        if (c_right - c_left) * sign < 0:
            points[left_idx], points[right_idx] = points[right_idx], points[left_idx]
            swapped.append(name)
    if not swapped:
        return frame, ()
    corrected = LandmarkFrame(
        frame_index=frame.frame_index,
        timestamp=frame.timestamp,
        detected=True,
        landmarks=tuple(points),
    )
    return corrected, tuple(swapped)


def correct_sides(seq: LandmarkSequence, direction: SwimDirection) -> CorrectedSequence:
    """Apply per-frame, per-pair side correction to the whole sequence."""
    frames = []
    swapped_frames = set()
    for frame in seq.frames:
        corrected, swapped = correct_frame(frame, direction)
        frames.append(corrected)
        if swapped:
            swapped_frames.add(frame.frame_index)
    base = LandmarkSequence(
        fps=seq.fps,
        image_width=seq.image_width,
        image_height=seq.image_height,
        frames=tuple(frames),
    )
    return CorrectedSequence(
        base=base, direction=direction, swapped_frames=frozenset(swapped_frames)
    )
