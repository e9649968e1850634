"""Landmark data model and the JSONL interchange format.

The interchange format is one JSON object per line: a header record
``{"fps": <number>, "width": <int>, "height": <int>}`` followed by one
frame record per video frame:

    {"frame": <int>, "t": <seconds>, "detected": <bool>,
     "landmarks": [{"x": <px>, "y": <px>, "v": <0..1>}, x33]}

Coordinates are pixels (origin top-left, y down). Undetected frames omit
the ``landmarks`` key. An optional ``z`` per landmark is accepted and
discarded; the analysis is planar.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import IntEnum
from io import IOBase
from pathlib import Path
from typing import Iterable, Union

from .errors import SequenceFormatError

N_LANDMARKS = 33


class LandmarkIndex(IntEnum):
    """Landmark slots used by the pipeline (33-point pose convention)."""

    NOSE = 0
    LEFT_SHOULDER = 11
    RIGHT_SHOULDER = 12
    LEFT_ELBOW = 13
    RIGHT_ELBOW = 14
    LEFT_WRIST = 15
    RIGHT_WRIST = 16
    LEFT_HIP = 23
    RIGHT_HIP = 24
    LEFT_KNEE = 25
    RIGHT_KNEE = 26
    LEFT_ANKLE = 27
    RIGHT_ANKLE = 28


@dataclass(frozen=True)
class LandmarkPoint:
    """One 2D landmark in pixel coordinates with visibility in [0, 1]."""

    x: float
    y: float
    visibility: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate ({self.x}, {self.y})")
        if not (math.isfinite(self.visibility) and 0.0 <= self.visibility <= 1.0):
            raise ValueError(f"visibility {self.visibility} outside [0, 1]")


@dataclass(frozen=True)
class LandmarkFrame:
    """One video frame: either 33 landmarks or a detection miss."""

    frame_index: int
    timestamp: float
    detected: bool
    landmarks: tuple[LandmarkPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "landmarks", tuple(self.landmarks))
        if self.frame_index < 0:
            raise ValueError(f"frame_index {self.frame_index} < 0")
        if not (math.isfinite(self.timestamp) and self.timestamp >= 0):
            raise ValueError(f"timestamp {self.timestamp} < 0")
        if self.detected:
            if len(self.landmarks) != N_LANDMARKS:
                raise ValueError(
                    f"landmark count {len(self.landmarks)} != {N_LANDMARKS}"
                )
        elif self.landmarks:
            raise ValueError("undetected frame carries landmarks")

    def point(self, index: int) -> LandmarkPoint:
        return self.landmarks[index]


@dataclass(frozen=True)
class LandmarkSequence:
    """Ordered frames plus the video metadata they were measured in."""

    fps: float
    image_width: int
    image_height: int
    frames: tuple[LandmarkFrame, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if not (math.isfinite(self.fps) and self.fps > 0):
            raise ValueError(f"fps {self.fps} must be > 0")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError(
                f"image dimensions {self.image_width}x{self.image_height} must be > 0"
            )
        prev_index = -1
        prev_t = 0.0
        tol = 1.0 / self.fps
        for f in self.frames:
            if f.frame_index <= prev_index:
                raise ValueError(
                    f"frame_index {f.frame_index} not strictly increasing"
                )
            if f.timestamp < prev_t:
                raise ValueError(f"timestamp {f.timestamp} decreases")
            if abs(f.timestamp - f.frame_index / self.fps) > tol:
                raise ValueError(
                    f"timestamp {f.timestamp} inconsistent with frame "
                    f"{f.frame_index} at {self.fps} fps"
                )
            prev_index = f.frame_index
            prev_t = f.timestamp

    @property
    def detected_frames(self) -> tuple[LandmarkFrame, ...]:
        return tuple(f for f in self.frames if f.detected)


ByteSource = Union[bytes, str, IOBase, Path]


def _iter_lines(source: ByteSource) -> Iterable[str]:
    if isinstance(source, Path):
        with source.open("rb") as fh:
            yield from (raw.decode("utf-8") for raw in fh)
        return
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:  # file-like
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    yield from text.splitlines()


def _require(condition: bool, message: str, line: int):
    if not condition:
        raise SequenceFormatError(message, line=line)


def _parse_point(obj, line: int) -> LandmarkPoint:
    _require(isinstance(obj, dict), "landmark entry is not an object", line)
    for key in ("x", "y", "v"):
        _require(key in obj, f"landmark entry missing '{key}'", line)
        _require(
            isinstance(obj[key], (int, float)) and not isinstance(obj[key], bool),
            f"landmark '{key}' is not a number",
            line,
        )
    try:
        return LandmarkPoint(float(obj["x"]), float(obj["y"]), float(obj["v"]))
    except ValueError as exc:
        raise SequenceFormatError(str(exc), line=line) from exc


def _number(obj: dict, key: str, line: int) -> float:
    _require(key in obj, f"record missing '{key}'", line)
    value = obj[key]
    _require(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        f"'{key}' is not a number",
        line,
    )
    return float(value)


def parse_sequence(source: ByteSource) -> LandmarkSequence:
    """Parse the JSONL interchange format into a validated LandmarkSequence.

    Raises SequenceFormatError with the offending 1-based line number for
    any malformed record or invariant violation. Single pass, O(input).
    """
    header = None
    frames: list[LandmarkFrame] = []
    prev_index = -1
    prev_t = -1.0
    saw_any = False

    for lineno, raw in enumerate(_iter_lines(source), start=1):
        text = raw.strip()
        if not text:
            continue
        saw_any = True
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SequenceFormatError(f"malformed JSON ({exc.msg})", line=lineno) from exc
        _require(isinstance(obj, dict), "record is not a JSON object", lineno)

        if header is None:
            _require(
                "fps" in obj and "width" in obj and "height" in obj,
                "missing header (expected fps/width/height record first)",
                lineno,
            )
            fps = _number(obj, "fps", lineno)
            width = _number(obj, "width", lineno)
            height = _number(obj, "height", lineno)
            _require(math.isfinite(fps) and fps > 0, f"fps {fps} must be > 0", lineno)
            _require(
                width > 0 and height > 0 and width == int(width) and height == int(height),
                f"image dimensions {width}x{height} must be positive integers",
                lineno,
            )
            header = (fps, int(width), int(height))
            continue

        fps = header[0]
        frame_index = _number(obj, "frame", lineno)
        _require(
            frame_index == int(frame_index) and frame_index >= 0,
            f"frame index {frame_index} is not a non-negative integer",
            lineno,
        )
        frame_index = int(frame_index)
        _require(
            frame_index > prev_index,
            f"frame index {frame_index} not strictly increasing (previous {prev_index})",
            lineno,
        )
        timestamp = _number(obj, "t", lineno)
        _require(
            math.isfinite(timestamp) and timestamp >= 0,
            f"timestamp {timestamp} must be >= 0",
            lineno,
        )
        _require(
            timestamp >= prev_t,
            f"timestamp {timestamp} decreases (previous {prev_t})",
            lineno,
        )
        _require(
            abs(timestamp - frame_index / fps) <= 1.0 / fps,
            f"timestamp {timestamp} inconsistent with frame {frame_index} at {fps} fps",
            lineno,
        )
        _require("detected" in obj, "record missing 'detected'", lineno)
        detected = obj["detected"]
        _require(isinstance(detected, bool), "'detected' is not a boolean", lineno)

        if detected:
            raw_points = obj.get("landmarks")
            _require(
                isinstance(raw_points, list),
                "detected frame missing 'landmarks' array",
                lineno,
            )
            _require(
                len(raw_points) == N_LANDMARKS,
                f"landmark count {len(raw_points)} != {N_LANDMARKS}",
                lineno,
            )
            points = tuple(_parse_point(p, lineno) for p in raw_points)
        else:
            _require(
                not obj.get("landmarks"),
                "undetected frame carries landmarks",
                lineno,
            )
            points = ()

        frames.append(
            LandmarkFrame(
                frame_index=frame_index,
                timestamp=timestamp,
                detected=detected,
                landmarks=points,
            )
        )
        prev_index = frame_index
        prev_t = timestamp

    if header is None:
        raise SequenceFormatError(
            "missing header" if saw_any else "empty input, missing header",
            line=1,
        )
    return LandmarkSequence(
        fps=header[0], image_width=header[1], image_height=header[2],
        frames=tuple(frames),
    )


def write_sequence(seq: LandmarkSequence) -> bytes:
    """Serialize to the JSONL interchange format.

    Output is deterministic (fixed key order, shortest round-trip float
    repr), so parse(write(seq)) == seq exactly.
    """
    out = []
    header = {"fps": seq.fps, "width": seq.image_width, "height": seq.image_height}
    out.append(json.dumps(header, separators=(",", ":")))
    for f in seq.frames:
        rec: dict = {"frame": f.frame_index, "t": f.timestamp, "detected": f.detected}
        if f.detected:
            rec["landmarks"] = [
                {"x": p.x, "y": p.y, "v": p.visibility} for p in f.landmarks
            ]
        out.append(json.dumps(rec, separators=(",", ":")))
    return ("\n".join(out) + "\n").encode("utf-8")


def load_sequence(path: str | Path) -> LandmarkSequence:
    return parse_sequence(Path(path))


def save_sequence(seq: LandmarkSequence, path: str | Path):
    Path(path).write_bytes(write_sequence(seq))
