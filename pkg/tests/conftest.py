"""Shared builders for hand-crafted landmark data."""

from __future__ import annotations

import json

import pytest

from swimmetrics import LandmarkFrame, LandmarkPoint, LandmarkSequence

FPS = 60.0


def make_points(overrides: dict[int, tuple[float, float]] | None = None,
                visibility: float = 1.0) -> tuple[LandmarkPoint, ...]:
    """33 filler points, selected indices overridden with explicit coords."""
    overrides = overrides or {}
    points = []
    for i in range(33):
        x, y = overrides.get(i, (100.0 + 3.0 * i, 200.0 + 2.0 * i))
        points.append(LandmarkPoint(x=x, y=y, visibility=visibility))
    return tuple(points)


def make_frame(index: int = 0, fps: float = FPS,
               overrides: dict[int, tuple[float, float]] | None = None,
               detected: bool = True) -> LandmarkFrame:
    if not detected:
        return LandmarkFrame(frame_index=index, timestamp=index / fps, detected=False)
    return LandmarkFrame(
        frame_index=index,
        timestamp=index / fps,
        detected=True,
        landmarks=make_points(overrides),
    )


def make_seq(frames, fps: float = FPS, width: int = 3840,
             height: int = 2160) -> LandmarkSequence:
    return LandmarkSequence(
        fps=fps, image_width=width, image_height=height, frames=tuple(frames)
    )


def jsonl(*records) -> bytes:
    return ("\n".join(json.dumps(r) for r in records) + "\n").encode()


def header(fps: float = FPS, width: int = 3840, height: int = 2160) -> dict:
    return {"fps": fps, "width": width, "height": height}


def frame_record(index: int, fps: float = FPS, detected: bool = True,
                 n_landmarks: int = 33) -> dict:
    rec = {"frame": index, "t": index / fps, "detected": detected}
    if detected:
        rec["landmarks"] = [
            {"x": 10.0 * i, "y": 5.0 * i, "v": 0.9} for i in range(n_landmarks)
        ]
    return rec


@pytest.fixture
def nose_track_seq():
    """Three detected frames with the nose moving left to right."""
    frames = [
        make_frame(0, overrides={0: (100.0, 500.0)}),
        make_frame(1, overrides={0: (1500.0, 510.0)}),
        make_frame(2, overrides={0: (3000.0, 520.0)}),
    ]
    return make_seq(frames)
