"""Video decoding and landmark export in the JSONL interchange format.

One record per decoded frame, in order: the header carries the
container's fps and dimensions; frames where the backend finds no pose
are marked `detected: false`. Emitted coordinates are pixels, clamped
into [0, width] x [0, height].
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import cv2

from .backends import N_LANDMARKS, make_backend

logger = logging.getLogger(__name__)


class ExtractionError(Exception):
    """Unreadable video or backend initialization failure."""


@dataclass
class ExtractionConfig:
    video: str
    output: str
    model_complexity: int = 1
    min_confidence: float = 0.5
    backend: str = "auto"
    frames_dir: Optional[str] = None      # export decoded frames when set
    fps_fallback: float = 30.0            # used when the container reports none


@dataclass
class ExtractionSummary:
    frame_count: int
    detected_count: int
    fps: float
    width: int
    height: int

    @property
    def detection_rate(self) -> float:
        return self.detected_count / self.frame_count if self.frame_count else 0.0


def extract(config: ExtractionConfig) -> ExtractionSummary:
    """Decode the video, run the pose backend, write the JSONL file."""
    capture = cv2.VideoCapture(config.video)
    if not capture.isOpened():
        raise ExtractionError(f"cannot open video {config.video!r}")
    fps = capture.get(cv2.CAP_PROP_FPS)
    if not fps or fps <= 0:
        logger.warning("container reports no fps; assuming %.3g", config.fps_fallback)
        fps = config.fps_fallback

    try:
        backend = make_backend(config.backend, config.model_complexity,
                               config.min_confidence)
    except Exception as exc:
        capture.release()
        raise ExtractionError(f"backend initialization failed: {exc}") from exc

    frames_dir = None
    if config.frames_dir:
        frames_dir = Path(config.frames_dir)
        frames_dir.mkdir(parents=True, exist_ok=True)

    width = height = None
    index = 0
    while True:
        ok, frame_bgr = capture.read()
        if not ok:
            break
        if width is None:
            height, width = frame_bgr.shape[:2]
        rgb = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2RGB)
        backend.observe(rgb, index)
        if frames_dir is not None:
            cv2.imwrite(str(frames_dir / f"frame_{index:06d}.png"), frame_bgr)
        index += 1
    capture.release()
    if index == 0 or width is None:
        raise ExtractionError(f"no decodable frames in {config.video!r}")

    results = backend.finish()
    detected = 0
    with open(config.output, "w", encoding="utf-8") as out:
        header = {"fps": fps, "width": width, "height": height}
        out.write(json.dumps(header, separators=(",", ":")) + "\n")
        for frame_index in range(index):
            landmarks = results.get(frame_index)
            record: dict = {
                "frame": frame_index,
                "t": frame_index / fps,
                "detected": landmarks is not None,
            }
            if landmarks is not None:
                if len(landmarks) != N_LANDMARKS:
                    raise ExtractionError(
                        f"backend produced {len(landmarks)} landmarks on frame "
                        f"{frame_index}"
                    )
                detected += 1
                record["landmarks"] = [
                    {
                        "x": _clamp(x, width),
                        "y": _clamp(y, height),
                        "v": min(max(v, 0.0), 1.0),
                    }
                    for x, y, v in landmarks
                ]
            out.write(json.dumps(record, separators=(",", ":")) + "\n")

    summary = ExtractionSummary(
        frame_count=index, detected_count=detected, fps=fps,
        width=width, height=height,
    )
    logger.info(
        "%s: %d frames, %d detected (%.3f), %gx%g @ %.3g fps",
        config.video, summary.frame_count, summary.detected_count,
        summary.detection_rate, width, height, fps,
    )
    return summary


def _clamp(value: float, upper: float) -> float:
    return min(max(float(value), 0.0), float(upper))
