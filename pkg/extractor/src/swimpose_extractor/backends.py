"""Pose backends: a 33-landmark model adapter and a classical fallback.

A backend observes decoded RGB frames one by one and, once the video is
exhausted, returns per-frame landmark sets in pixel coordinates (or None
for a miss). Backends may be stateful across frames; the blob tracker
uses the whole clip's motion before committing to a head direction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import cv2
import numpy as np

logger = logging.getLogger(__name__)

N_LANDMARKS = 33
NOSE = 0

# Landmark synthesis template for the blob fallback: fractions of the
# blob's body length behind the head (along) and of its half width
# (cross, positive toward the swimmer's right for left-to-right travel).
_BLOB_TEMPLATE = {
    0: (0.00, 0.0),
    1: (0.02, -0.1), 2: (0.02, -0.15), 3: (0.02, -0.2),
    4: (0.02, 0.1), 5: (0.02, 0.15), 6: (0.02, 0.2),
    7: (0.05, -0.3), 8: (0.05, 0.3),
    9: (0.04, -0.1), 10: (0.04, 0.1),
    11: (0.18, -0.6), 12: (0.18, 0.6),
    13: (0.28, -0.9), 14: (0.28, 0.9),
    15: (0.38, -1.0), 16: (0.38, 1.0),
    17: (0.42, -1.0), 18: (0.42, 1.0),
    19: (0.42, -0.9), 20: (0.42, 0.9),
    21: (0.40, -0.8), 22: (0.40, 0.8),
    23: (0.48, -0.45), 24: (0.48, 0.45),
    25: (0.68, -0.4), 26: (0.68, 0.4),
    27: (0.85, -0.35), 28: (0.85, 0.35),
    29: (0.90, -0.35), 30: (0.90, 0.35),
    31: (0.95, -0.3), 32: (0.95, 0.3),
}

Landmark = tuple[float, float, float]  # x px, y px, visibility


class MediaPipeBackend:
    """Adapter for the MediaPipe/BlazePose 33-landmark model.

    Emits the model's landmarks converted from normalized to pixel
    coordinates. Requires the `mediapipe` package.
    """

    def __init__(self, model_complexity: int = 1, min_confidence: float = 0.5):
        import mediapipe as mp

        self._pose = mp.solutions.pose.Pose(
            static_image_mode=False,
            model_complexity=model_complexity,
            min_detection_confidence=min_confidence,
            min_tracking_confidence=min_confidence,
        )
        self._results: dict[int, Optional[list[Landmark]]] = {}

    def observe(self, frame_rgb: np.ndarray, frame_index: int):
        height, width = frame_rgb.shape[:2]
        out = self._pose.process(frame_rgb)
        if not out.pose_landmarks or len(out.pose_landmarks.landmark) != N_LANDMARKS:
            self._results[frame_index] = None
            return
        self._results[frame_index] = [
            (lm.x * width, lm.y * height, float(lm.visibility))
            for lm in out.pose_landmarks.landmark
        ]

    def finish(self) -> dict[int, Optional[list[Landmark]]]:
        self._pose.close()
        return self._results


@dataclass
class _BlobStats:
    centroid: tuple[float, float]
    bbox: tuple[int, int, int, int]  # x, y, w, h
    area: int


class BlobBackend:
    """Classical fallback: track the swimmer as a moving foreground blob.

    Segments the largest non-background component (thin full-span lane
    stripes are excluded), takes the blob's leading extreme along the
    clip's net motion as the head, and synthesizes the remaining 32
    landmarks from a prone-body template scaled to the blob. Synthesized
    points carry low visibility (0.4); the head carries 0.9. Meant for
    testing and for footage where no learned model is available.
    """

    MIN_AREA_PX = 30
    DIFF_THRESHOLD = 40
    STRIPE_MAX_THICKNESS_PX = 8
    HEAD_VISIBILITY = 0.9
    SYNTH_VISIBILITY = 0.4

    def __init__(self, min_confidence: float = 0.5):  # signature parity
        self._stats: dict[int, Optional[_BlobStats]] = {}
        self._shape: Optional[tuple[int, int]] = None

    def observe(self, frame_rgb: np.ndarray, frame_index: int):
        self._shape = frame_rgb.shape[:2]
        self._stats[frame_index] = self._segment(frame_rgb)

    def _segment(self, frame: np.ndarray) -> Optional[_BlobStats]:
        height, width = frame.shape[:2]
        sub = frame[::4, ::4].reshape(-1, 3)
        background = np.median(sub, axis=0)
        diff = np.abs(frame.astype(np.int16) - background.astype(np.int16)).max(axis=2)
        mask = (diff > self.DIFF_THRESHOLD).astype(np.uint8)
        n, labels, stats, centroids = cv2.connectedComponentsWithStats(mask)
        best = None
        for i in range(1, n):
            x, y, w, h, area = stats[i]
            if area < self.MIN_AREA_PX:
                continue
            # lane stripes span the frame but stay thin; skip them
            if h >= height and w <= self.STRIPE_MAX_THICKNESS_PX:
                continue
            if w >= width and h <= self.STRIPE_MAX_THICKNESS_PX:
                continue
            if best is None or area > best.area:
                best = _BlobStats(
                    centroid=(float(centroids[i][0]), float(centroids[i][1])),
                    bbox=(int(x), int(y), int(w), int(h)),
                    area=int(area),
                )
        return best

    def finish(self) -> dict[int, Optional[list[Landmark]]]:
        valid = [(i, s) for i, s in sorted(self._stats.items()) if s is not None]
        if len(valid) < 2:
            logger.warning("blob backend found fewer than 2 usable frames")
            return {i: None for i in self._stats}
        dx = valid[-1][1].centroid[0] - valid[0][1].centroid[0]
        dy = valid[-1][1].centroid[1] - valid[0][1].centroid[1]
        if abs(dx) >= abs(dy):
            along = (1.0, 0.0) if dx >= 0 else (-1.0, 0.0)
        else:
            along = (0.0, 1.0) if dy >= 0 else (0.0, -1.0)
        cross_right = (-along[1], along[0])  # prone body, consistent handedness

        results: dict[int, Optional[list[Landmark]]] = {}
        for index, stats in sorted(self._stats.items()):
            if stats is None:
                results[index] = None
                continue
            results[index] = self._synthesize(stats, along, cross_right)
        return results

    def _synthesize(self, stats: _BlobStats, along, cross_right) -> list[Landmark]:
        x, y, w, h = stats.bbox
        if along[0] > 0:
            head = (x + w - 1.0, stats.centroid[1])
        elif along[0] < 0:
            head = (float(x), stats.centroid[1])
        elif along[1] > 0:
            head = (stats.centroid[0], y + h - 1.0)
        else:
            head = (stats.centroid[0], float(y))
        body_len = float(w if along[0] else h)
        half_width = max(2.0, (h if along[0] else w) / 2.0)

        height, width = self._shape
        points = []
        for i in range(N_LANDMARKS):
            back, side = _BLOB_TEMPLATE[i]
            px = head[0] - back * body_len * along[0] + side * half_width * cross_right[0]
            py = head[1] - back * body_len * along[1] + side * half_width * cross_right[1]
            visibility = self.HEAD_VISIBILITY if i == NOSE else self.SYNTH_VISIBILITY
            points.append(
                (min(max(px, 0.0), float(width)), min(max(py, 0.0), float(height)),
                 visibility)
            )
        return points


def make_backend(name: str, model_complexity: int, min_confidence: float):
    """Resolve a backend by name; `auto` prefers mediapipe when installed."""
    if name == "auto":
        try:
            import mediapipe  # noqa: F401
            name = "mediapipe"
        except ImportError:
            logger.warning("mediapipe not installed; falling back to blob tracking")
            name = "blob"
    if name == "mediapipe":
        return MediaPipeBackend(model_complexity=model_complexity,
                                min_confidence=min_confidence)
    if name == "blob":
        return BlobBackend(min_confidence=min_confidence)
    raise ValueError(f"unknown backend {name!r}")
