"""Deterministic synthetic swimmer for testing and calibration.

Generates landmark sequences (and optionally rendered frames) from a
closed-form swim: constant velocity along a chosen direction, periodic
arm sweep, optional detection dropout, label swaps, and angle noise.
Every derived quantity (cadence, velocity, crossing times, per-frame
arm angles, true side labels) is emitted as ground truth, so the
analysis modules can be validated without real footage.

The world scale is fixed at 20 px/m to keep rasters small.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .landmarks import (
    N_LANDMARKS,
    LandmarkFrame,
    LandmarkPoint,
    LandmarkSequence,
)
from .preprocess import SYMMETRIC_PAIRS, SwimDirection
from .velocity import PoolCalibration

PIXELS_PER_METER = 20.0
MAX_RASTER_SIDE = 8192
TRUE_MARKER_SPACING_M = 10.0  # ground-truth crossings assume this spacing
WATER_COLOR = (18, 70, 140)
BODY_COLOR = (235, 190, 160)

# Arm sweep profile: center/amplitude are chosen so the elbows and
# wrists always stay on their own side of the body line; otherwise the
# side-correction rule would "fix" clean frames and no generator could
# claim its labels as ground truth.
ANGLE_CENTER = 120.0
ANGLE_AMPLITUDE = 55.0
ANGLE_HARMONIC_RATIO = 0.3

# Body template in body coordinates (meters): "along" grows toward the
# nose, "cross" toward the swimmer's anatomical right.
UPPER_ARM_M = 0.30
FOREARM_M = 0.28
SHOULDER_ALONG = -0.30
SHOULDER_HALF_WIDTH = 0.20
HIP_ALONG = -0.85
HIP_HALF_WIDTH = 0.175
_TEMPLATE: dict[int, tuple[float, float]] = {
    0: (0.0, 0.0),         # nose
    1: (-0.03, -0.03), 2: (-0.03, -0.05), 3: (-0.03, -0.07),   # left eye
    4: (-0.03, 0.03), 5: (-0.03, 0.05), 6: (-0.03, 0.07),      # right eye
    7: (-0.08, -0.09), 8: (-0.08, 0.09),                       # ears
    9: (-0.05, -0.03), 10: (-0.05, 0.03),                      # mouth
    11: (SHOULDER_ALONG, -SHOULDER_HALF_WIDTH),
    12: (SHOULDER_ALONG, SHOULDER_HALF_WIDTH),
    23: (HIP_ALONG, -HIP_HALF_WIDTH),
    24: (HIP_ALONG, HIP_HALF_WIDTH),
    25: (-1.25, -0.15), 26: (-1.25, 0.15),                     # knees
    27: (-1.65, -0.12), 28: (-1.65, 0.12),                     # ankles
    29: (-1.72, -0.12), 30: (-1.72, 0.12),                     # heels
    31: (-1.78, -0.10), 32: (-1.78, 0.10),                     # foot tips
}

_MARGIN_ALONG_M = 4.0
_MARGIN_CROSS_M = 3.0


@dataclass(frozen=True)
class SwimScenario:
    cadence: float                     # s per stroke cycle
    velocity: float                    # m/s
    direction: SwimDirection = SwimDirection.LEFT_TO_RIGHT
    duration: float = 20.0             # s
    fps: float = 60.0
    dropout_prob: float = 0.0
    swap_prob: float = 0.0
    angle_noise_sd: float = 0.0        # degrees
    asymmetry_offset: float = 0.0      # degrees added to the right arm
    seed: int = 0
    dropout_burst_mean: float = 0.0    # >1 switches dropout to bursts of this mean length

    def __post_init__(self):
        if self.cadence <= 0 or self.velocity <= 0 or self.fps <= 0:
            raise ValueError("cadence, velocity and fps must be > 0")
        if self.duration <= 0:
            raise ValueError("duration must be > 0")
        for name in ("dropout_prob", "swap_prob"):
            p = getattr(self, name)
            if not 0.0 <= p < 1.0:
                raise ValueError(f"{name} {p} outside [0, 1)")


@dataclass(frozen=True)
class GroundTruth:
    """Everything the generator knows that the pipeline must recover."""

    cadence: float
    velocity: float
    direction: SwimDirection
    fps: float
    duration: float
    crossing_times: tuple[float, ...]
    # per frame index:
    arm_angles: dict[int, tuple[float, float]] = field(default_factory=dict)  # (left, right) deg
    head_px: dict[int, tuple[float, float]] = field(default_factory=dict)
    swapped_pairs: dict[int, tuple[str, ...]] = field(default_factory=dict)
    detected: dict[int, bool] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "cadence_s": self.cadence,
            "velocity_mps": self.velocity,
            "direction": self.direction.value,
            "fps": self.fps,
            "duration_s": self.duration,
            "crossing_times_s": list(self.crossing_times),
            "frames": [
                {
                    "frame": idx,
                    "detected": self.detected[idx],
                    "angle_left_deg": self.arm_angles[idx][0],
                    "angle_right_deg": self.arm_angles[idx][1],
                    "head_px": list(self.head_px[idx]),
                    "swapped_pairs": list(self.swapped_pairs.get(idx, ())),
                }
                for idx in sorted(self.detected)
            ],
        }
        return json.dumps(payload, indent=2)


class _World:
    """Canvas layout and body-to-image mapping for one scenario."""

    def __init__(self, scenario: SwimScenario):
        s = scenario
        travel_px = s.velocity * s.duration * PIXELS_PER_METER
        along_px = int(math.ceil(travel_px + 2 * _MARGIN_ALONG_M * PIXELS_PER_METER))
        cross_px = int(math.ceil(2 * _MARGIN_CROSS_M * PIXELS_PER_METER))
        if s.direction.axis == "horizontal":
            self.width, self.height = along_px, cross_px
        else:
            self.width, self.height = cross_px, along_px
        if max(self.width, self.height) > MAX_RASTER_SIDE:
            raise ValueError(
                f"raster {self.width}x{self.height} exceeds {MAX_RASTER_SIDE} px/side"
            )
        # Unit vectors in image coordinates: travel direction and the
        # swimmer's anatomical right (prone body, rotated consistently).
        self.along = {
            SwimDirection.LEFT_TO_RIGHT: (1.0, 0.0),
            SwimDirection.RIGHT_TO_LEFT: (-1.0, 0.0),
            SwimDirection.TOP_TO_BOTTOM: (0.0, 1.0),
            SwimDirection.BOTTOM_TO_TOP: (0.0, -1.0),
        }[s.direction]
        ax, ay = self.along
        self.cross_right = (-ay, ax)  # along rotated +90deg keeps handedness
        # Start the nose one margin in; the cross coordinate sits mid-canvas.
        start_m = _MARGIN_ALONG_M
        if s.direction.sense > 0:
            self.head0_along_px = start_m * PIXELS_PER_METER
        else:
            self.head0_along_px = along_px - start_m * PIXELS_PER_METER
        self.mid_cross_px = cross_px / 2.0
        self.scenario = s

    def head_px(self, t: float) -> tuple[float, float]:
        along = self.head0_along_px + self.scenario.direction.sense * (
            self.scenario.velocity * t * PIXELS_PER_METER
        )
        return self._to_image(along, self.mid_cross_px)

    def _to_image(self, along_px: float, cross_px: float) -> tuple[float, float]:
        if self.scenario.direction.axis == "horizontal":
            return along_px, cross_px
        return cross_px, along_px

    def body_point(self, t: float, along_m: float, cross_m: float) -> tuple[float, float]:
        """Map body-template coordinates (meters) to image pixels at time t."""
        hx, hy = self.head_px(t)
        ax, ay = self.along
        cx, cy = self.cross_right
        dx = (along_m * ax + cross_m * cx) * PIXELS_PER_METER
        dy = (along_m * ay + cross_m * cy) * PIXELS_PER_METER
        return hx + dx, hy + dy

    def marker_along_px(self, k: int, spacing_m: float = TRUE_MARKER_SPACING_M) -> float:
        """Along-axis pixel position of the k-th distance marker."""
        spacing_px = spacing_m * PIXELS_PER_METER
        return self.head0_along_px + self.scenario.direction.sense * k * spacing_px


def _angle_profile(t: float, cadence: float, phase: float) -> float:
    w = 2.0 * math.pi * t / cadence + phase
    return (
        ANGLE_CENTER
        + ANGLE_AMPLITUDE * math.sin(w)
        + ANGLE_HARMONIC_RATIO * ANGLE_AMPLITUDE * math.sin(2.0 * w + 0.7)
    )


def _dropout_mask(scenario: SwimScenario, n_frames: int) -> np.ndarray:
    """True where the frame is dropped (detection miss)."""
    rng = np.random.default_rng([scenario.seed, 1])
    p = scenario.dropout_prob
    if p == 0.0:
        return np.zeros(n_frames, dtype=bool)
    if scenario.dropout_burst_mean <= 1.0:
        return rng.random(n_frames) < p
    # Two-state chain with the same stationary miss rate but geometric
    # burst lengths, for splash-like correlated dropout.
    p_exit = 1.0 / scenario.dropout_burst_mean
    p_enter = min(1.0, p_exit * p / (1.0 - p))
    mask = np.zeros(n_frames, dtype=bool)
    state = rng.random() < p
    for i in range(n_frames):
        mask[i] = state
        if state:
            state = rng.random() >= p_exit
        else:
            state = rng.random() < p_enter
    return mask


def generate(scenario: SwimScenario) -> tuple[LandmarkSequence, GroundTruth]:
    """Build the landmark sequence and its ground truth. Deterministic per seed."""
    s = scenario
    world = _World(s)
    n_frames = int(round(s.duration * s.fps)) + 1
    dropped = _dropout_mask(s, n_frames)
    swap_rng = np.random.default_rng([s.seed, 2])
    noise_rng = np.random.default_rng([s.seed, 3])

    n_crossings = int(math.floor(s.velocity * s.duration / TRUE_MARKER_SPACING_M + 1e-9))
    truth = GroundTruth(
        cadence=s.cadence,
        velocity=s.velocity,
        direction=s.direction,
        fps=s.fps,
        duration=s.duration,
        crossing_times=tuple(
            k * TRUE_MARKER_SPACING_M / s.velocity for k in range(1, n_crossings + 1)
        ),
    )

    frames = []
    for i in range(n_frames):
        t = i / s.fps
        phase_l = _angle_profile(t, s.cadence, phase=math.pi)
        phase_r = _angle_profile(t, s.cadence, phase=0.0) + s.asymmetry_offset
        if s.angle_noise_sd > 0.0:
            noise = noise_rng.normal(0.0, s.angle_noise_sd, size=2)
            phase_l += noise[0]
            phase_r += noise[1]
        truth.arm_angles[i] = (phase_l % 360.0, phase_r % 360.0)
        truth.head_px[i] = world.head_px(t)
        truth.detected[i] = not bool(dropped[i])
        if dropped[i]:
            frames.append(
                LandmarkFrame(frame_index=i, timestamp=t, detected=False)
            )
            continue

        points = _frame_points(world, t, phase_l, phase_r)
        if s.swap_prob > 0.0:
            swapped = []
            draws = swap_rng.random(len(SYMMETRIC_PAIRS))
            for (name, li, ri), draw in zip(SYMMETRIC_PAIRS, draws):
                if draw < s.swap_prob:
                    points[li], points[ri] = points[ri], points[li]
                    swapped.append(name)
            if swapped:
                truth.swapped_pairs[i] = tuple(swapped)
        frames.append(
            LandmarkFrame(
                frame_index=i, timestamp=t, detected=True, landmarks=tuple(points)
            )
        )

    seq = LandmarkSequence(
        fps=s.fps,
        image_width=world.width,
        image_height=world.height,
        frames=tuple(frames),
    )
    return seq, truth


def _frame_points(
    world: _World, t: float, angle_left: float, angle_right: float
) -> list[LandmarkPoint]:
    """All 33 landmarks at time t with the arms at the given sweep angles."""
    coords: dict[int, tuple[float, float]] = dict(_TEMPLATE)
    for side_sign, angle, sh_idx, el_idx, wr_idx, hand in (
        (-1, angle_left, 11, 13, 15, (17, 19, 21)),
        (1, angle_right, 12, 14, 16, (18, 20, 22)),
    ):
        rad = math.radians(angle)
        ua = math.cos(rad)                      # along component
        uc = side_sign * math.sin(rad)          # cross component, side-mirrored
        sa, sc = coords[sh_idx]
        coords[el_idx] = (sa + UPPER_ARM_M * ua, sc + UPPER_ARM_M * uc)
        ea, ec = coords[el_idx]
        coords[wr_idx] = (ea + FOREARM_M * ua, ec + FOREARM_M * uc)
        wa, wc = coords[wr_idx]
        for j, h_idx in enumerate(hand):
            coords[h_idx] = (wa + 0.05 * ua, wc + 0.05 * uc + side_sign * 0.01 * j)
    points = []
    for idx in range(N_LANDMARKS):
        a, c = coords[idx]
        x, y = world.body_point(t, a, c)
        points.append(LandmarkPoint(x=x, y=y, visibility=1.0))
    return points


def render_frames(
    scenario: SwimScenario, cal: PoolCalibration
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (frame_index, HxWx3 uint8 RGB raster) for every frame.

    Flat water background, marker stripes across the lane at the true
    10 m spacing (aligned to the swimmer's start so crossing k happens
    at exactly k*10/velocity seconds), and a torso-plus-head swimmer
    blob. Deterministic; rasters are yielded one at a time so long swims
    never materialize in memory.
    """
    s = scenario
    world = _World(s)
    n_frames = int(round(s.duration * s.fps)) + 1
    stripe_px = max(2, int(0.2 * PIXELS_PER_METER))

    base = np.empty((world.height, world.width, 3), dtype=np.uint8)
    base[:] = WATER_COLOR
    along_size = world.width if s.direction.axis == "horizontal" else world.height
    k = 1
    while True:
        pos = world.marker_along_px(k, cal.marker_spacing)
        lo = int(round(pos))
        if lo < 0 or lo >= along_size:
            break
        hi = min(lo + stripe_px, along_size)
        if s.direction.axis == "horizontal":
            base[:, lo:hi] = cal.marker_color
        else:
            base[lo:hi, :] = cal.marker_color
        k += 1

    for i in range(n_frames):
        t = i / s.fps
        raster = base.copy()
        _draw_swimmer(raster, world, t)
        yield i, raster


def _draw_swimmer(raster: np.ndarray, world: _World, t: float):
    """Torso rectangle plus head disc in body colors."""
    h, w = raster.shape[:2]
    x0, y0 = world.body_point(t, HIP_ALONG - 0.1, -0.25)
    x1, y1 = world.body_point(t, 0.1, 0.25)
    xa, xb = sorted((int(round(x0)), int(round(x1))))
    ya, yb = sorted((int(round(y0)), int(round(y1))))
    raster[max(ya, 0):min(yb, h), max(xa, 0):min(xb, w)] = BODY_COLOR

    hx, hy = world.head_px(t)
    r = 0.12 * PIXELS_PER_METER
    xa, xb = max(int(hx - r), 0), min(int(hx + r) + 1, w)
    ya, yb = max(int(hy - r), 0), min(int(hy + r) + 1, h)
    if xa < xb and ya < yb:
        yy, xx = np.mgrid[ya:yb, xa:xb]
        disc = (xx - hx) ** 2 + (yy - hy) ** 2 <= r * r
        raster[ya:yb, xa:xb][disc] = BODY_COLOR


def scenario_from_dict(data: dict) -> SwimScenario:
    """Build a scenario from parsed JSON (the `simulate` CLI input)."""
    direction = data.get("direction", "ltr")
    return SwimScenario(
        cadence=float(data["cadence"]),
        velocity=float(data["velocity"]),
        direction=SwimDirection(direction),
        duration=float(data.get("duration", 20.0)),
        fps=float(data.get("fps", 60.0)),
        dropout_prob=float(data.get("dropout_prob", 0.0)),
        swap_prob=float(data.get("swap_prob", 0.0)),
        angle_noise_sd=float(data.get("angle_noise_sd", 0.0)),
        asymmetry_offset=float(data.get("asymmetry_offset", 0.0)),
        seed=int(data.get("seed", 0)),
        dropout_burst_mean=float(data.get("dropout_burst_mean", 0.0)),
    )


def load_scenario(path: str | Path) -> SwimScenario:
    return scenario_from_dict(json.loads(Path(path).read_text()))
