"""Symmetry index and stroke-duration estimation.

The symmetry index is the signed percentage difference of the mean
left/right arm angles against their midpoint mean; values within a
threshold (conventionally 10%) count as symmetric, and the index is
unbounded above 100.

Stroke duration comes from the angle series' fundamental frequency: a
Blackman-tapered FFT when detections are dense enough, otherwise peak
counting with a minimum peak separation to suppress splash noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from .errors import EstimationError, InsufficientDataError
from .kinematics import AngleSeries

DEFAULT_SI_THRESHOLD = 10.0              # percent
DEFAULT_F_MIN = 0.1                      # Hz, slowest plausible stroke rate
DEFAULT_F_MAX = 2.0                      # Hz, fastest plausible stroke rate
DEFAULT_MIN_SEPARATION = 0.5             # s, two peaks may not be closer
DEFAULT_PEAK_PROMINENCE = 10.0           # degrees, rejects jitter maxima
DEFAULT_RATE_CUTOFF = 0.9                # detection rate at/above which FFT is used
MIN_FFT_SAMPLES = 32
MIN_FFT_SPAN = 5.0                       # s
_SPECTRUM_PAD_FACTOR = 4                 # zero-padding to refine the peak bin


@dataclass(frozen=True)
class SymmetryResult:
    si_percent: float
    x_left: float
    x_right: float
    symmetric: bool
    threshold: float = DEFAULT_SI_THRESHOLD


@dataclass(frozen=True)
class StrokeEstimate:
    method: str                          # "fft" or "peaks"
    duration: float                      # seconds per stroke cycle
    dominant_frequency: Optional[float] = None   # Hz, fft only
    peak_count: Optional[int] = None             # peaks only
    spectrum: Optional[tuple[tuple[float, float], ...]] = None


def symmetry_index(
    left: AngleSeries,
    right: AngleSeries,
    threshold: float = DEFAULT_SI_THRESHOLD,
) -> SymmetryResult:
    """Signed percent difference of mean right vs left arm angle.

    si = (x_right - x_left) / (0.5 * (x_right + x_left)) * 100
    """
    if not left.samples or not right.samples:
        raise InsufficientDataError("symmetry index needs samples on both sides")
    x_left = math.fsum(left.angles) / len(left.samples)
    x_right = math.fsum(right.angles) / len(right.samples)
    denom = 0.5 * (x_right + x_left)
    if denom == 0.0:
        raise EstimationError("mean angles sum to zero, symmetry index undefined")
    si = (x_right - x_left) / denom * 100.0
    return SymmetryResult(
        si_percent=si,
        x_left=x_left,
        x_right=x_right,
        symmetric=abs(si) <= threshold,
        threshold=threshold,
    )


def stroke_duration_fft(
    series: AngleSeries,
    f_min: float = DEFAULT_F_MIN,
    f_max: float = DEFAULT_F_MAX,
) -> StrokeEstimate:
    """Dominant stroke frequency via Blackman window + FFT.

    The series is mean-removed, linearly resampled onto a uniform grid at
    the source frame rate (bridging detection gaps), tapered, and
    transformed; the strongest bin inside [f_min, f_max] sets the
    frequency, and duration is its reciprocal.
    """
    if len(series.samples) < MIN_FFT_SAMPLES:
        raise InsufficientDataError(
            f"FFT needs >= {MIN_FFT_SAMPLES} samples, got {len(series.samples)}"
        )
    if series.span < MIN_FFT_SPAN:
        raise InsufficientDataError(
            f"FFT needs a span >= {MIN_FFT_SPAN} s, got {series.span:.3g} s"
        )
    ts = np.asarray(series.times)
    values = np.asarray(series.angles)
    values = values - values.mean()

    fps = series.source_fps
    n = int(math.floor(series.span * fps)) + 1
    grid = ts[0] + np.arange(n) / fps
    resampled = np.interp(grid, ts, values)

    tapered = resampled * np.blackman(n)
    nfft = 1 << max(1, (_SPECTRUM_PAD_FACTOR * n - 1).bit_length())
    magnitude = np.abs(np.fft.rfft(tapered, nfft))
    freqs = np.fft.rfftfreq(nfft, d=1.0 / fps)

    band = (freqs >= f_min) & (freqs <= f_max)
    if not band.any():
        raise EstimationError(f"no spectral bin inside [{f_min}, {f_max}] Hz")
    band_mags = magnitude[band]
    if band_mags.max() < 1e-6 * n:
        raise EstimationError("no dominant frequency (flat spectrum)")
    dominant = float(freqs[band][int(band_mags.argmax())])
    return StrokeEstimate(
        method="fft",
        duration=1.0 / dominant,
        dominant_frequency=dominant,
        spectrum=tuple(zip(freqs.tolist(), magnitude.tolist())),
    )


def stroke_duration_peaks(
    series: AngleSeries,
    min_separation: float = DEFAULT_MIN_SEPARATION,
    prominence: float = DEFAULT_PEAK_PROMINENCE,
) -> StrokeEstimate:
    """Stroke duration from counted peaks: series span / peak count.

    Local maxima (plateaus collapse to their midpoint) below the
    prominence floor are ignored; among maxima closer than
    min_separation in time only the largest survives, and the final
    count is capped so the implied cadence never beats min_separation.
    """
    if not series.samples:
        raise InsufficientDataError("empty series")
    span = series.span
    if span <= 0.0:
        raise InsufficientDataError("series time span must be positive")
    values = np.asarray(series.angles)
    ts = np.asarray(series.times)
    candidates, _ = find_peaks(values, prominence=prominence)
    if len(candidates) == 0:
        raise EstimationError("no peaks found")

    # Greedy by descending magnitude: a candidate is dropped when an
    # already-kept peak lies closer than min_separation in time.
    order = sorted(candidates, key=lambda i: (-values[i], ts[i]))
    kept_times: list[float] = []
    for i in order:
        t = ts[i]
        if all(abs(t - k) >= min_separation for k in kept_times):
            kept_times.append(t)
    max_count = int(span / min_separation + 1e-9)
    if max_count == 0:
        raise EstimationError(
            f"span {span:.3g} s too short to resolve a cycle >= {min_separation} s"
        )
    count = min(len(kept_times), max_count)
    return StrokeEstimate(
        method="peaks",
        duration=span / count,
        peak_count=count,
    )


def stroke_duration(
    series: AngleSeries,
    detection_rate: float,
    rate_cutoff: float = DEFAULT_RATE_CUTOFF,
    f_min: float = DEFAULT_F_MIN,
    f_max: float = DEFAULT_F_MAX,
    min_separation: float = DEFAULT_MIN_SEPARATION,
    prominence: float = DEFAULT_PEAK_PROMINENCE,
) -> StrokeEstimate:
    """Dispatch: FFT at/above the detection-rate cutoff, else peak counting.

    Sparse detections (competition footage) leave the spectrum too
    smeared to trust, hence the fallback. If the FFT path fails it also
    falls back to peaks before giving up.
    """
    if detection_rate >= rate_cutoff:
        try:
            return stroke_duration_fft(series, f_min=f_min, f_max=f_max)
        except (InsufficientDataError, EstimationError):
            pass
    return stroke_duration_peaks(
        series, min_separation=min_separation, prominence=prominence
    )
