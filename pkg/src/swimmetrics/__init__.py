"""Swimming-performance metrics from body-landmark time series.

Computes per-side upper-arm angles, the left/right symmetry index,
stroke duration (FFT with peak-count fallback), lane-marker velocity,
and detection rate from per-frame pose landmarks captured by an aerial
camera, with a deterministic synthetic-swimmer generator for testing.
"""

__version__ = "0.1.0"

from .errors import (
    EstimationError,
    GeometryError,
    InsufficientDataError,
    SequenceFormatError,
    SwimMetricsError,
)
from .kinematics import (
    AngleSample,
    AngleSeries,
    ReferenceLine,
    Side,
    angle_series,
    arm_angle,
    reference_line,
)
from .landmarks import (
    N_LANDMARKS,
    LandmarkFrame,
    LandmarkIndex,
    LandmarkPoint,
    LandmarkSequence,
    load_sequence,
    parse_sequence,
    save_sequence,
    write_sequence,
)
from .metrics import (
    StrokeEstimate,
    SymmetryResult,
    stroke_duration,
    stroke_duration_fft,
    stroke_duration_peaks,
    symmetry_index,
)
from .preprocess import (
    CorrectedSequence,
    SwimDirection,
    correct_sides,
    detection_rate,
    estimate_direction,
)
from .simulate import GroundTruth, SwimScenario, generate, render_frames
from .velocity import (
    AdjacencySample,
    MarkerCrossing,
    PoolCalibration,
    VelocitySegment,
    extract_crossings,
    marker_adjacent,
    velocity_segments,
)

__all__ = [
    "__version__",
    "AdjacencySample",
    "AngleSample",
    "AngleSeries",
    "CorrectedSequence",
    "EstimationError",
    "GeometryError",
    "GroundTruth",
    "InsufficientDataError",
    "LandmarkFrame",
    "LandmarkIndex",
    "LandmarkPoint",
    "LandmarkSequence",
    "MarkerCrossing",
    "N_LANDMARKS",
    "PoolCalibration",
    "ReferenceLine",
    "SequenceFormatError",
    "Side",
    "StrokeEstimate",
    "SwimDirection",
    "SwimMetricsError",
    "SwimScenario",
    "SymmetryResult",
    "VelocitySegment",
    "angle_series",
    "arm_angle",
    "correct_sides",
    "detection_rate",
    "estimate_direction",
    "extract_crossings",
    "generate",
    "load_sequence",
    "marker_adjacent",
    "parse_sequence",
    "reference_line",
    "render_frames",
    "save_sequence",
    "stroke_duration",
    "stroke_duration_fft",
    "stroke_duration_peaks",
    "symmetry_index",
    "velocity_segments",
    "write_sequence",
]
