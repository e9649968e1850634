"""`swimpose-extract`: video in, landmark JSONL out."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional

from .extract import ExtractionConfig, ExtractionError, extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swimpose-extract",
        description="Extract 33-point pose landmarks from a video into JSONL",
    )
    parser.add_argument("--video", required=True, help="input video file")
    parser.add_argument("--out", required=True, help="output landmark JSONL")
    parser.add_argument("--frames-dir", default=None,
                        help="also export decoded frames as frame_%%06d.png")
    parser.add_argument("--min-confidence", type=float, default=0.5,
                        help="model detection/tracking confidence threshold")
    parser.add_argument("--model-complexity", type=int, default=1, choices=[0, 1, 2])
    parser.add_argument("--backend", default="auto",
                        choices=["auto", "mediapipe", "blob"],
                        help="pose backend; auto prefers mediapipe when installed")
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    config = ExtractionConfig(
        video=args.video,
        output=args.out,
        model_complexity=args.model_complexity,
        min_confidence=args.min_confidence,
        backend=args.backend,
        frames_dir=args.frames_dir,
    )
    try:
        summary = extract(config)
    except ExtractionError as exc:
        logging.getLogger(__name__).error("%s", exc)
        return 1
    print(
        f"{summary.frame_count} frames, {summary.detected_count} detected "
        f"({summary.detection_rate:.3f})"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
