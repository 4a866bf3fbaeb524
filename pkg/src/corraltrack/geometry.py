"""Geometric primitives and detection-stream value types.

Coordinate convention throughout the package: origin at the image top-left,
x grows rightward, y grows downward, units are pixels, all reals are
double precision. Boxes are center + extent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple


class Point2D(NamedTuple):
    """A pixel-space point. Expected finite; validated at system boundaries."""

    x: float
    y: float


@dataclass(slots=True, frozen=True)
class BoundingBox:
    """One detector output: box center, extent and confidence score."""

    cx: float
    cy: float
    w: float
    h: float
    conf: float

    def __post_init__(self):
        for name in ("cx", "cy", "w", "h", "conf"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"BoundingBox.{name} must be finite")
        if self.w < 0 or self.h < 0:
            raise ValueError("BoundingBox extent must be non-negative")
        if not 0.0 <= self.conf <= 1.0:
            raise ValueError(f"BoundingBox.conf must be in [0, 1], got {self.conf}")


@dataclass(slots=True)
class FrameDetections:
    """All detections reported for a single video frame.

    Within a stream frame_index must be strictly increasing; consumers
    (tracker, file readers) enforce that invariant.
    """

    frame_index: int
    boxes: list[BoundingBox] = field(default_factory=list)

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError("frame_index must be >= 0")


def center(box: BoundingBox) -> Point2D:
    """Center of a bounding box; the only geometry the tracker consumes."""
    return Point2D(box.cx, box.cy)


def euclidean_distance(a: Point2D, b: Point2D) -> float:
    """Euclidean distance between two points, in pixels."""
    return math.hypot(a.x - b.x, a.y - b.y)
