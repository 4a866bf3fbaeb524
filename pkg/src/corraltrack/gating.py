"""Per-frame acceptance test for detection sets.

A frame is usable for tracking only when, after discarding low-confidence
boxes, exactly the expected number of detections survives. Rejected frames
carry no positional output at all, so undercounted or overcounted frames
can never contaminate trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import FrameDetections, Point2D, center

DEFAULT_CONF_THRESHOLD = 0.45


@dataclass(slots=True, frozen=True)
class GateConfig:
    """Expected object count and the confidence floor detections must clear."""

    expected_count: int
    conf_threshold: float = DEFAULT_CONF_THRESHOLD

    def __post_init__(self):
        if self.expected_count < 1:
            raise ValueError("expected_count must be >= 1")
        if not 0.0 <= self.conf_threshold <= 1.0:
            raise ValueError("conf_threshold must be in [0, 1]")


@dataclass(slots=True, frozen=True)
class GateOutcome:
    """Result of gating one frame.

    `centers` is populated only on acceptance (survivor centers in their
    original stream order); `found` only on rejection (the survivor count
    that failed to match).
    """

    accepted: bool
    centers: tuple[Point2D, ...] | None = None
    found: int | None = None

    @classmethod
    def accept(cls, centers: tuple[Point2D, ...]) -> "GateOutcome":
        return cls(accepted=True, centers=centers)

    @classmethod
    def reject(cls, found: int) -> "GateOutcome":
        return cls(accepted=False, found=found)


@dataclass(slots=True)
class FdrReport:
    """Frame-level detection accounting over a stream."""

    total_frames: int
    accepted_frames: int
    rejected_frames: int
    fdr: float
    rejection_histogram: dict[int, int] = field(default_factory=dict)


def gate_frame(frame: FrameDetections, config: GateConfig) -> GateOutcome:
    """Apply the confidence filter, then the exact-count check.

    A box whose confidence equals the threshold survives (inclusive
    comparison, so the documented threshold value itself is admissible).
    """
    survivors = [b for b in frame.boxes if b.conf >= config.conf_threshold]
    if len(survivors) != config.expected_count:
        return GateOutcome.reject(found=len(survivors))
    return GateOutcome.accept(centers=tuple(center(b) for b in survivors))


def compute_fdr(accepted_frames: int, total_frames: int) -> float:
    """Frame detection rate: accepted frames over total frames."""
    if total_frames <= 0:
        raise ValueError("frame detection rate undefined for an empty stream")
    if not 0 <= accepted_frames <= total_frames:
        raise ValueError(
            f"accepted_frames must be in [0, {total_frames}], got {accepted_frames}"
        )
    return accepted_frames / total_frames


def make_fdr_report(
    total_frames: int,
    accepted_frames: int,
    rejection_histogram: dict[int, int],
) -> FdrReport:
    return FdrReport(
        total_frames=total_frames,
        accepted_frames=accepted_frames,
        rejected_frames=total_frames - accepted_frames,
        fdr=compute_fdr(accepted_frames, total_frames),
        rejection_histogram=dict(sorted(rejection_histogram.items())),
    )
