"""Fixed-population, motion-only track maintenance.

IDs are assigned once, on the first gate-accepted frame, and never created
or destroyed afterwards. Each later accepted frame extends every track by
the minimum-cost assignment between the previous accepted positions and
the new detection centers. There is no motion prediction and no appearance
model by design: the tracked objects are visually indistinguishable and
their motion is strongly nonlinear, so raw nearest-assignment against the
last known positions is the whole method.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .assignment import _jv_points, build_cost_matrix, solve_assignment
from .errors import NoAcceptedFramesError, StreamOrderError
from .gating import FdrReport, GateConfig, make_fdr_report
from .geometry import FrameDetections, Point2D


@dataclass(slots=True)
class Track:
    """Live tracking state for one object: immutable id, latest fix."""

    track_id: int
    last_position: Point2D
    last_frame: int


@dataclass(eq=False)
class Trajectory:
    """Identity-stable position history of one track.

    Backed by parallel arrays (frame indices and xy coordinates) so long
    runs stay compact; `points` materializes the friendly view.
    """

    track_id: int
    frames: np.ndarray
    xy: np.ndarray

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.int64)
        self.xy = np.asarray(self.xy, dtype=np.float64)
        if self.frames.ndim != 1 or self.xy.shape != (self.frames.shape[0], 2):
            raise ValueError("trajectory arrays must be (m,) frames and (m, 2) xy")
        if self.frames.size > 1 and not (np.diff(self.frames) > 0).all():
            raise ValueError("trajectory frame indices must be strictly increasing")

    @classmethod
    def from_points(cls, track_id: int, points: Sequence[tuple[int, Point2D]]) -> "Trajectory":
        frames = np.array([f for f, _ in points], dtype=np.int64)
        xy = np.array([(p.x, p.y) for _, p in points], dtype=np.float64).reshape(-1, 2)
        return cls(track_id, frames, xy)

    @property
    def points(self) -> list[tuple[int, Point2D]]:
        return [
            (int(f), Point2D(float(x), float(y)))
            for f, (x, y) in zip(self.frames, self.xy)
        ]

    def __len__(self) -> int:
        return int(self.frames.size)


@dataclass
class TrackingReport:
    """Everything a tracking run produces: accounting plus trajectories."""

    fdr_report: FdrReport
    rejected_frame_indices: list[int]
    trajectories: list[Trajectory]


def init_tracks(first_accepted: Sequence[Point2D], frame_index: int = 0) -> list[Track]:
    """Assign ids 0..n-1 in the order centers appear in the gated frame."""
    if len(first_accepted) == 0:
        raise ValueError("cannot initialize tracks from an empty center list")
    return [Track(i, p, frame_index) for i, p in enumerate(first_accepted)]


def step(tracks: list[Track], frame_index: int, centers: Sequence[Point2D]) -> list[Track]:
    """Extend every track by the optimal assignment to the new centers.

    The population is fixed: no track is created or destroyed, each track
    takes exactly one center.
    """
    if len(centers) != len(tracks):
        raise ValueError(
            f"center count {len(centers)} does not match track count {len(tracks)}"
        )
    for t in tracks:
        if frame_index <= t.last_frame:
            raise ValueError(
                f"frame_index {frame_index} not ahead of track {t.track_id} "
                f"at frame {t.last_frame}"
            )
    cost = build_cost_matrix([t.last_position for t in tracks], list(centers))
    mapping = solve_assignment(cost).mapping
    for i, t in enumerate(tracks):
        t.last_position = centers[mapping[i]]
        t.last_frame = frame_index
    return tracks


def run(stream: Iterable[FrameDetections], config: GateConfig) -> TrackingReport:
    """Gate and track a whole detection stream in a single pass.

    Rejected frames are skipped and association resumes against the last
    accepted positions; memory stays bounded apart from the accumulated
    trajectories, so arbitrarily long streams can be tracked live.
    """
    threshold = config.conf_threshold
    expected = config.expected_count
    total = 0
    histogram: dict[int, int] = {}
    rejected: list[int] = []
    accepted_frames: list[int] = []
    rows: list[np.ndarray] = []
    positions: np.ndarray | None = None
    last_index = -1
    for frame in stream:
        idx = frame.frame_index
        if idx <= last_index:
            raise StreamOrderError(
                f"frame index {idx} not greater than previous {last_index}"
            )
        last_index = idx
        total += 1
        # Inline confidence-then-count gate; mirrors gating.gate_frame.
        survivors = [b for b in frame.boxes if b.conf >= threshold]
        if len(survivors) != expected:
            rejected.append(idx)
            found = len(survivors)
            histogram[found] = histogram.get(found, 0) + 1
            continue
        curr = np.array([(b.cx, b.cy) for b in survivors], dtype=np.float64)
        if positions is None:
            positions = curr
        else:
            positions = curr[_jv_points(positions, curr)]
        accepted_frames.append(idx)
        rows.append(positions)
    if positions is None:
        raise NoAcceptedFramesError(
            f"no frame of the {total}-frame stream passed the gate"
        )
    frames_arr = np.asarray(accepted_frames, dtype=np.int64)
    stacked = np.stack(rows)
    trajectories = [
        Trajectory(tid, frames_arr, np.ascontiguousarray(stacked[:, tid, :]))
        for tid in range(expected)
    ]
    return TrackingReport(
        fdr_report=make_fdr_report(total, len(accepted_frames), histogram),
        rejected_frame_indices=rejected,
        trajectories=trajectories,
    )
