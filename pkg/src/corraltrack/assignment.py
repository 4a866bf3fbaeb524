"""Exact minimum-cost assignment between equal-sized track and detection sets.

The production solver is an O(n^3) shortest-augmenting-path implementation
of the Kuhn-Munkres method (Jonker-Volgenant style, with row/column
potentials), JIT-compiled with numba. An exhaustive permutation search is
kept alongside it as an independent verification oracle.

Tie-breaking is deterministic: whenever two augmenting choices have equal
reduced cost, the lower column index wins. Both the solver and the oracle
honor that rule, so repeated runs on identical input return identical
mappings.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .geometry import Point2D, euclidean_distance

BRUTE_FORCE_MAX_N = 10


@dataclass(eq=False)
class CostMatrix:
    """Square matrix of track-to-detection distances, row = track, col = detection."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.ascontiguousarray(self.entries, dtype=np.float64)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError(f"cost matrix must be square, got shape {self.entries.shape}")
        if self.entries.shape[0] == 0:
            raise ValueError("cost matrix must be non-empty")
        if not np.isfinite(self.entries).all():
            raise ValueError("cost matrix entries must be finite")
        if (self.entries < 0).any():
            raise ValueError("cost matrix entries must be non-negative")

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(slots=True, frozen=True)
class Assignment:
    """A permutation mapping[i] = detection column assigned to track row i."""

    mapping: tuple[int, ...]
    total_cost: float


def build_cost_matrix(tracks: list[Point2D], detections: list[Point2D]) -> CostMatrix:
    """Pairwise Euclidean distances between track and detection centers.

    Gating guarantees equal counts upstream; a length mismatch here is a
    pipeline bug, not a recoverable condition.
    """
    if len(tracks) == 0 or len(detections) == 0:
        raise ValueError("tracks and detections must be non-empty")
    if len(tracks) != len(detections):
        raise ValueError(
            f"size mismatch: {len(tracks)} tracks vs {len(detections)} detections"
        )
    n = len(tracks)
    entries = np.empty((n, n), dtype=np.float64)
    for i, t in enumerate(tracks):
        for j, d in enumerate(detections):
            entries[i, j] = euclidean_distance(t, d)
    return CostMatrix(entries)


def _mapping_cost(entries: np.ndarray, mapping) -> float:
    # Summed in ascending row order so solver and oracle report bitwise
    # identical totals whenever they agree on the permutation.
    total = 0.0
    for i, j in enumerate(mapping):
        total += entries[i, j]
    return float(total)


@njit(cache=True)
def _jv_dense(cost):  # pragma: no cover - exercised via solve_assignment
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_at = np.full(n + 1, -1, np.int64)  # row matched to column j (1-based, 0 virtual)
    way = np.zeros(n + 1, np.int64)
    for i in range(1, n + 1):
        row_at[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, np.bool_)
        while True:
            used[j0] = True
            i0 = row_at[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[row_at[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if row_at[j0] == -1:
                break
        while j0 != 0:
            j1 = way[j0]
            row_at[j0] = row_at[j1]
            j0 = j1
    mapping = np.empty(n, np.int64)
    for j in range(1, n + 1):
        mapping[row_at[j] - 1] = j - 1
    return mapping


@njit(cache=True)
def _jv_points(prev_xy, curr_xy):  # pragma: no cover - exercised via tracker
    # Same algorithm as _jv_dense with the Euclidean cost computed on the
    # fly; saves materializing the matrix on the per-frame hot path.
    n = prev_xy.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_at = np.full(n + 1, -1, np.int64)
    way = np.zeros(n + 1, np.int64)
    for i in range(1, n + 1):
        row_at[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, np.bool_)
        while True:
            used[j0] = True
            i0 = row_at[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, n + 1):
                if not used[j]:
                    dx = prev_xy[i0 - 1, 0] - curr_xy[j - 1, 0]
                    dy = prev_xy[i0 - 1, 1] - curr_xy[j - 1, 1]
                    cur = math.sqrt(dx * dx + dy * dy) - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[row_at[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if row_at[j0] == -1:
                break
        while j0 != 0:
            j1 = way[j0]
            row_at[j0] = row_at[j1]
            j0 = j1
    mapping = np.empty(n, np.int64)
    for j in range(1, n + 1):
        mapping[row_at[j] - 1] = j - 1
    return mapping


def solve_assignment(cost: CostMatrix | np.ndarray) -> Assignment:
    """Minimum-total-cost permutation of a square cost matrix, exactly.

    Deterministic for a fixed input; equal-cost choices resolve to the
    lowest column index.
    """
    entries = cost.entries if isinstance(cost, CostMatrix) else np.asarray(cost, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
        raise ValueError(f"cost matrix must be square and non-empty, got shape {entries.shape}")
    if not np.isfinite(entries).all():
        raise ValueError("cost matrix entries must be finite")
    mapping = _jv_dense(np.ascontiguousarray(entries))
    return Assignment(tuple(int(j) for j in mapping), _mapping_cost(entries, mapping))


def brute_force_assignment(cost: CostMatrix | np.ndarray) -> Assignment:
    """Verification oracle: enumerate all n! permutations, keep the cheapest.

    The first permutation (in lexicographic order) attaining the minimum
    wins, which matches the solver's lowest-column-index tie rule on the
    documented cases. Guarded to n <= 10.
    """
    entries = cost.entries if isinstance(cost, CostMatrix) else np.asarray(cost, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
        raise ValueError(f"cost matrix must be square and non-empty, got shape {entries.shape}")
    n = entries.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if not np.isfinite(entries).all():
        raise ValueError("cost matrix entries must be finite")
    rows = [tuple(row) for row in entries]
    best_perm = None
    best_cost = math.inf
    for perm in itertools.permutations(range(n)):
        total = 0.0
        for i, j in enumerate(perm):
            total += rows[i][j]
        if total < best_cost:
            best_cost = total
            best_perm = perm
    return Assignment(best_perm, _mapping_cost(entries, best_perm))
