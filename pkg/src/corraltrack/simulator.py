"""Synthetic walker/intruder experiments with ground truth.

Generates particle motion in a circular corral (persistent random walk,
pairwise close-range repulsion, specular wall reflection) together with
the noisy detection stream a detector would emit: jittered centers,
sampled confidences, dropped detections and spurious boxes. The point is
tracker validation under controlled separation conditions, not fluid
physics.

Randomness comes from numpy's PCG64. The root seed sequence is split into
one child stream per particle (initial placement, heading noise, speed
draws, in that order) plus one trailing stream for observation noise
(per frame: jitter, drop draws, false-positive count and placement,
confidences, emission order), so runs are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import BoundingBox, FrameDetections, Point2D

# Emitted boxes use a fixed droplet-scale extent; only centers matter downstream.
DETECTION_BOX_EXTENT = 8.0

_PLACEMENT_ATTEMPTS = 200


@dataclass(slots=True)
class SimConfig:
    num_particles: int
    domain_radius: float
    frame_count: int
    fps: float
    speed_mean: float
    speed_std: float
    persistence: float
    repulsion_radius: float
    repulsion_strength: float
    jitter_std: float
    conf_low: float
    conf_high: float
    p_miss: float
    p_false_positive: float
    seed: int
    attraction_strength: float = 0.0  # inward pull, same kernel as repulsion; off by default

    def __post_init__(self):
        if self.num_particles < 1:
            raise ConfigError("num_particles must be >= 1")
        if self.frame_count < 1:
            raise ConfigError("frame_count must be >= 1")
        if self.fps <= 0:
            raise ConfigError("fps must be positive")
        if not self.domain_radius > self.repulsion_radius > 0:
            raise ConfigError("require domain_radius > repulsion_radius > 0")
        if self.speed_mean < 0 or self.speed_std < 0:
            raise ConfigError("speed parameters must be non-negative")
        if not 0.0 <= self.persistence <= 1.0:
            raise ConfigError("persistence must be in [0, 1]")
        if self.repulsion_strength < 0 or self.attraction_strength < 0:
            raise ConfigError("interaction strengths must be non-negative")
        if self.jitter_std < 0:
            raise ConfigError("jitter_std must be non-negative")
        if not (0.0 <= self.conf_low <= self.conf_high <= 1.0):
            raise ConfigError("confidence bounds must satisfy 0 <= low <= high <= 1")
        if not 0.0 <= self.p_miss <= 1.0:
            raise ConfigError("p_miss must be in [0, 1]")
        if self.p_false_positive < 0:
            raise ConfigError("p_false_positive must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a non-negative 64-bit integer")


@dataclass(slots=True, frozen=True)
class GroundTruthRecord:
    """True position of one particle at one frame."""

    frame_index: int
    particle_id: int
    position: Point2D


@dataclass(slots=True, frozen=True)
class DisplacementBoundResult:
    """Outcome of the separation-bound audit over a truth log."""

    holds: bool
    margin: float


def _uniform_in_disk(rng: np.random.Generator, radius: float) -> np.ndarray:
    r = radius * math.sqrt(rng.random())
    theta = 2.0 * math.pi * rng.random()
    return np.array([r * math.cos(theta), r * math.sin(theta)])


def _place_particles(config: SimConfig, rngs: list[np.random.Generator]) -> np.ndarray:
    """Distinct starting positions, pairwise at least 2 * repulsion_radius apart."""
    min_sep = 2.0 * config.repulsion_radius
    placed = np.empty((config.num_particles, 2))
    for i in range(config.num_particles):
        for _ in range(_PLACEMENT_ATTEMPTS):
            cand = _uniform_in_disk(rngs[i], config.domain_radius)
            if i == 0 or np.hypot(*(placed[:i] - cand).T).min() >= min_sep:
                placed[i] = cand
                break
        else:
            raise ConfigError(
                f"could not place {config.num_particles} particles with separation "
                f">= {min_sep} inside radius {config.domain_radius}"
            )
    return placed


def _interaction_impulse(positions: np.ndarray, config: SimConfig) -> np.ndarray:
    """Pairwise radial impulse: linear ramp inside repulsion_radius, zero outside."""
    net = config.repulsion_strength - config.attraction_strength
    if net == 0.0:
        return np.zeros_like(positions)
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    mag = np.where(dist < config.repulsion_radius, net * (1.0 - dist / config.repulsion_radius), 0.0)
    with np.errstate(invalid="ignore"):
        unit = diff / dist[..., None]
    unit = np.nan_to_num(unit)  # coincident pairs push nowhere
    return (mag[..., None] * unit).sum(axis=1)


def _reflect_at_wall(positions: np.ndarray, headings: np.ndarray, radius: float) -> None:
    """Specular reflection of overshooting particles; mutates in place."""
    for _ in range(8):
        r = np.hypot(positions[:, 0], positions[:, 1])
        outside = r > radius
        if not outside.any():
            return
        normal = positions[outside] / r[outside, None]
        positions[outside] -= 2.0 * (r[outside] - radius)[:, None] * normal
        dot = (headings[outside] * normal).sum(axis=1)
        headings[outside] -= 2.0 * dot[:, None] * normal
    # Pathological overshoot (displacement >> radius): clamp to the wall.
    r = np.hypot(positions[:, 0], positions[:, 1])
    outside = r > radius
    if outside.any():
        positions[outside] *= (radius / r[outside])[:, None]


def simulate(config: SimConfig) -> tuple[list[FrameDetections], list[GroundTruthRecord]]:
    """Run one synthetic experiment; returns the detection stream and truth log."""
    n = config.num_particles
    children = np.random.SeedSequence(config.seed).spawn(n + 1)
    particle_rngs = [np.random.Generator(np.random.PCG64(s)) for s in children[:n]]
    noise_rng = np.random.Generator(np.random.PCG64(children[n]))

    positions = _place_particles(config, particle_rngs)
    angles0 = np.array([rng.uniform(0.0, 2.0 * math.pi) for rng in particle_rngs])
    headings = np.column_stack([np.cos(angles0), np.sin(angles0)])
    # Per-particle dynamics draws for the whole run, one batch per stream.
    turn_angles = np.stack(
        [rng.uniform(0.0, 2.0 * math.pi, config.frame_count) for rng in particle_rngs]
    )
    speeds = np.stack(
        [rng.normal(config.speed_mean, config.speed_std, config.frame_count) for rng in particle_rngs]
    )
    np.clip(speeds, 0.0, None, out=speeds)

    detections: list[FrameDetections] = []
    truth: list[GroundTruthRecord] = []

    def record_frame(t: int) -> None:
        for pid in range(n):
            truth.append(
                GroundTruthRecord(t, pid, Point2D(float(positions[pid, 0]), float(positions[pid, 1])))
            )
        jitter = noise_rng.normal(0.0, config.jitter_std, (n, 2))
        dropped = noise_rng.random(n) < config.p_miss
        confs = noise_rng.uniform(config.conf_low, config.conf_high, n)
        boxes = [
            BoundingBox(
                cx=float(positions[pid, 0] + jitter[pid, 0]),
                cy=float(positions[pid, 1] + jitter[pid, 1]),
                w=DETECTION_BOX_EXTENT,
                h=DETECTION_BOX_EXTENT,
                conf=float(confs[pid]),
            )
            for pid in range(n)
            if not dropped[pid]
        ]
        for _ in range(int(noise_rng.poisson(config.p_false_positive))):
            fp = _uniform_in_disk(noise_rng, config.domain_radius)
            boxes.append(
                BoundingBox(
                    cx=float(fp[0]),
                    cy=float(fp[1]),
                    w=DETECTION_BOX_EXTENT,
                    h=DETECTION_BOX_EXTENT,
                    conf=float(noise_rng.uniform(config.conf_low, config.conf_high)),
                )
            )
        # Emission order must not leak particle identity.
        order = noise_rng.permutation(len(boxes))
        detections.append(FrameDetections(t, [boxes[k] for k in order]))

    record_frame(0)
    for t in range(1, config.frame_count):
        mix = config.persistence * headings + (1.0 - config.persistence) * np.column_stack(
            [np.cos(turn_angles[:, t]), np.sin(turn_angles[:, t])]
        )
        norms = np.hypot(mix[:, 0], mix[:, 1])
        ok = norms > 1e-12
        headings[ok] = mix[ok] / norms[ok, None]
        disp = speeds[:, t, None] * headings + _interaction_impulse(positions, config)
        moved = np.hypot(disp[:, 0], disp[:, 1]) > 1e-12
        headings[moved] = disp[moved] / np.hypot(disp[moved, 0], disp[moved, 1])[:, None]
        positions = positions + disp
        _reflect_at_wall(positions, headings, config.domain_radius)
        record_frame(t)

    return detections, truth


def truth_positions_by_frame(truth: list[GroundTruthRecord]) -> dict[int, np.ndarray]:
    """Group a truth log into per-frame (num_particles, 2) arrays, pid order.

    Rejects duplicate (frame, particle) pairs and ragged frames.
    """
    by_frame: dict[int, dict[int, tuple[float, float]]] = {}
    for rec in truth:
        slot = by_frame.setdefault(rec.frame_index, {})
        if rec.particle_id in slot:
            raise ValueError(
                f"duplicate truth record for frame {rec.frame_index}, particle {rec.particle_id}"
            )
        slot[rec.particle_id] = (rec.position.x, rec.position.y)
    counts = {len(slot) for slot in by_frame.values()}
    if len(counts) > 1:
        raise ValueError("truth log has frames with differing particle counts")
    return {
        f: np.array([slot[pid] for pid in sorted(slot)], dtype=np.float64)
        for f, slot in by_frame.items()
    }


def _min_pairwise_distance(xy: np.ndarray) -> float:
    if xy.shape[0] < 2:
        return math.inf
    diff = xy[:, None, :] - xy[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def displacement_bound_check(
    truth: list[GroundTruthRecord], accepted_frames: list[int]
) -> DisplacementBoundResult:
    """Audit the zero-switch precondition over the accepted-frame sequence.

    For every consecutive accepted pair, every particle's displacement must
    stay strictly below half the minimum pairwise distance at the earlier
    frame. Returns whether that holds plus the tightest margin encountered
    (half minimum separation minus worst displacement).
    """
    by_frame = truth_positions_by_frame(truth)
    missing = [f for f in accepted_frames if f not in by_frame]
    if missing:
        raise ValueError(f"truth log does not cover accepted frames {missing[:5]}")
    ordered = sorted(accepted_frames)
    if len(ordered) == 1:
        return DisplacementBoundResult(True, 0.5 * _min_pairwise_distance(by_frame[ordered[0]]))
    holds = True
    margin = math.inf
    for f_prev, f_next in zip(ordered, ordered[1:]):
        a, b = by_frame[f_prev], by_frame[f_next]
        max_disp = float(np.hypot(*(b - a).T).max())
        half_sep = 0.5 * _min_pairwise_distance(a)
        margin = min(margin, half_sep - max_disp)
        if max_disp >= half_sep:
            holds = False
    return DisplacementBoundResult(holds, margin)
