"""Synthetic scenario generation: ground truth plus perturbed detections.

This is the verification oracle for the engine. Every scenario is a pure
function of its spec: all randomness comes from numpy's default_rng
(PCG64) seeded with spec.seed, and nothing else. Documented so that runs
are reproducible across machines.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InputError
from .metrics import GroundTruthObject
from .types import ColorHistogram, Detection, ObjectState, TrackerConfig

CLUTTER = -1  # provenance label for clutter detections


@dataclass(frozen=True)
class MotionScript:
    """Piecewise-linear motion: waypoints are (frame, x, y, l, h).

    The object exists from the first to the last waypoint frame; states
    in between are linearly interpolated. hist_peak places the object's
    base color histogram bump.
    """

    waypoints: tuple[tuple[float, ...], ...]
    hist_peak: int = 0
    hist_width: float = 4.0

    def frame_range(self) -> tuple[int, int]:
        return int(self.waypoints[0][0]), int(self.waypoints[-1][0])

    def state_at(self, frame: int) -> ObjectState:
        wps = self.waypoints
        if frame <= wps[0][0]:
            _, x, y, l, h = wps[0]
            return ObjectState(x, y, l, h)
        for (f0, x0, y0, l0, h0), (f1, x1, y1, l1, h1) in zip(wps, wps[1:]):
            if frame <= f1:
                a = (frame - f0) / (f1 - f0)
                return ObjectState(x0 + a * (x1 - x0), y0 + a * (y1 - y0),
                                   l0 + a * (l1 - l0), h0 + a * (h1 - h0))
        _, x, y, l, h = wps[-1]
        return ObjectState(x, y, l, h)


@dataclass(frozen=True)
class ClutterBlob:
    """A short-lived near-stationary false detection source."""

    start_frame: int
    lifetime: int
    x: float
    y: float
    size: float = 8.0
    hist_peak: int = 0


@dataclass(frozen=True)
class ScenarioSpec:
    seed: int = 0
    duration: int = 100
    objects: tuple[MotionScript, ...] = ()
    n_bins: int = 96
    drop_probability: float = 0.0
    # explicit detection gaps: (object_index, start_frame, length)
    burst_drops: tuple[tuple[int, int, int], ...] = ()
    position_jitter_sigma: float = 0.0
    size_jitter_sigma: float = 0.0
    histogram_noise: float = 0.0
    # random clutter: expected concurrent clutter detections per frame
    clutter_rate: float = 0.0
    clutter_lifetime: int = 10
    clutter_extent: float = 3.0
    # explicit clutter blobs, in addition to the random ones
    clutter_blobs: tuple[ClutterBlob, ...] = ()
    arena: tuple[float, float] = (640.0, 480.0)

    def validate(self) -> "ScenarioSpec":
        if self.duration < 1:
            raise InputError("duration must be >= 1")
        if not (0.0 <= self.drop_probability <= 1.0):
            raise InputError("drop_probability must be in [0,1]")
        if self.clutter_rate < 0 or self.clutter_lifetime < 1 or self.clutter_extent <= 0:
            raise InputError("invalid clutter parameters")
        return self


@dataclass
class ScenarioResult:
    gt: list[GroundTruthObject]
    detections_by_frame: dict[int, list[Detection]]
    # (frame_id, detection_id) -> gt_id, or CLUTTER
    provenance: dict[tuple[int, int], int]


def _base_histogram(n_bins: int, peak: int, width: float, pixel_count: float) -> np.ndarray:
    k = np.arange(n_bins, dtype=np.float64)
    bump = np.exp(-0.5 * ((k - peak) / width) ** 2)
    return bump / bump.sum() * pixel_count


def generate(spec: ScenarioSpec) -> ScenarioResult:
    """Ground truth plus perturbed detections, deterministic in the seed."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)

    gt: list[GroundTruthObject] = []
    for gid, script in enumerate(spec.objects):
        f0, f1 = script.frame_range()
        f1 = min(f1, spec.duration - 1)
        states = {f: script.state_at(f) for f in range(max(f0, 0), f1 + 1)}
        gt.append(GroundTruthObject(gt_id=gid, states=states))

    gaps: set[tuple[int, int]] = set()
    for obj_idx, start, length in spec.burst_drops:
        for f in range(start, start + length):
            gaps.add((obj_idx, f))

    # random clutter: spawn so the steady-state blob count ~ clutter_rate
    blobs = list(spec.clutter_blobs)
    if spec.clutter_rate > 0:
        mean_life = (spec.clutter_lifetime + 1) / 2.0
        spawn_rate = spec.clutter_rate / mean_life
        for f in range(spec.duration):
            for _ in range(rng.poisson(spawn_rate)):
                blobs.append(ClutterBlob(
                    start_frame=f,
                    lifetime=int(rng.integers(1, spec.clutter_lifetime + 1)),
                    x=float(rng.uniform(0, spec.arena[0])),
                    y=float(rng.uniform(0, spec.arena[1])),
                    size=float(rng.uniform(6.0, 12.0)),
                    hist_peak=int(rng.integers(0, spec.n_bins)),
                ))

    detections: dict[int, list[Detection]] = {f: [] for f in range(spec.duration)}
    provenance: dict[tuple[int, int], int] = {}

    for f in range(spec.duration):
        next_id = 0
        for gid, (script, g) in enumerate(zip(spec.objects, gt)):
            if f not in g.states or (gid, f) in gaps:
                continue
            if spec.drop_probability > 0 and rng.random() < spec.drop_probability:
                continue
            s = g.states[f]
            x = s.x + (rng.normal(0, spec.position_jitter_sigma) if spec.position_jitter_sigma else 0.0)
            y = s.y + (rng.normal(0, spec.position_jitter_sigma) if spec.position_jitter_sigma else 0.0)
            l = s.l + (rng.normal(0, spec.size_jitter_sigma) if spec.size_jitter_sigma else 0.0)
            h = s.h + (rng.normal(0, spec.size_jitter_sigma) if spec.size_jitter_sigma else 0.0)
            l = max(l, 1.0)
            h = max(h, 1.0)
            hist = _base_histogram(spec.n_bins, script.hist_peak, script.hist_width, l * h)
            if spec.histogram_noise > 0:
                hist = np.clip(hist * (1.0 + spec.histogram_noise * rng.normal(size=hist.size)), 0.0, None)
            det = Detection(f, next_id, ObjectState(x, y, l, h), ColorHistogram(hist))
            detections[f].append(det)
            provenance[(f, next_id)] = gid
            next_id += 1

        for blob in blobs:
            if not (blob.start_frame <= f < blob.start_frame + blob.lifetime):
                continue
            # position wobbles inside a disc of diameter clutter_extent,
            # so pairwise spread never exceeds clutter_extent
            r = spec.clutter_extent / 2.0 * float(np.sqrt(rng.uniform()))
            theta = float(rng.uniform(0.0, 2.0 * np.pi))
            x = blob.x + r * float(np.cos(theta))
            y = blob.y + r * float(np.sin(theta))
            hist = _base_histogram(spec.n_bins, blob.hist_peak, 2.0, blob.size * blob.size)
            det = Detection(f, next_id, ObjectState(x, y, blob.size, blob.size), ColorHistogram(hist))
            detections[f].append(det)
            provenance[(f, next_id)] = CLUTTER
            next_id += 1

    return ScenarioResult(gt=gt, detections_by_frame=detections, provenance=provenance)


def brute_force_tracks(result: ScenarioResult, cfg: TrackerConfig) -> list[tuple[int, list[int]]]:
    """Reference trajectory fragments from ground-truth identity labels.

    Uses the simulator's provenance to assign each detection to its true
    object, then splits each object's detection timeline into fragments
    wherever the termination rule would force the engine to give up
    (gap > min(matched-so-far, T2)). Returns (gt_id, matched_frames)
    fragments. Guarded to desk-scale instances.
    """
    n_objects = len(result.gt)
    n_frames = len(result.detections_by_frame)
    if n_objects > 5 or n_frames > 200:
        raise InputError(
            f"brute-force oracle limited to 5 objects / 200 frames, got {n_objects} / {n_frames}")

    by_object: dict[int, list[int]] = {g.gt_id: [] for g in result.gt}
    for (f, did), gid in sorted(result.provenance.items()):
        if gid != CLUTTER:
            by_object[gid].append(f)

    fragments: list[tuple[int, list[int]]] = []
    for gid, frames in by_object.items():
        frames = sorted(set(frames))
        if not frames:
            continue
        current = [frames[0]]
        for f in frames[1:]:
            gap = f - current[-1] - 1
            if gap > min(len(current), cfg.t2):
                fragments.append((gid, current))
                current = [f]
            else:
                current.append(f)
        fragments.append((gid, current))
    return fragments


# -- canned scenarios ---------------------------------------------------------

def lanes_scenario(
    n_objects: int = 5,
    duration: int = 500,
    seed: int = 1,
    speed: float = 1.0,
    lane_gap: float = 80.0,
    box: tuple[float, float] = (24.0, 48.0),
    **overrides,
) -> ScenarioSpec:
    """Objects moving on parallel horizontal lanes, well separated."""
    l, h = box
    objects = []
    for i in range(n_objects):
        y = 60.0 + i * lane_gap
        x0 = 30.0 + 10.0 * i
        objects.append(MotionScript(
            waypoints=((0, x0, y, l, h), (duration - 1, x0 + speed * (duration - 1), y, l, h)),
            hist_peak=(5 + 17 * i) % overrides.get("n_bins", 96),
        ))
    return ScenarioSpec(seed=seed, duration=duration, objects=tuple(objects),
                        arena=(max(700.0, 60.0 + speed * duration),
                               max(480.0, 120.0 + n_objects * lane_gap)),
                        **overrides)


def bench_scenario(frames: int = 5000, objects: int = 5, clutter: float = 5.0,
                   seed: int = 7) -> ScenarioSpec:
    return lanes_scenario(
        n_objects=objects, duration=frames, seed=seed, speed=0.8,
        clutter_rate=clutter, clutter_lifetime=10, clutter_extent=3.0,
        position_jitter_sigma=0.5, histogram_noise=0.05,
    )


# -- JSON (de)serialization for the CLI --------------------------------------

def spec_to_json(spec: ScenarioSpec) -> str:
    return json.dumps(asdict(spec), indent=2)


def spec_from_json(text: str) -> ScenarioSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid scenario JSON: {e}") from e
    if not isinstance(raw, dict):
        raise InputError("scenario JSON must be an object")
    try:
        objects = tuple(
            MotionScript(waypoints=tuple(tuple(wp) for wp in o["waypoints"]),
                         hist_peak=int(o.get("hist_peak", 0)),
                         hist_width=float(o.get("hist_width", 4.0)))
            for o in raw.pop("objects", []))
        blobs = tuple(ClutterBlob(**b) for b in raw.pop("clutter_blobs", []))
        burst = tuple(tuple(b) for b in raw.pop("burst_drops", []))
        arena = tuple(raw.pop("arena", (640.0, 480.0)))
        spec = ScenarioSpec(objects=objects, clutter_blobs=blobs,
                            burst_drops=burst, arena=arena, **raw)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"invalid scenario spec: {e}") from e
    return spec.validate()
