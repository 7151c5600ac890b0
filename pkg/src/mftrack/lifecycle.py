"""Track lifecycle rules: termination and noise filtering.

A waiting track is terminated once the frames elapsed since its last
match exceed min(N_r, T2): reliable tracks (many matched frames) wait
longer, but never more than T2 frames. Trajectories are flagged as noise
when they are too short (only checked at end of life), barely move, or
spend too large a fraction of their life waiting.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .types import NOISE, TERMINATED, WAITING, Track, TrackerConfig


def should_terminate(track: Track, f_c: int, t2: int) -> bool:
    """True once the track's last match is older than its allowance."""
    return track.f_l < f_c - min(track.n_r, t2)


def is_noise(track: Track, at_end_of_life: bool, cfg: TrackerConfig) -> bool:
    """Noise tests over a whole trajectory.

    The short-life test (span < T3) only applies to trajectories that
    ended their life via the termination rule; the spatial-extent and
    waiting-ratio tests apply to any trajectory of span >= T3.
    """
    span = track.span
    if at_end_of_life and span < cfg.t3:
        return True
    if span >= cfg.t3:
        if track.d_max < cfg.t4:
            return True
        if track.t_w / span >= cfg.t5:
            return True
    return False


@dataclass
class LifecycleReport:
    terminated: list[int] = field(default_factory=list)  # terminated, kept as valid
    noise: list[int] = field(default_factory=list)  # flagged noise (any path)


def sweep(tracks: dict[int, Track], f_c: int, cfg: TrackerConfig) -> LifecycleReport:
    """Run once per frame after matching/correction.

    Terminates overdue waiting tracks (noise-checking them at end of
    life), then applies the mid-life noise tests to every surviving live
    track old enough to judge.
    """
    report = LifecycleReport()
    for track in sorted(tracks.values(), key=lambda t: t.track_id):
        if not track.is_live():
            continue
        if track.status == WAITING and should_terminate(track, f_c, cfg.t2):
            track.end_frame = f_c
            if is_noise(track, at_end_of_life=True, cfg=cfg):
                track.status = NOISE
                report.noise.append(track.track_id)
            else:
                track.status = TERMINATED
                report.terminated.append(track.track_id)
            continue
        if track.span >= cfg.t3 and is_noise(track, at_end_of_life=False, cfg=cfg):
            track.status = NOISE
            track.end_frame = f_c
            report.noise.append(track.track_id)
    return report
