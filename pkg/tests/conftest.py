import numpy as np
import pytest

from mftrack import kalman
from mftrack.types import ColorHistogram, Detection, ObjectState, Track, TrackerConfig


def flat_histogram(n=96, value=10.0):
    return ColorHistogram(np.full(n, value))


def peaked_histogram(n=96, peak=10, total=1000.0):
    k = np.arange(n, dtype=float)
    bump = np.exp(-0.5 * ((k - peak) / 4.0) ** 2)
    return ColorHistogram(bump / bump.sum() * total)


def make_detection(frame_id, det_id, x, y, l=10.0, h=10.0, hist=None, n=96):
    return Detection(frame_id, det_id, ObjectState(x, y, l, h),
                     hist if hist is not None else flat_histogram(n))


def make_track(track_id, state, birth=0, hist=None, cfg=None, n=96, **kw):
    """Track ready for match_frame: prediction and last_cs set to `state`."""
    cfg = cfg or TrackerConfig()
    t = Track(
        track_id=track_id,
        birth_frame=birth,
        states={birth: state},
        last_histogram=hist if hist is not None else flat_histogram(n),
        kalman=kalman.init_kalman(state, cfg),
        f_l=birth,
        **kw,
    )
    t.last_cs = state
    t.prediction = state
    t.matched_frames.add(birth)
    t.update_extent(state.x, state.y)
    return t


@pytest.fixture
def cfg():
    return TrackerConfig()
