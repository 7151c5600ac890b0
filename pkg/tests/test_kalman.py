import numpy as np
import pytest

from mftrack import kalman
from mftrack.errors import NumericOverflowError
from mftrack.types import KalmanState, ObjectState, TrackerConfig


def identity_state(mean4, q=0.0):
    return KalmanState(
        mean=np.asarray(mean4, dtype=float),
        covariance=np.eye(4),
        transition=np.eye(4),
        process_noise=q * np.eye(4),
        measurement_noise=np.eye(4),
    )


def test_predict_identity_transition():
    ks = identity_state([10, 20, 5, 8])
    _, es = kalman.predict(ks)
    assert (es.x, es.y, es.l, es.h) == (10, 20, 5, 8)


def test_predict_constant_velocity():
    cfg = TrackerConfig()
    ks = kalman.init_kalman(ObjectState(10, 20, 5, 8), cfg)
    ks.mean[4:] = [2, -1, 0, 0]
    _, es = kalman.predict(ks)
    assert (es.x, es.y, es.l, es.h) == (12, 19, 5, 8)


def test_predict_idempotent_under_identity():
    ks = identity_state([1, 2, 3, 4], q=0.0)
    ks1, es1 = kalman.predict(ks)
    ks2, es2 = kalman.predict(ks1)
    assert np.array_equal(ks1.mean, ks2.mean)
    assert es1 == es2


def test_predict_overflow_detected():
    ks = identity_state([1e308, 0, 1, 1])
    ks.transition = 10.0 * np.eye(4)
    with np.errstate(over="ignore"), pytest.raises(NumericOverflowError):
        kalman.predict(ks)


def test_correct_agreement_fixed_point():
    s = ObjectState(10, 20, 5, 8)
    for w in (0.0, 0.3, 0.7, 1.0):
        ks = identity_state([10, 20, 5, 8])
        _, cs = kalman.correct(ks, s, s, s, w)
        assert cs == s


def test_correct_blend():
    ks = identity_state([20, 0, 10, 10])
    ms = ObjectState(10, 0, 10, 10)
    es = ObjectState(20, 0, 10, 10)
    _, cs = kalman.correct(ks, es, ms, es, w=0.7)
    assert cs.x == pytest.approx(13.0)
    assert (cs.y, cs.l, cs.h) == (0, 10, 10)


def test_correct_without_measurement_holds_previous():
    ks = identity_state([1, 1, 1, 1])
    prev = ObjectState(4, 4, 2, 2)
    out_ks, cs = kalman.correct(ks, ObjectState(9, 9, 2, 2), None, prev, w=0.7)
    assert cs == prev
    assert out_ks is ks  # covariance already inflated by this frame's predict


def test_blend_is_convex_combination():
    rng = np.random.default_rng(42)
    for _ in range(200):
        ms = ObjectState(*rng.uniform(1, 100, size=4))
        es = ObjectState(*rng.uniform(1, 100, size=4))
        w = float(rng.uniform(0, 1))
        ks = identity_state(es.as_vector())
        _, cs = kalman.correct(ks, es, ms, es, w)
        for a, b, c in zip(ms.as_vector(), es.as_vector(), cs.as_vector()):
            assert min(a, b) - 1e-12 <= c <= max(a, b) + 1e-12


def test_predict_correct_fixed_point_with_zero_noise():
    # identity transition, zero process noise, measurement equal to the mean
    s = ObjectState(5, 6, 7, 8)
    ks = identity_state(s.as_vector(), q=0.0)
    for _ in range(5):
        ks, es = kalman.predict(ks)
        ks, cs = kalman.correct(ks, es, s, s, w=0.7)
        assert cs == s
    assert np.allclose(ks.mean, s.as_vector())


def test_covariance_stays_symmetric_nonnegative_diagonal():
    rng = np.random.default_rng(7)
    cfg = TrackerConfig()
    ks = kalman.init_kalman(ObjectState(50, 50, 10, 20), cfg)
    prev = ObjectState(50, 50, 10, 20)
    for i in range(100):
        ks, es = kalman.predict(ks)
        meas = ObjectState(*(np.abs(rng.uniform(5, 80, size=4))))
        ks, prev = kalman.correct(ks, es, meas if i % 3 else None, prev, cfg.w)
        scale = max(1.0, float(np.abs(ks.covariance).max()))
        assert np.allclose(ks.covariance, ks.covariance.T, atol=1e-9 * scale)
        assert np.all(np.diag(ks.covariance) >= -1e-9 * scale)


def test_internal_filter_follows_measurements():
    # after repeated updates on a moving target, the estimate tracks it
    cfg = TrackerConfig()
    ks = kalman.init_kalman(ObjectState(0, 0, 10, 10), cfg)
    prev = ObjectState(0.001, 0, 10, 10)
    for f in range(1, 80):
        ks, es = kalman.predict(ks)
        meas = ObjectState(2.0 * f + 0.001, 0, 10, 10)
        ks, prev = kalman.correct(ks, es, meas, prev, cfg.w)
    _, es = kalman.predict(ks)
    assert es.x == pytest.approx(2.0 * 80 + 0.001, abs=0.1)
