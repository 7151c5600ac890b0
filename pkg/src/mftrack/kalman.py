"""Per-track linear filter: estimation and weighted correction.

The filter carries the box state through a constant transition matrix.
The emitted corrected state is NOT the classic gain-fused posterior: it is
the fixed-weight blend  CS = w * MS + (1 - w) * ES  of the measured and
estimated states. The internal mean/covariance are still updated with the
measurement through the standard equations so that future estimates follow
the detections.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericOverflowError
from .types import KalmanState, ObjectState, TrackerConfig

# floor for predicted box dimensions; a long waiting streak under the
# constant-velocity model can otherwise drive l or h non-positive
_MIN_EXTENT = 1e-6

# initial variance for the unobserved velocity components
_INIT_VEL_VAR = 100.0


def _cv_transition() -> np.ndarray:
    phi = np.eye(8)
    phi[:4, 4:] = np.eye(4)
    return phi


def init_kalman(state: ObjectState, cfg: TrackerConfig) -> KalmanState:
    """Filter for a newborn track, seeded at the spawning detection."""
    r = cfg.measurement_noise * np.eye(4)
    if cfg.motion_model == "static":
        mean = state.as_vector()
        cov = cfg.measurement_noise * np.eye(4)
        phi = np.eye(4)
        q = cfg.process_noise_pos * np.eye(4)
    else:
        mean = np.concatenate([state.as_vector(), np.zeros(4)])
        cov = np.diag([cfg.measurement_noise] * 4 + [_INIT_VEL_VAR] * 4)
        phi = _cv_transition()
        q = np.diag([cfg.process_noise_pos] * 4 + [cfg.process_noise_vel] * 4)
    return KalmanState(mean=mean, covariance=cov, transition=phi,
                       process_noise=q, measurement_noise=r)


def _state_from_mean(mean: np.ndarray) -> ObjectState:
    x, y, l, h = mean[:4]
    return ObjectState(float(x), float(y), max(float(l), _MIN_EXTENT), max(float(h), _MIN_EXTENT))


def predict(ks: KalmanState) -> tuple[KalmanState, ObjectState]:
    """One estimation step: propagate mean and covariance, extract the
    estimated box state."""
    mean = ks.transition @ ks.mean
    cov = ks.transition @ ks.covariance @ ks.transition.T + ks.process_noise
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
        raise NumericOverflowError("filter prediction produced non-finite values")
    cov = 0.5 * (cov + cov.T)
    new = KalmanState(mean=mean, covariance=cov, transition=ks.transition,
                      process_noise=ks.process_noise, measurement_noise=ks.measurement_noise)
    return new, _state_from_mean(mean)


def correct(
    ks: KalmanState,
    estimated: ObjectState,
    measured: ObjectState | None,
    prev_corrected: ObjectState,
    w: float,
) -> tuple[KalmanState, ObjectState]:
    """Correction step for one frame.

    With a measurement: the corrected state is the componentwise blend
    w * measured + (1 - w) * estimated, and the internal filter is updated
    with the measurement. Without one: the corrected state is held at the
    previous corrected state and the filter keeps its predicted (inflated)
    covariance unchanged.
    """
    if measured is None:
        return ks, prev_corrected

    dim = ks.dim
    obs = np.zeros((4, dim))
    obs[:, :4] = np.eye(4)
    innovation = measured.as_vector() - obs @ ks.mean
    s = obs @ ks.covariance @ obs.T + ks.measurement_noise
    gain = ks.covariance @ obs.T @ np.linalg.inv(s)
    mean = ks.mean + gain @ innovation
    cov = (np.eye(dim) - gain @ obs) @ ks.covariance
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
        raise NumericOverflowError("filter update produced non-finite values")
    cov = 0.5 * (cov + cov.T)
    new = KalmanState(mean=mean, covariance=cov, transition=ks.transition,
                      process_noise=ks.process_noise, measurement_noise=ks.measurement_noise)

    blended = w * measured.as_vector() + (1.0 - w) * estimated.as_vector()
    return new, _state_from_mean(blended)
