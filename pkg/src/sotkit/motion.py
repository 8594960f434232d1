"""Constant-velocity Kalman filter over box state.

State layout is [cx, cy, w, h, vcx, vcy, vw, vh] with dt fixed at one frame.
Noise magnitudes follow the SORT family: standard deviations are fractions
of the current box height, so the filter is scale-adaptive without extra
tuning knobs. States are values; every operation returns a new state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .geometry import BBox, iou

_F = np.eye(8)
_F[:4, 4:] = np.eye(4)


@dataclass(frozen=True)
class MotionConfig:
    """Filter noise fractions, stability window, and selection weight."""

    process_noise_pos: float = 1.0 / 20
    process_noise_vel: float = 1.0 / 160
    measure_noise: float = 1.0 / 20
    tau_stab: int = 3
    alpha_kf: float = 0.15

    def __post_init__(self):
        if not 0.0 <= self.alpha_kf <= 1.0:
            raise ValueError(f"alpha_kf must be in [0,1], got {self.alpha_kf}")
        if self.tau_stab < 0:
            raise ValueError(f"tau_stab must be >= 0, got {self.tau_stab}")
        if min(self.process_noise_pos, self.process_noise_vel, self.measure_noise) <= 0:
            raise ValueError("noise fractions must be positive")


@dataclass(frozen=True, eq=False)
class KalmanState:
    """Filter mean/covariance plus the update-streak counter for the gate."""

    mean: np.ndarray           # shape (8,)
    cov: np.ndarray            # shape (8, 8), symmetric PSD
    frames_since_init: int = 0
    consecutive_updates: int = 0

    def box(self) -> BBox:
        m = self.mean
        return BBox(float(m[0]), float(m[1]), max(float(m[2]), 1.0), max(float(m[3]), 1.0))


def kf_init(box: BBox, cfg: MotionConfig) -> KalmanState:
    """Start a filter at the given box with zero velocity."""
    if box.empty:
        raise ValueError("cannot initialize motion state from an empty box")
    mean = np.array([box.cx, box.cy, box.w, box.h, 0.0, 0.0, 0.0, 0.0])
    h = box.h
    pos_var = (2.0 * cfg.measure_noise * h) ** 2
    vel_var = (10.0 * cfg.measure_noise * h) ** 2
    cov = np.diag([pos_var] * 4 + [vel_var] * 4)
    return KalmanState(mean=mean, cov=cov)


def kf_predict(s: KalmanState, cfg: MotionConfig) -> tuple[KalmanState, BBox]:
    """Advance one frame under constant velocity; returns the predicted box."""
    mean = _F @ s.mean
    h = max(float(s.mean[3]), 1.0)
    q_pos = (cfg.process_noise_pos * h) ** 2
    q_vel = (cfg.process_noise_vel * h) ** 2
    cov = _F @ s.cov @ _F.T
    diag = cov.ravel()[::9]
    diag[:4] += q_pos
    diag[4:] += q_vel
    state = KalmanState(
        mean=mean,
        cov=cov,
        frames_since_init=s.frames_since_init + 1,
        consecutive_updates=s.consecutive_updates,
    )
    box = BBox(float(mean[0]), float(mean[1]), max(float(mean[2]), 1.0), max(float(mean[3]), 1.0))
    return state, box


def kf_update(s: KalmanState, z: BBox, cfg: MotionConfig) -> KalmanState:
    """Correct with a measured box (Joseph-form covariance, symmetrized)."""
    if z.empty:
        raise ValueError("cannot update motion state with an empty box")
    zvec = np.array([z.cx, z.cy, z.w, z.h])
    r = (cfg.measure_noise * z.h) ** 2
    innovation = zvec - s.mean[:4]
    gain_t = np.linalg.solve(s.cov[:4, :4] + r * np.eye(4), s.cov[:4, :])
    mean = s.mean + gain_t.T @ innovation
    ikh = np.eye(8)
    ikh[:, :4] -= gain_t.T
    cov = ikh @ s.cov @ ikh.T + r * (gain_t.T @ gain_t)
    cov = (cov + cov.T) * 0.5
    if mean[2] < 1.0:
        mean[2] = 1.0
    if mean[3] < 1.0:
        mean[3] = 1.0
    return KalmanState(
        mean=mean,
        cov=cov,
        frames_since_init=s.frames_since_init,
        consecutive_updates=s.consecutive_updates + 1,
    )


def kf_mark_missed(s: KalmanState) -> KalmanState:
    """No measurement this frame: the update streak resets, prediction goes on."""
    return replace(s, consecutive_updates=0)


def motion_active(s: KalmanState, cfg: MotionConfig) -> bool:
    """Motion cues are trusted only after tau_stab consecutive updates."""
    return s.consecutive_updates >= cfg.tau_stab


def kf_iou_score(predicted: BBox, candidates) -> list[float]:
    """Overlap of the predicted box with each candidate's tight mask box."""
    return [iou(predicted, c.bbox()) for c in candidates]
