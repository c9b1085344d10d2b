"""Discrete-time extended Kalman filter over the full 12-state.

The measurement model is the identity (every state is measured), so the
update reduces to K = P-(P- + R)^-1.

Two propagation modes:

``standard``
    mean through one RK4 step of the nonlinear plant, covariance through the
    discrete transition F = I + A*Ts.
``paper_literal``
    mean increment A*xhat*Ts + B*u*Ts and covariance A*P*A^T + Q with the
    continuous Jacobian, exactly as printed. Drops the affine residue of the
    model (gravity included), so the altitude prior is biased.
"""
from dataclasses import dataclass
from typing import Optional
import logging
from math import isfinite, sqrt

import numpy as np

from .dynamics import NX, rk4_step
from .errors import NonFiniteState, SingularInnovation
from .linearize import _jacobian_A_fast, jacobian_A, jacobian_B
from .params import NoiseConfig, QuadParams

log = logging.getLogger(__name__)

MODES = ("standard", "paper_literal")
_I = np.eye(NX)
COND_LIMIT = 1e12


@dataclass(frozen=True)
class EkfBelief:
    """Estimate and error covariance. ``A`` is the continuous Jacobian used by
    the propagation that produced this belief (None for a fresh belief)."""

    xhat: np.ndarray
    P: np.ndarray
    A: Optional[np.ndarray] = None


def initial_belief(y, p0: float = 1e-2) -> EkfBelief:
    """Seed the filter with the first measurement."""
    return EkfBelief(np.array(y, dtype=float), p0 * np.eye(NX))


def _symmetrize(P):
    return 0.5 * (P + P.T)


def predict(belief: EkfBelief, u, p: QuadParams, ts: float, noise: NoiseConfig,
            mode: str = "standard") -> EkfBelief:
    if not ts > 0:
        raise ValueError(f"sample time must be > 0, got {ts}")
    A = _jacobian_A_fast(belief.xhat, p)
    if mode == "standard":
        x = rk4_step(belief.xhat, u, p, ts)
        F = _I + ts * A
        P = F @ belief.P @ F.T
    elif mode == "paper_literal":
        B = jacobian_B(belief.xhat, u, p)
        x = belief.xhat + ts * (A @ belief.xhat + B @ np.asarray(u, dtype=float))
        P = A @ belief.P @ A.T
    else:
        raise ValueError(f"unknown EKF mode {mode!r}; expected one of {MODES}")
    if noise.q_scalar:
        P.flat[::NX + 1] += noise.q_scalar
    # an overflow anywhere in P shows up on its diagonal
    if not (np.isfinite(x).all() and isfinite(P.trace())):
        raise NonFiniteState("EKF prediction diverged")
    return EkfBelief(x, _symmetrize(P), A)


def update(prior: EkfBelief, y, noise: NoiseConfig) -> EkfBelief:
    S = prior.P + noise.r_scalar * _I
    try:
        S_inv = np.linalg.inv(S)
    except np.linalg.LinAlgError as exc:
        raise SingularInnovation("innovation covariance is singular") from exc
    # for SPD S, tr(S)*tr(S^-1) bounds cond2(S) from above within a factor n^2
    cond = S.trace() * S_inv.trace()
    if not 0 < cond < COND_LIMIT:
        raise SingularInnovation(f"innovation covariance condition bound {cond:.3g} "
                                 f"outside (0, {COND_LIMIT:g})")
    K = prior.P @ S_inv
    P = (_I - K) @ prior.P
    x = prior.xhat + K @ (np.asarray(y, dtype=float) - prior.xhat)
    # a finite condition estimate guarantees finite K and P here
    if not np.isfinite(x).all():
        raise NonFiniteState("EKF update produced non-finite values")
    return EkfBelief(x, _symmetrize(P), prior.A)


def gain(prior: EkfBelief, noise: NoiseConfig) -> np.ndarray:
    return prior.P @ np.linalg.inv(prior.P + noise.r_scalar * _I)


def step(belief: EkfBelief, u, y, p: QuadParams, ts: float, noise: NoiseConfig,
         mode: str = "standard") -> EkfBelief:
    return update(predict(belief, u, p, ts, noise, mode), y, noise)


class BoundednessMonitor:
    """Records ||A_k|| and ||P_k|| and logs (never raises) when they leave
    the bounds the observer convergence argument assumes."""

    def __init__(self, a_max=1e3, p_min=1e-12, p_max=1e2):
        self.a_max = a_max
        self.p_min = p_min
        self.p_max = p_max
        self.a_norms = []
        self.p_norms = []
        self.violations = 0

    def record(self, A, P, step=None):
        a = A.ravel()
        a = sqrt(float(a @ a))
        pn = P.ravel()
        pn = sqrt(float(pn @ pn))
        self.a_norms.append(a)
        self.p_norms.append(pn)
        if a > self.a_max or not self.p_min <= pn <= self.p_max:
            self.violations += 1
            if self.violations <= 5:
                log.warning("EKF boundedness violated at step %s: |A|=%.3g |P|=%.3g",
                            step, a, pn)
