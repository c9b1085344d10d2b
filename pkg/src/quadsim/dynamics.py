"""Rigid-body quadrotor plant.

State ordering (12): x, y, z, phi, theta, psi, vx, vy, vz, dphi, dtheta, dpsi.
Body rates are identified with Euler-angle rates (small-angle kinematics) and
the rotor gyroscopic torque is neglected.
"""
from math import cos, sin, isfinite
from typing import NamedTuple

import numpy as np

from .errors import (InfeasibleCommand, NonFiniteInput, NonFiniteResult,
                     SingularAllocation)
from .params import QuadParams

STATE_NAMES = ("x", "y", "z", "phi", "theta", "psi",
               "vx", "vy", "vz", "dphi", "dtheta", "dpsi")
X, Y, Z, PHI, THETA, PSI, VX, VY, VZ, DPHI, DTHETA, DPSI = range(12)
NX = 12


class ControlInput(NamedTuple):
    Fz: float
    C1: float
    C2: float
    C3: float


def hover_input(p: QuadParams) -> ControlInput:
    return ControlInput(p.m * p.g, 0.0, 0.0, 0.0)


def _rhs(s, Fz, C1, C2, C3, p):
    # s is a plain list of floats; kept scalar for speed inside RK4
    _, _, _, ph, th, ps, vx, vy, vz, dph, dth, dps = s
    sph, cph = sin(ph), cos(ph)
    sth, cth = sin(th), cos(th)
    sps, cps = sin(ps), cos(ps)
    m = p.m
    return [
        vx, vy, vz, dph, dth, dps,
        ((sps * sph + cps * sth * cph) * Fz - p.Kdx * vx) / m,
        ((sps * sth * cph - cps * sph) * Fz - p.Kdy * vy) / m,
        (cth * cph * Fz - p.Kdz * vz) / m - p.g,
        (dth * dps * (p.Iyy - p.Izz) + C1) / p.Ixx,
        (dps * dph * (p.Izz - p.Ixx) + C2) / p.Iyy,
        (dph * dth * (p.Ixx - p.Iyy) + C3) / p.Izz,
    ]


def _check_finite(values, what, exc=NonFiniteInput):
    # nan/inf propagate through the sum
    if not isfinite(sum(values)):
        raise exc(f"non-finite {what}: {list(values)}")


def derivative(state, u, p: QuadParams) -> np.ndarray:
    s = np.asarray(state, dtype=float).tolist()
    u = [float(v) for v in u]
    _check_finite(s, "state")
    _check_finite(u, "input")
    return np.array(_rhs(s, *u, p))


def rk4_step(state, u, p: QuadParams, ts: float) -> np.ndarray:
    """Classical RK4 over one sample with the input held constant."""
    if not ts > 0:
        raise ValueError(f"sample time must be > 0, got {ts}")
    s = np.asarray(state, dtype=float).tolist()
    Fz, C1, C2, C3 = (float(v) for v in u)
    h2 = 0.5 * ts
    try:
        k1 = _rhs(s, Fz, C1, C2, C3, p)
        k2 = _rhs([a + h2 * b for a, b in zip(s, k1)], Fz, C1, C2, C3, p)
        k3 = _rhs([a + h2 * b for a, b in zip(s, k2)], Fz, C1, C2, C3, p)
        k4 = _rhs([a + ts * b for a, b in zip(s, k3)], Fz, C1, C2, C3, p)
    except (ValueError, OverflowError) as exc:
        # sin/cos of an infinite intermediate angle
        raise NonFiniteResult(f"RK4 stage overflowed: {exc}") from None
    h6 = ts / 6.0
    out = [a + h6 * (b1 + 2.0 * (b2 + b3) + b4)
           for a, b1, b2, b3, b4 in zip(s, k1, k2, k3, k4)]
    _check_finite(out, "RK4 result", NonFiniteResult)
    return np.array(out)


def allocation_matrix(p: QuadParams) -> np.ndarray:
    kt, kd, lk = p.kt, p.kd, p.l * p.kt
    return np.array([
        [kt, kt, kt, kt],
        [0.0, -lk, 0.0, lk],
        [-lk, 0.0, lk, 0.0],
        [-kd, kd, -kd, kd],
    ])


def mix(w, p: QuadParams) -> ControlInput:
    """Squared rotor speeds -> (Fz, C1, C2, C3)."""
    w1, w2, w3, w4 = (float(v) for v in w)
    if min(w1, w2, w3, w4) < 0:
        raise ValueError(f"squared rotor speeds must be >= 0, got {(w1, w2, w3, w4)}")
    lk = p.l * p.kt
    return ControlInput(
        p.kt * (w1 + w2 + w3 + w4),
        lk * (w4 - w2),
        lk * (w3 - w1),
        p.kd * (-w1 + w2 - w3 + w4),
    )


def unmix(u, p: QuadParams, tol: float = 1e-9) -> np.ndarray:
    """Exact inverse of :func:`mix`.

    Raises InfeasibleCommand when the wrench needs a negative squared speed
    (below ``-tol``); values in ``[-tol, 0]`` are clamped to zero.
    """
    if p.kt * p.kd * p.l == 0:
        raise SingularAllocation("kt, kd and l must all be nonzero")
    Fz, C1, C2, C3 = (float(v) for v in u)
    a = Fz / p.kt
    b = C1 / (p.l * p.kt)
    c = C2 / (p.l * p.kt)
    d = C3 / p.kd
    w = np.array([
        0.5 * (0.5 * (a - d) - c),
        0.5 * (0.5 * (a + d) - b),
        0.5 * (0.5 * (a - d) + c),
        0.5 * (0.5 * (a + d) + b),
    ])
    if np.any(w < -tol):
        raise InfeasibleCommand(f"wrench {tuple(u)} needs negative squared speeds {w}")
    return np.maximum(w, 0.0)


def perturb(values, cov_scale: float, rng: np.random.Generator) -> np.ndarray:
    """Add i.i.d. N(0, cov_scale) noise to every component."""
    if cov_scale < 0:
        raise ValueError(f"cov_scale must be >= 0, got {cov_scale}")
    values = np.asarray(values, dtype=float)
    if cov_scale == 0:
        return values.copy()
    return values + np.sqrt(cov_scale) * rng.standard_normal(values.shape)
