"""Analytic Jacobians of the plant about an operating point.

``jacobian_A`` follows the published block form: it is the Jacobian of the
drift field (the plant with zero input), so the attitude dependence of the
thrust projection lives only in ``B``. Pass ``attitude_coupling=True`` to add
the d(accel)/d(angle) terms that the full Jacobian at nonzero thrust carries.
"""
from math import cos, sin

import numpy as np

from .dynamics import NX, _check_finite
from .params import QuadParams

_A_TEMPLATE = np.zeros((NX, NX))
_A_TEMPLATE[:6, 6:] = np.eye(6)


def jacobian_A(state, u, p: QuadParams, attitude_coupling: bool = False) -> np.ndarray:
    s = np.asarray(state, dtype=float).tolist()
    _check_finite(s, "state")
    _check_finite([float(v) for v in u], "input")
    A = _jacobian_A_fast(s, p)
    if attitude_coupling:
        A[6:9, 3:6] = _thrust_attitude_block(s[3], s[4], s[5], float(u[0]), p.m)
    return A


def _jacobian_A_fast(s, p):
    # unchecked core of jacobian_A; only the angular rates matter
    dph, dth, dps = s[9], s[10], s[11]
    kx = (p.Iyy - p.Izz) / p.Ixx
    ky = (p.Izz - p.Ixx) / p.Iyy
    kz = (p.Ixx - p.Iyy) / p.Izz
    A = _A_TEMPLATE.copy()
    A[6, 6] = -p.Kdx / p.m
    A[7, 7] = -p.Kdy / p.m
    A[8, 8] = -p.Kdz / p.m
    A[9, 10] = dps * kx
    A[9, 11] = dth * kx
    A[10, 9] = dps * ky
    A[10, 11] = dph * ky
    A[11, 9] = dth * kz
    A[11, 10] = dph * kz
    return A


def _thrust_attitude_block(ph, th, ps, Fz, m):
    sph, cph, sth, cth, sps, cps = sin(ph), cos(ph), sin(th), cos(th), sin(ps), cos(ps)
    k = Fz / m
    return k * np.array([
        [sps * cph - cps * sth * sph, cps * cth * cph, cps * sph - sps * sth * cph],
        [-sps * sth * sph - cps * cph, sps * cth * cph, cps * sth * cph + sps * sph],
        [-cth * sph, -sth * cph, 0.0],
    ])


def jacobian_B(state, u, p: QuadParams) -> np.ndarray:
    s = np.asarray(state, dtype=float).tolist()
    _check_finite(s, "state")
    _check_finite([float(v) for v in u], "input")
    ph, th, ps = s[3], s[4], s[5]
    sph, cph, sth, cth, sps, cps = sin(ph), cos(ph), sin(th), cos(th), sin(ps), cos(ps)
    B = np.zeros((NX, 4))
    B[6, 0] = (sph * sps + cph * cps * sth) / p.m
    B[7, 0] = (cph * sps * sth - cps * sph) / p.m
    B[8, 0] = cph * cth / p.m
    B[9, 1] = 1.0 / p.Ixx
    B[10, 2] = 1.0 / p.Iyy
    B[11, 3] = 1.0 / p.Izz
    return B
