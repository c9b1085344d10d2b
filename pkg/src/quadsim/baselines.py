"""Comparison controllers: PD thrust/attitude (PID with zero integral gain)
and a second-order sliding-mode law with model disturbance terms."""
from math import cos, isfinite, sin

from .attitude import AttitudeCommand, sat, state_list
from .dynamics import ControlInput
from .errors import AttitudeSingular, NonFiniteCommand
from .params import PidGains, QuadParams, SoSmcGains

COS_GUARD = 0.1


def _check(u: ControlInput, name):
    if not all(isfinite(v) for v in u):
        raise NonFiniteCommand(f"{name} command {tuple(u)}")
    return u


def pid_controls(est, ref, cmd: AttitudeCommand, gains: PidGains, p: QuadParams) -> ControlInput:
    """Printed PD laws; no tilt compensation on the thrust."""
    s = state_list(est)
    g = gains
    Fz = g.kpz * (ref.z_r - s[2]) + g.kdz * (ref.dz_r - s[8]) + p.m * p.g
    C1 = g.kp_phi * (cmd.phi_r - s[3]) + g.kd_phi * (cmd.dphi_r - s[9])
    C2 = g.kp_theta * (cmd.theta_r - s[4]) + g.kd_theta * (cmd.dtheta_r - s[10])
    C3 = g.kp_psi * (cmd.psi_r - s[5]) + g.kd_psi * (cmd.dpsi_r - s[11])
    return _check(ControlInput(Fz, C1, C2, C3), "PID")


def accel_estimate(est, Fz_prev: float, p: QuadParams):
    """Model translational accelerations at the estimate under the previous
    thrust (the filter does not estimate accelerations)."""
    s = state_list(est)
    ph, th, ps = s[3], s[4], s[5]
    sph, cph, sth, cth, sps, cps = sin(ph), cos(ph), sin(th), cos(th), sin(ps), cos(ps)
    m = p.m
    return (((sps * sph + cps * sth * cph) * Fz_prev - p.Kdx * s[6]) / m,
            ((sps * sth * cph - cps * sph) * Fz_prev - p.Kdy * s[7]) / m,
            (cth * cph * Fz_prev - p.Kdz * s[8]) / m - p.g)


def _sign(v):
    return (v > 0) - (v < 0)


def sosmc_surfaces(est, ref, cmd: AttitudeCommand, gains: SoSmcGains):
    s = state_list(est)
    g = gains
    s1 = g.c_z * (ref.z_r - s[2]) + (ref.dz_r - s[8])
    s2 = (g.c1 * (ref.dy_r - s[7]) + g.c2 * (ref.y_r - s[1])
          + g.c3 * (cmd.dphi_r - s[9]) + g.c4 * (cmd.phi_r - s[3]))
    s3 = (g.c5 * (ref.dx_r - s[6]) + g.c6 * (ref.x_r - s[0])
          + g.c7 * (cmd.dtheta_r - s[10]) + g.c8 * (cmd.theta_r - s[4]))
    s4 = g.c_psi * (cmd.psi_r - s[5]) + (cmd.dpsi_r - s[11])
    return s1, s2, s3, s4


def sosmc_controls(est, ref, cmd: AttitudeCommand, accel_est, gains: SoSmcGains,
                   p: QuadParams):
    """Second-order SMC laws. Returns (ControlInput, (s1, s2, s3, s4)).

    The switching terms use sat() unless ``gains.hard_sign`` is set; outside
    the unit boundary layer both coincide.
    """
    s = state_list(est)
    g = gains
    sw = _sign if g.hard_sign else sat
    ddx_hat, ddy_hat = accel_est[0], accel_est[1]
    dph, dth, dps = s[9], s[10], s[11]
    d1 = p.Kdz * s[8] / p.m
    d2 = -dth * dps * (p.Iyy - p.Izz) / p.Ixx
    d3 = -dps * dph * (p.Izz - p.Ixx) / p.Iyy
    d4 = -dph * dth * (p.Ixx - p.Iyy) / p.Izz
    s1, s2, s3, s4 = sosmc_surfaces(s, ref, cmd, g)
    tilt = cos(s[3]) * cos(s[4])
    if abs(tilt) <= COS_GUARD:
        raise AttitudeSingular(f"cos(phi)cos(theta) = {tilt}")
    Fz = p.m * (g.c_z * (ref.dz_r - s[8]) + ref.ddz_r + p.g + d1
                + g.eps1 * sw(s1) + g.eta1 * s1) / tilt
    C1 = p.Ixx * (g.c1 / g.c3 * (ref.ddy_r - ddy_hat) + g.c2 / g.c3 * (ref.dy_r - s[7])
                  + cmd.ddphi_r + d2 + g.c4 / g.c3 * (cmd.dphi_r - dph)
                  + (g.eps2 * sw(s2) + g.eta2 * s2) / g.c3)
    C2 = p.Iyy * (g.c5 / g.c7 * (ref.ddx_r - ddx_hat) + g.c6 / g.c7 * (ref.dx_r - s[6])
                  + cmd.ddtheta_r + d3 + g.c8 / g.c7 * (cmd.dtheta_r - dth)
                  + (g.eps3 * sw(s3) + g.eta3 * s3) / g.c7)
    C3 = p.Izz * (g.c_psi * (cmd.dpsi_r - dps) + cmd.ddpsi_r + d4
                  + g.eps4 * sw(s4) + g.eta4 * s4)
    return _check(ControlInput(Fz, C1, C2, C3), "SO-SMC"), (s1, s2, s3, s4)
