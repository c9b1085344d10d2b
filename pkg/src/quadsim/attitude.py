"""Inner loop: PD roll/pitch reference generation and SMC attitude torques."""
from math import isfinite
from typing import NamedTuple

from .errors import NonFiniteCommand
from .params import AttitudeGains, QuadParams


def sat(v: float) -> float:
    """Unit saturation: the boundary-layer replacement for sign()."""
    if v <= -1.0:
        return -1.0
    if v >= 1.0:
        return 1.0
    return v


def state_list(est):
    """Accept an EkfBelief or any 12-sequence; return a list of floats."""
    xhat = getattr(est, "xhat", est)
    if type(xhat) is list:
        return xhat
    return xhat.tolist() if hasattr(xhat, "tolist") else [float(v) for v in xhat]


class AttitudeCommand(NamedTuple):
    phi_r: float = 0.0
    theta_r: float = 0.0
    psi_r: float = 0.0
    dphi_r: float = 0.0
    dtheta_r: float = 0.0
    dpsi_r: float = 0.0
    ddphi_r: float = 0.0
    ddtheta_r: float = 0.0
    ddpsi_r: float = 0.0


def reference_angles(est, ref, gains: AttitudeGains):
    """Roll/pitch references from the lateral position errors, clamped to
    +/- gains.max_tilt."""
    s = state_list(est)
    x, y, vx, vy = s[0], s[1], s[6], s[7]
    sign = 1.0 if gains.literal_pd_sign else -1.0
    phi_r = sign * gains.kpy * (ref.y_r - y) - gains.kdy * (ref.dy_r - vy)
    theta_r = sign * gains.kpx * (x - ref.x_r) - gains.kdx * (vx - ref.dx_r)
    lim = gains.max_tilt
    return min(lim, max(-lim, phi_r)), min(lim, max(-lim, theta_r))


class RefAngleDifferentiator:
    """Backward-difference first/second derivatives of the roll and pitch
    references. Both derivatives are zero until three samples are stored."""

    def __init__(self, ts: float):
        if not ts > 0:
            raise ValueError(f"sample time must be > 0, got {ts}")
        self.ts = ts
        self._hist = []

    def reset(self):
        self._hist.clear()

    def push(self, phi_r: float, theta_r: float):
        """Store a sample; return (dphi, dtheta, ddphi, ddtheta)."""
        h = self._hist
        h.append((phi_r, theta_r))
        if len(h) > 3:
            del h[0]
        if len(h) < 3:
            return 0.0, 0.0, 0.0, 0.0
        (p2, t2), (p1, t1), (p0, t0) = h
        ts = self.ts
        return ((p0 - p1) / ts, (t0 - t1) / ts,
                (p0 - 2.0 * p1 + p2) / (ts * ts), (t0 - 2.0 * t1 + t2) / (ts * ts))


def gyro_terms(s, p: QuadParams):
    """Drift terms f_phi, f_theta, f_psi of the rotational dynamics."""
    dph, dth, dps = s[9], s[10], s[11]
    return (dth * dps * (p.Iyy - p.Izz) / p.Ixx,
            dps * dph * (p.Izz - p.Ixx) / p.Iyy,
            dph * dth * (p.Ixx - p.Iyy) / p.Izz)


def _smc_axis(ang, rate, ang_r, rate_r, acc_r, c, K, f, inertia):
    s = c * (ang - ang_r) + (rate - rate_r)
    return inertia * (-c * ang - (c + 1.0) * rate + c * ang_r + (c + 1.0) * rate_r
                      - f - K * sat(s) + acc_r)


def attitude_surfaces(est, cmd: AttitudeCommand, gains: AttitudeGains):
    s = state_list(est)
    return (gains.c_phi * (s[3] - cmd.phi_r) + s[9] - cmd.dphi_r,
            gains.c_theta * (s[4] - cmd.theta_r) + s[10] - cmd.dtheta_r,
            gains.c_psi * (s[5] - cmd.psi_r) + s[11] - cmd.dpsi_r)


def attitude_torques(est, cmd: AttitudeCommand, p: QuadParams, gains: AttitudeGains):
    """(C1, C2, C3) from the roll/pitch/yaw sliding-mode laws.

    With b = 1/I, each law enforces ds/dt = -s - K*sat(s) on its surface
    s = c*(angle error) + (rate error).
    """
    s = state_list(est)
    f_phi, f_theta, f_psi = gyro_terms(s, p)
    C1 = _smc_axis(s[3], s[9], cmd.phi_r, cmd.dphi_r, cmd.ddphi_r,
                   gains.c_phi, gains.K_phi, f_phi, p.Ixx)
    C2 = _smc_axis(s[4], s[10], cmd.theta_r, cmd.dtheta_r, cmd.ddtheta_r,
                   gains.c_theta, gains.K_theta, f_theta, p.Iyy)
    C3 = _smc_axis(s[5], s[11], cmd.psi_r, cmd.dpsi_r, cmd.ddpsi_r,
                   gains.c_psi, gains.K_psi, f_psi, p.Izz)
    if not (isfinite(C1) and isfinite(C2) and isfinite(C3)):
        raise NonFiniteCommand(f"attitude torques ({C1}, {C2}, {C3})")
    return C1, C2, C3
