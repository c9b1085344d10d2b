"""Outer loop: hierarchical sliding-mode thrust laws.

One input (Fz) has to regulate three position errors. Each variant builds a
different composite surface from the errors e = estimate - reference:

* aggregated (AHSMC): pairwise surfaces s1..s3 layered as S1..S3
* incremental (IHSMC): one state appended per layer, s1..s5
* combining (CHSMC): a linear combination s, its rate part, and Sc = alpha*s + sdot

Each law enforces dS/dt = -K*S - eta*sat(S) on its top surface under the
control-affine model  accel_i = f_i + b_i * Fz.
"""
from math import copysign, cos, isfinite, sin

from .attitude import sat, state_list
from .errors import DegenerateDenominator, NonFiniteCommand
from .params import AhsmcGains, ChsmcGains, IhsmcGains, QuadParams

EPS_B_SCALE = 1e-2
DENOM_MIN = 1e-6


def fb_terms(est, p: QuadParams, eps_b_scale: float = EPS_B_SCALE):
    """Drift and input gains (f_x, f_y, f_z, b_x, b_y, b_z) at the estimate.

    b_x and b_y vanish at level attitude, so they get a sign-preserving floor
    |b| >= eps_b_scale/m (zero maps to +floor). b_z is left untouched.
    """
    s = state_list(est)
    ph, th, ps = s[3], s[4], s[5]
    sph, cph, sth, cth, sps, cps = sin(ph), cos(ph), sin(th), cos(th), sin(ps), cos(ps)
    m = p.m
    fx = -p.Kdx * s[6] / m
    fy = -p.Kdy * s[7] / m
    fz = -p.Kdz * s[8] / m - p.g
    bx = (sps * sph + cps * sth * cph) / m
    by = (sps * sth * cph - cps * sph) / m
    bz = cth * cph / m
    eps = eps_b_scale / m
    if abs(bx) < eps:
        bx = copysign(eps, bx)
    if abs(by) < eps:
        by = copysign(eps, by)
    return fx, fy, fz, bx, by, bz


def tracking_errors(est, ref):
    """(e1..e6) = position/velocity errors along x, y, z."""
    s = state_list(est)
    return (s[0] - ref.x_r, s[6] - ref.dx_r,
            s[1] - ref.y_r, s[7] - ref.dy_r,
            s[2] - ref.z_r, s[8] - ref.dz_r)


def _finite(Fz, name):
    if not isfinite(Fz):
        raise NonFiniteCommand(f"{name} thrust is {Fz}")
    return Fz


def ahsmc_thrust(est, ref, gains: AhsmcGains, p: QuadParams, eps_b_scale=EPS_B_SCALE):
    fx, fy, fz, bx, by, bz = fb_terms(est, p, eps_b_scale)
    e1, e2, e3, e4, e5, e6 = tracking_errors(est, ref)
    g = gains
    s1 = g.c1 * e1 + e2
    s2 = g.c2 * e3 + e4
    s3 = g.c3 * e5 + e6
    S1 = s1
    S2 = g.lambda1 * S1 + s2
    S3 = g.lambda2 * S2 + s3
    u_eqx = (-g.c1 * e2 + ref.ddx_r - fx) / bx
    u_eqy = (-g.c2 * e4 + ref.ddy_r - fy) / by
    u_eqz = (-g.c3 * e6 + ref.ddz_r - fz) / bz
    l12 = g.lambda1 * g.lambda2
    den = l12 * bx + g.lambda2 * by + bz
    if abs(den) <= DENOM_MIN:
        raise DegenerateDenominator(f"AHSMC denominator {den}")
    u_sw = -(l12 * bx * (u_eqy + u_eqz) + g.lambda2 * by * (u_eqx + u_eqz)
             + bz * (u_eqx + u_eqy) + g.K * S3 + g.eta * sat(S3)) / den
    Fz = _finite(u_eqx + u_eqy + u_eqz + u_sw, "AHSMC")
    diag = {"s1": s1, "s2": s2, "s3": s3, "S1": S1, "S2": S2, "S3": S3, "top": S3}
    return Fz, diag


def ihsmc_thrust(est, ref, gains: IhsmcGains, p: QuadParams, eps_b_scale=EPS_B_SCALE):
    fx, fy, fz, bx, by, bz = fb_terms(est, p, eps_b_scale)
    e1, e2, e3, e4, e5, e6 = tracking_errors(est, ref)
    g = gains
    s1 = g.c1 * e2 + e1
    s2 = g.c2 * e3 + s1
    s3 = g.c3 * e4 + s2
    s4 = g.c4 * e5 + s3
    s5 = g.c5 * e6 + s4
    den = g.c5 * bz + g.c3 * by + g.c1 * bx
    if abs(den) <= DENOM_MIN:
        raise DegenerateDenominator(f"IHSMC denominator {den}")
    u_eq = -(g.c5 * fz + g.c3 * fy + g.c1 * fx + g.c4 * e6 + g.c2 * e4 + e2
             - g.c5 * ref.ddz_r - g.c3 * ref.ddy_r - g.c1 * ref.ddx_r) / den
    u_sw = -(g.K * s5 + g.eta * sat(s5)) / den
    Fz = _finite(u_eq + u_sw, "IHSMC")
    diag = {"s1": s1, "s2": s2, "s3": s3, "s4": s4, "s5": s5, "top": s5}
    return Fz, diag


def chsmc_thrust(est, ref, gains: ChsmcGains, p: QuadParams, eps_b_scale=EPS_B_SCALE):
    fx, fy, fz, bx, by, bz = fb_terms(est, p, eps_b_scale)
    e1, e2, e3, e4, e5, e6 = tracking_errors(est, ref)
    g = gains
    s = g.c1 * e1 + g.c2 * e3 + g.c3 * e5
    sdot = g.c1 * e2 + g.c2 * e4 + g.c3 * e6
    Sc = g.alpha * s + sdot
    den = g.c1 * bx + g.c2 * by + g.c3 * bz
    if abs(den) <= DENOM_MIN:
        raise DegenerateDenominator(f"CHSMC denominator {den}")
    u_eq = -(g.c1 * fx + g.c2 * fy + g.c3 * fz
             - g.c1 * ref.ddx_r - g.c2 * ref.ddy_r - g.c3 * ref.ddz_r
             + g.alpha * sdot) / den
    u_sw = -(g.K * Sc + g.eta * sat(Sc)) / den
    Fz = _finite(u_eq + u_sw, "CHSMC")
    return Fz, {"s": s, "sdot": sdot, "Sc": Sc, "top": Sc}


THRUST_LAWS = {
    "ahsmc": ahsmc_thrust,
    "ihsmc": ihsmc_thrust,
    "chsmc": chsmc_thrust,
}
