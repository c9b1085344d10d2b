"""Fast invariant suite behind ``quadsim check``.

Every check draws its own random states from a fixed seed, so results are
reproducible. Each returns a CheckResult; ``run_all`` runs the lot.
"""
from dataclasses import dataclass

import numpy as np

from .attitude import AttitudeCommand, attitude_torques, attitude_surfaces, sat
from .dynamics import NX, derivative, mix, unmix
from .linearize import jacobian_A, jacobian_B
from .params import AhsmcGains, AttitudeGains, ChsmcGains, IhsmcGains, QuadParams
from .position import EPS_B_SCALE, THRUST_LAWS, fb_terms
from .scenarios import Reference

FD_STEP = 1e-6
JACOBIAN_TOL = 1e-5
IDENTITY_TOL = 1e-9
ROUND_TRIP_TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name:<28} worst={self.worst:.3e}  tol={self.tol:.0e}"


def random_state(rng, n=None):
    """Bounded states: |pos| <= 10, |angles| <= 1, |vel| <= 5, |rates| <= 3."""
    scale = np.array([10, 10, 10, 1, 1, 1, 5, 5, 5, 3, 3, 3], dtype=float)
    shape = (NX,) if n is None else (n, NX)
    return rng.uniform(-1.0, 1.0, shape) * scale


def random_input(rng):
    return np.array([rng.uniform(0.0, 40.0), *rng.uniform(-0.1, 0.1, 3)])


def random_reference(rng):
    v = rng.uniform(-1.0, 1.0, 12) * [10, 10, 10, 1, 2, 2, 2, 0.5, 1, 1, 1, 0.2]
    return Reference(*v.tolist())


def fd_jacobians(state, u, p, h=FD_STEP):
    """Central differences of the plant derivative w.r.t. state and input."""
    state = np.asarray(state, dtype=float)
    u = np.asarray(u, dtype=float)
    A = np.empty((NX, NX))
    B = np.empty((NX, 4))
    for j in range(NX):
        d = np.zeros(NX)
        d[j] = h
        A[:, j] = (derivative(state + d, u, p) - derivative(state - d, u, p)) / (2 * h)
    for j in range(4):
        d = np.zeros(4)
        d[j] = h
        B[:, j] = (derivative(state, u + d, p) - derivative(state, u - d, p)) / (2 * h)
    return A, B


def mixed_error(analytic, numeric):
    """Entrywise error, relative where |numeric| > 1 and absolute below."""
    return float(np.max(np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1.0)))


def check_jacobians(n=1000, seed=0, p=QuadParams()):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for state in random_state(rng, n):
        u = random_input(rng)
        A_fd, B_fd = fd_jacobians(state, u, p)
        worst = max(worst,
                    mixed_error(jacobian_A(state, u, p, attitude_coupling=True), A_fd),
                    mixed_error(jacobian_B(state, u, p), B_fd))
        # without the coupling block, A is the Jacobian of the unforced field
        A0_fd, _ = fd_jacobians(state, np.zeros(4), p)
        worst = max(worst, mixed_error(jacobian_A(state, u, p), A0_fd))
    return CheckResult("jacobian finite difference", worst < JACOBIAN_TOL, worst, JACOBIAN_TOL)


def surface_weights(name, gains):
    """Top surface as a weight vector over (e1..e6) = (ex, dex, ey, dey, ez, dez)."""
    g = gains
    if name == "ahsmc":
        l12 = g.lambda1 * g.lambda2
        return (l12 * g.c1, l12, g.lambda2 * g.c2, g.lambda2, g.c3, 1.0)
    if name == "ihsmc":
        return (1.0, g.c1, g.c2, g.c3, g.c4, g.c5)
    if name == "chsmc":
        return (g.alpha * g.c1, g.c1, g.alpha * g.c2, g.c2, g.alpha * g.c3, g.c3)
    raise ValueError(f"no hierarchical surface for {name!r}")


def top_surface_rate(name, gains, est, ref, Fz, p, eps_b_scale=EPS_B_SCALE):
    """dS/dt of the top surface when accel = f + b*Fz (b as floored by the law)."""
    fx, fy, fz, bx, by, bz = fb_terms(est, p, eps_b_scale)
    e = [est[0] - ref.x_r, est[6] - ref.dx_r, est[1] - ref.y_r,
         est[7] - ref.dy_r, est[2] - ref.z_r, est[8] - ref.dz_r]
    edot = [e[1], fx + bx * Fz - ref.ddx_r,
            e[3], fy + by * Fz - ref.ddy_r,
            e[5], fz + bz * Fz - ref.ddz_r]
    w = surface_weights(name, gains)
    S = sum(wi * ei for wi, ei in zip(w, e))
    Sdot = sum(wi * ei for wi, ei in zip(w, edot))
    return S, Sdot


GAIN_DEFAULTS = {"ahsmc": AhsmcGains(), "ihsmc": IhsmcGains(), "chsmc": ChsmcGains()}


def check_position_reaching(name, n=1000, seed=1, p=QuadParams(), gains=None):
    gains = gains if gains is not None else GAIN_DEFAULTS[name]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for state in random_state(rng, n):
        est = state.tolist()
        ref = random_reference(rng)
        Fz, diag = THRUST_LAWS[name](est, ref, gains, p)
        S, Sdot = top_surface_rate(name, gains, est, ref, Fz, p)
        target = -gains.K * S - gains.eta * sat(S)
        worst = max(worst, abs(Sdot - target) / max(1.0, abs(target)),
                    abs(S - diag["top"]) / max(1.0, abs(S)))
    return CheckResult(f"{name} reaching law", worst < IDENTITY_TOL, worst, IDENTITY_TOL)


def check_attitude_reaching(n=1000, seed=2, p=QuadParams(), gains=AttitudeGains()):
    """ds/dt = -s - K*sat(s) per axis, with angular accelerations from the plant."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    Ks = (gains.K_phi, gains.K_theta, gains.K_psi)
    cs = (gains.c_phi, gains.c_theta, gains.c_psi)
    for state in random_state(rng, n):
        est = state.tolist()
        cmd = AttitudeCommand(*(rng.uniform(-1.0, 1.0, 9) * [0.5, 0.5, 1, 1, 1, 1, 5, 5, 5]))
        C = attitude_torques(est, cmd, p, gains)
        acc = derivative(state, (p.m * p.g, *C), p)[9:12]
        s_vals = attitude_surfaces(est, cmd, gains)
        angles = ((cmd.phi_r, cmd.dphi_r, cmd.ddphi_r),
                  (cmd.theta_r, cmd.dtheta_r, cmd.ddtheta_r),
                  (cmd.psi_r, cmd.dpsi_r, cmd.ddpsi_r))
        for i, (ang_r, rate_r, acc_r) in enumerate(angles):
            sdot = cs[i] * (est[9 + i] - rate_r) + acc[i] - acc_r
            target = -s_vals[i] - Ks[i] * sat(s_vals[i])
            worst = max(worst, abs(sdot - target) / max(1.0, abs(target)))
    return CheckResult("attitude reaching law", worst < IDENTITY_TOL, worst, IDENTITY_TOL)


SAT_TABLE = ((-5.0, -1.0), (-1.0, -1.0), (-0.5, -0.5), (0.0, 0.0),
             (0.25, 0.25), (1.0, 1.0), (7.0, 1.0))


def check_sat_table():
    worst = max(abs(sat(v) - want) for v, want in SAT_TABLE)
    return CheckResult("sat table", worst == 0.0, worst, 0.0)


def check_mixing(n=1000, seed=3, p=QuadParams()):
    """unmix(mix(w)) == w (relative to the largest speed) and equal speeds
    produce no torque."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for w in rng.uniform(0.0, 1e6, (n, 4)):
        back = unmix(mix(w, p), p)
        worst = max(worst, float(np.max(np.abs(back - w))) / max(1.0, float(w.max())))
    for v in (0.0, 1.0, 12345.678, 9.9e5):
        u = mix([v] * 4, p)
        if (u.C1, u.C2, u.C3) != (0.0, 0.0, 0.0):
            worst = float("inf")
    return CheckResult("mixing round trip", worst < ROUND_TRIP_TOL, worst, ROUND_TRIP_TOL)


def hover_is_equilibrium(p=QuadParams()):
    s = np.zeros(NX)
    return float(np.abs(derivative(s, (p.m * p.g, 0.0, 0.0, 0.0), p)).max())


def run_all(n=1000):
    results = [check_jacobians(n)]
    results += [check_position_reaching(name, n) for name in ("ahsmc", "ihsmc", "chsmc")]
    results += [check_attitude_reaching(n), check_sat_table(), check_mixing(n)]
    worst = hover_is_equilibrium()
    results.append(CheckResult("hover equilibrium", worst < 1e-12, worst, 1e-12))
    return results
