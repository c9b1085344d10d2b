"""Closed-loop runs: measure, filter, control, actuate, log."""
from dataclasses import dataclass, field, replace
import logging
from math import isfinite, pi, sqrt
from typing import Callable, Optional

import numpy as np

from . import ekf
from .attitude import (AttitudeCommand, RefAngleDifferentiator, attitude_torques,
                       reference_angles)
from .baselines import accel_estimate, pid_controls, sosmc_controls
from .dynamics import NX, STATE_NAMES, ControlInput, rk4_step
from .errors import DivergedRun, EmptyWindow, NonFiniteResult, QuadSimError
from .params import (AhsmcGains, AttitudeGains, ChsmcGains, IhsmcGains, NoiseConfig,
                     PidGains, QuadParams, SoSmcGains)
from .position import EPS_B_SCALE, THRUST_LAWS
from .scenarios import ScenarioSpec, get_scenario, reference_at

log = logging.getLogger(__name__)

CONTROLLERS = ("ahsmc", "ihsmc", "chsmc", "pid", "sosmc")
DIVERGENCE_LIMIT = 1e6

TRUE_COLUMNS = STATE_NAMES[:9] + ("dphi", "dtheta", "dpsi")
EST_COLUMNS = ("xh", "yh", "zh", "phih", "thetah", "psih",
               "vxh", "vyh", "vzh", "dphih", "dthetah", "dpsih")
REF_COLUMNS = ("xr", "yr", "zr", "psir")
CMD_COLUMNS = ("Fz", "C1", "C2", "C3")
COLUMNS = ("t",) + TRUE_COLUMNS + EST_COLUMNS + REF_COLUMNS + CMD_COLUMNS + ("S_top",)


@dataclass(frozen=True)
class GainSet:
    attitude: AttitudeGains = AttitudeGains()
    ahsmc: AhsmcGains = AhsmcGains()
    ihsmc: IhsmcGains = IhsmcGains()
    chsmc: ChsmcGains = ChsmcGains()
    pid: PidGains = PidGains()
    sosmc: SoSmcGains = SoSmcGains()
    eps_b_scale: float = EPS_B_SCALE


@dataclass(frozen=True)
class RunConfig:
    controller: str = "ahsmc"
    ts: float = 0.01
    seed: int = 42
    noise: bool = True
    ekf_mode: str = "standard"
    duration: Optional[float] = None  # None -> scenario duration
    noise_cfg: NoiseConfig = NoiseConfig()
    gains: GainSet = GainSet()
    p0: float = 1e-2

    def __post_init__(self):
        if self.controller not in CONTROLLERS:
            raise ValueError(f"controller must be one of {CONTROLLERS}, got {self.controller!r}")
        if not self.ts > 0:
            raise ValueError(f"ts must be > 0, got {self.ts}")
        if self.ekf_mode not in ekf.MODES:
            raise ValueError(f"ekf_mode must be one of {ekf.MODES}, got {self.ekf_mode!r}")
        if self.duration is not None and not self.duration > 0:
            raise ValueError(f"duration must be > 0, got {self.duration}")


@dataclass(eq=False)
class TimeSeriesLog:
    """One row per sample; columns follow COLUMNS. ``extras`` holds
    run-side data that is not part of the CSV (measurements, diagnostics)."""

    data: np.ndarray
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float).reshape(-1, len(COLUMNS))

    def __len__(self):
        return self.data.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesLog):
            return NotImplemented
        return np.array_equal(self.data, other.data, equal_nan=True)

    def column(self, name):
        return self.data[:, COLUMNS.index(name)]

    @property
    def t(self):
        return self.data[:, 0]

    @property
    def true_states(self):
        return self.data[:, 1:13]

    @property
    def estimates(self):
        return self.data[:, 13:25]

    @property
    def references(self):
        return self.data[:, 25:29]

    @property
    def commands(self):
        return self.data[:, 29:33]

    @property
    def s_top(self):
        return self.data[:, 33]


class Autopilot:
    """Stateful per-run controller: PD reference generation with its
    derivative history, then the selected thrust/torque laws.

    The SO-SMC acceleration estimate uses the previous thrust; the first
    sample assumes hover thrust.
    """

    def __init__(self, cfg: RunConfig, params: QuadParams):
        self.cfg = cfg
        self.p = params
        self.gains = cfg.gains
        self.diff = RefAngleDifferentiator(cfg.ts)
        self.Fz_prev = params.m * params.g

    def __call__(self, xhat, ref):
        """Return (ControlInput, top sliding surface) for one sample."""
        s = xhat if type(xhat) is list else np.asarray(xhat, dtype=float).tolist()
        g = self.gains
        phi_r, theta_r = reference_angles(s, ref, g.attitude)
        dphi, dtheta, ddphi, ddtheta = self.diff.push(phi_r, theta_r)
        cmd = AttitudeCommand(phi_r, theta_r, ref.psi_r, dphi, dtheta, ref.dpsi_r,
                              ddphi, ddtheta, ref.ddpsi_r)
        name = self.cfg.controller
        if name == "pid":
            u = pid_controls(s, ref, cmd, g.pid, self.p)
            top = float("nan")
        elif name == "sosmc":
            acc = accel_estimate(s, self.Fz_prev, self.p)
            u, surfaces = sosmc_controls(s, ref, cmd, acc, g.sosmc, self.p)
            top = surfaces[0]
        else:
            Fz, diag = THRUST_LAWS[name](s, ref, getattr(g, name), self.p, g.eps_b_scale)
            u = ControlInput(Fz, *attitude_torques(s, cmd, self.p, g.attitude))
            top = diag["top"]
        self.Fz_prev = u.Fz
        return u, top


def _n_steps(duration, ts):
    n = int(round(duration / ts))
    if abs(n * ts - duration) > 1e-9 * max(1.0, duration):
        raise ValueError(f"duration {duration} is not a multiple of ts {ts}")
    return n


def run_closed_loop(cfg: RunConfig, spec: Optional[ScenarioSpec] = None,
                    params: Optional[QuadParams] = None, scenario: int = 1,
                    observer: Optional[Callable] = None) -> TimeSeriesLog:
    """Simulate one closed-loop run from rest at the origin.

    Per sample k: measure (true state + N(0, r) noise when enabled), filter
    with the previous command, compute the command, log the row, then advance
    the plant one RK4 step and add N(0, q) process noise. ``observer`` is
    called as observer(k, belief) after each filter update.
    """
    spec = spec if spec is not None else get_scenario(scenario)
    p = params if params is not None else QuadParams()
    duration = cfg.duration if cfg.duration is not None else spec.duration
    n = _n_steps(duration, cfg.ts)
    ts = cfg.ts
    nc = cfg.noise_cfg

    ss = np.random.SeedSequence(cfg.seed)
    meas_rng, proc_rng = (np.random.default_rng(s) for s in ss.spawn(2))
    if cfg.noise:
        meas_noise = sqrt(nc.r_scalar) * meas_rng.standard_normal((n + 1, NX))
        proc_noise = sqrt(nc.q_scalar) * proc_rng.standard_normal((n, NX))
    else:
        meas_noise = np.zeros((n + 1, NX))
        proc_noise = np.zeros((n, NX))

    data = np.empty((n + 1, len(COLUMNS)))
    measurements = np.empty((n + 1, NX))
    monitor = ekf.BoundednessMonitor()
    pilot = Autopilot(cfg, p)
    x = np.zeros(NX)
    belief = None
    u = None
    attitude_events = 0

    for k in range(n + 1):
        t = k * ts
        try:
            y = x + meas_noise[k]
            measurements[k] = y
            if belief is None:
                belief = ekf.initial_belief(y, cfg.p0)
            else:
                belief = ekf.step(belief, u, y, p, ts, nc, cfg.ekf_mode)
                monitor.record(belief.A, belief.P, k)
            if observer is not None:
                observer(k, belief)
            ref = reference_at(t, spec)
            xhat = belief.xhat.tolist()
            u, top = pilot(xhat, ref)
            row = data[k]
            row[0] = t
            row[1:13] = x
            row[13:25] = xhat
            row[25:29] = (ref.x_r, ref.y_r, ref.z_r, ref.psi_r)
            row[29:33] = u
            row[33] = top
            if k == n:
                break
            try:
                x = rk4_step(x, u, p, ts)
            except NonFiniteResult as exc:
                raise DivergedRun(f"plant state became non-finite: {exc}") from exc
            x += proc_noise[k]
            peak = np.abs(x).max()
            if not isfinite(peak) or peak > DIVERGENCE_LIMIT:
                raise DivergedRun(f"state magnitude {peak:.3g} exceeds {DIVERGENCE_LIMIT:g}")
            if abs(x[3]) >= pi / 2 or abs(x[4]) >= pi / 2:
                attitude_events += 1
                if attitude_events == 1:
                    log.warning("tilt beyond pi/2 at t=%.2f (phi=%.3f, theta=%.3f)", t, x[3], x[4])
        except QuadSimError as exc:
            if exc.step is None:
                exc.step = k
            raise

    extras = {
        "measurements": measurements,
        "a_norms": np.array(monitor.a_norms),
        "p_norms": np.array(monitor.p_norms),
        "boundedness_violations": monitor.violations,
        "attitude_events": attitude_events,
        "config": cfg,
        "scenario": spec.id,
        "params": p,
    }
    return TimeSeriesLog(data, extras)


def replay_commands(log_: TimeSeriesLog, cfg: RunConfig, spec: ScenarioSpec,
                    params: Optional[QuadParams] = None) -> np.ndarray:
    """Recompute the command columns from the logged estimates."""
    p = params if params is not None else QuadParams()
    pilot = Autopilot(cfg, p)
    out = np.empty((len(log_), 4))
    for k, (t, xhat) in enumerate(zip(log_.t, log_.estimates)):
        u, _ = pilot(xhat.tolist(), reference_at(t, spec))
        out[k] = u
    return out


def metrics(log_: TimeSeriesLog, window=None, params: Optional[QuadParams] = None) -> dict:
    """Tracking and estimation metrics over rows with t in [t0, t1]."""
    p = params if params is not None else log_.extras.get("params", QuadParams())
    t = log_.t
    if window is None:
        mask = np.ones(len(t), dtype=bool)
    else:
        t0, t1 = window
        mask = (t >= t0 - 1e-9) & (t <= t1 + 1e-9)
    if not mask.any():
        raise EmptyWindow(f"no samples in window {window}")
    true = log_.true_states[mask]
    est = log_.estimates[mask]
    ref = log_.references[mask]
    err = true[:, :3] - ref[:, :3]
    est_err = est[:, :3] - true[:, :3]
    rms = lambda a: np.sqrt(np.mean(a ** 2, axis=0))
    out = {
        "rmse": dict(zip("xyz", rms(err).tolist())),
        "max_abs": dict(zip("xyz", np.abs(err).max(axis=0).tolist())),
        "est_rmse": dict(zip("xyz", rms(est_err).tolist())),
        "psi_rmse": float(rms(true[:, 5] - ref[:, 3])),
        "mean_abs_dFz": float(np.mean(np.abs(log_.commands[mask, 0] - p.m * p.g))),
        "surface_rms": float(rms(log_.s_top[mask])),
    }
    meas = log_.extras.get("measurements")
    if meas is not None and len(meas) == len(t):
        out["meas_rmse"] = dict(zip("xyz", rms(meas[mask, :3] - true[:, :3]).tolist()))
    return out


def with_controller(cfg: RunConfig, controller: str) -> RunConfig:
    return replace(cfg, controller=controller)
