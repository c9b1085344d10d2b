"""Quadrotor simulation with EKF state estimation and hierarchical
sliding-mode position control."""
from .dynamics import ControlInput, derivative, mix, perturb, rk4_step, unmix
from .ekf import EkfBelief
from .harness import RunConfig, TimeSeriesLog, metrics, run_closed_loop
from .params import (AhsmcGains, AttitudeGains, ChsmcGains, IhsmcGains, NoiseConfig,
                     PidGains, QuadParams, SoSmcGains)
from .scenarios import Reference, get_scenario, reference_at

__all__ = [
    "AhsmcGains", "AttitudeGains", "ChsmcGains", "ControlInput", "EkfBelief",
    "IhsmcGains", "NoiseConfig", "PidGains", "QuadParams", "Reference", "RunConfig",
    "SoSmcGains", "TimeSeriesLog", "derivative", "get_scenario", "metrics", "mix",
    "perturb", "reference_at", "rk4_step", "run_closed_loop", "unmix",
]
