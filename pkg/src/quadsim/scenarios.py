"""Reference trajectories for the three benchmark scenarios."""
from dataclasses import dataclass
from math import cos, pi, sin
from typing import Callable, NamedTuple, Optional, Tuple

from .errors import OutOfRange

T_TOL = 1e-9


class Reference(NamedTuple):
    """Desired position/yaw with exact first and second time derivatives."""

    x_r: float
    y_r: float
    z_r: float
    psi_r: float
    dx_r: float = 0.0
    dy_r: float = 0.0
    dz_r: float = 0.0
    dpsi_r: float = 0.0
    ddx_r: float = 0.0
    ddy_r: float = 0.0
    ddz_r: float = 0.0
    ddpsi_r: float = 0.0


@dataclass(frozen=True)
class ScenarioSpec:
    """Either piecewise-constant setpoints (``segments`` of (start, (x, y, z, psi)))
    or an analytic reference function of time."""

    id: int
    duration: float
    segments: Tuple[Tuple[float, Tuple[float, float, float, float]], ...] = ()
    analytic: Optional[Callable[[float], Reference]] = None

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be > 0")
        starts = [s for s, _ in self.segments]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("switch times must be strictly increasing")
        if self.analytic is None and (not starts or starts[0] != 0.0):
            raise ValueError("setpoint scenarios need a segment starting at t=0")


def _helix(t: float) -> Reference:
    w = pi / 5.0
    st, ct = sin(w * t), cos(w * t)
    return Reference(
        x_r=st, y_r=-1.0 + ct, z_r=0.5 * t, psi_r=0.5,
        dx_r=w * ct, dy_r=-w * st, dz_r=0.5,
        ddx_r=-w * w * st, ddy_r=-w * w * ct,
    )


SCENARIOS = {
    1: ScenarioSpec(1, 15.0, segments=((0.0, (12.0, 12.0, 12.0, 0.5)),)),
    2: ScenarioSpec(2, 60.0, analytic=_helix),
    3: ScenarioSpec(3, 60.0, segments=(
        (0.0, (3.0, 3.0, 3.0, 0.2)),
        (10.0, (1.5, 3.0, 3.0, 0.2)),
        (20.0, (1.5, 1.5, 3.0, 0.2)),
        (30.0, (3.0, 1.5, 3.0, 0.4)),
        (40.0, (3.0, 3.0, 3.0, 0.4)),
        (50.0, (3.0, 3.0, 0.0, 0.4)),
    )),
}


def get_scenario(scenario_id: int) -> ScenarioSpec:
    try:
        return SCENARIOS[int(scenario_id)]
    except (KeyError, ValueError):
        raise OutOfRange(f"unknown scenario {scenario_id!r}; expected 1, 2 or 3") from None


def reference_at(t: float, spec: ScenarioSpec) -> Reference:
    if not -T_TOL <= t <= spec.duration + T_TOL:
        raise OutOfRange(f"t={t} outside [0, {spec.duration}] for scenario {spec.id}")
    if spec.analytic is not None:
        return spec.analytic(t)
    # right-continuous: a switch time belongs to the new segment
    value = spec.segments[0][1]
    for start, setpoint in spec.segments:
        if t + T_TOL >= start:
            value = setpoint
        else:
            break
    return Reference(*value)
