"""Physical constants and gain records, defaulting to the published tuning."""
from dataclasses import dataclass, fields
import math

from .errors import InvalidParameter


def _require_positive(obj, names):
    for name in names:
        v = getattr(obj, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise InvalidParameter(f"{type(obj).__name__}.{name} must be > 0, got {v!r}")


@dataclass(frozen=True)
class QuadParams:
    m: float = 1.96
    g: float = 9.81
    Ixx: float = 0.00149
    Iyy: float = 0.00153
    Izz: float = 0.00532
    Kdx: float = 0.00055670
    Kdy: float = 0.00055670
    Kdz: float = 0.0006354
    # rotor coefficients only feed mix/unmix, never the control laws
    kt: float = 1.2e-5
    kd: float = 1.8e-7
    l: float = 0.20

    def __post_init__(self):
        _require_positive(self, ("m", "Ixx", "Iyy", "Izz"))
        for name in ("g", "Kdx", "Kdy", "Kdz", "kt", "kd", "l"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidParameter(f"QuadParams.{name} must be finite and >= 0, got {v!r}")

    @property
    def weight(self):
        return self.m * self.g


@dataclass(frozen=True)
class AttitudeGains:
    """PD reference generators plus the roll/pitch/yaw sliding surfaces.

    ``literal_pd_sign`` reproduces the printed proportional sign of the PD
    reference laws, which pushes the vehicle away from the setpoint under the
    thrust projection used by the plant. The default flips only that term.
    """

    kpx: float = 0.1
    kdx: float = 0.15
    kpy: float = 0.1
    kdy: float = 0.15
    c_phi: float = 3.5
    c_theta: float = 3.5
    c_psi: float = 0.5
    K_phi: float = 0.4
    K_theta: float = 0.4
    K_psi: float = 0.2
    max_tilt: float = math.pi / 4
    literal_pd_sign: bool = False

    def __post_init__(self):
        _require_positive(self, [f.name for f in fields(self) if f.name != "literal_pd_sign"])


@dataclass(frozen=True)
class AhsmcGains:
    c1: float = 0.05
    c2: float = 0.05
    c3: float = 1.0
    lambda1: float = 0.05
    lambda2: float = 0.05
    K: float = 0.34
    eta: float = 0.25

    def __post_init__(self):
        _require_positive(self, [f.name for f in fields(self)])


@dataclass(frozen=True)
class IhsmcGains:
    c1: float = 0.05
    c2: float = 0.05
    c3: float = 0.05
    c4: float = 10.05
    c5: float = 3.25
    K: float = 0.75
    eta: float = 0.25

    def __post_init__(self):
        _require_positive(self, [f.name for f in fields(self)])


@dataclass(frozen=True)
class ChsmcGains:
    c1: float = 0.05
    c2: float = 0.05
    c3: float = 1.0
    alpha: float = 1.5
    K: float = 0.5
    eta: float = 0.25

    def __post_init__(self):
        _require_positive(self, [f.name for f in fields(self)])


@dataclass(frozen=True)
class PidGains:
    kpz: float = 10.0
    kdz: float = 12.0
    kp_phi: float = 0.6
    kd_phi: float = 0.4
    kp_theta: float = 0.6
    kd_theta: float = 0.4
    kp_psi: float = 0.4
    kd_psi: float = 0.3

    def __post_init__(self):
        _require_positive(self, [f.name for f in fields(self)])


@dataclass(frozen=True)
class SoSmcGains:
    c_z: float = 2.5
    c1: float = 0.02
    c2: float = 0.01
    c3: float = 0.2
    c4: float = 0.3
    c5: float = 0.05
    c6: float = 0.01
    c7: float = 0.2
    c8: float = 0.3
    c_psi: float = 0.25
    eps1: float = 1.7
    eps2: float = 1.5
    eps3: float = 1.5
    eps4: float = 1.2
    eta1: float = 2.0
    eta2: float = 5.0
    eta3: float = 5.0
    eta4: float = 2.0
    hard_sign: bool = False

    def __post_init__(self):
        _require_positive(self, [f.name for f in fields(self) if f.name != "hard_sign"])


@dataclass(frozen=True)
class NoiseConfig:
    """Process (q) and measurement (r) variances; Q = q*I, R = r*I."""

    q_scalar: float = 1e-5
    r_scalar: float = 1e-6

    def __post_init__(self):
        for name in ("q_scalar", "r_scalar"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidParameter(f"NoiseConfig.{name} must be finite and >= 0, got {v!r}")
