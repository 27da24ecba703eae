"""
Second-order unicycle model.

State x = [x, y, psi, v, omega], input u = [u_a, u_alpha]:
    x' = v cos(psi), y' = v sin(psi), psi' = omega, v' = u_a, omega' = u_alpha.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class Limits:
    """Admissible speeds and accelerations."""
    v_min: float = 0.0
    v_max: float = 3.0
    omega_max: float = math.pi / 2
    a_max: float = 2.0
    alpha_max: float = math.pi

    def __post_init__(self):
        if not (self.v_max > 0 and self.omega_max > 0 and self.a_max > 0 and self.alpha_max > 0):
            raise ValueError("limit maxima must be positive")
        if not self.v_min < self.v_max:
            raise ValueError("v_min must be below v_max")

    @classmethod
    def from_config(cls, config) -> "Limits":
        return cls(config.v_min, config.v_max, config.omega_max, config.a_max, config.alpha_max)


@dataclass(frozen=True)
class RobotState:
    x: float = 0.0
    y: float = 0.0
    psi: float = 0.0
    v: float = 0.0
    omega: float = 0.0

    @property
    def position(self) -> Tuple[float, float]:
        return (self.x, self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.psi, self.v, self.omega])

    @classmethod
    def from_array(cls, values) -> "RobotState":
        return cls(*(float(v) for v in values))


@dataclass(frozen=True)
class ControlInput:
    u_a: float = 0.0
    u_alpha: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u_a, self.u_alpha])


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def derivative(s: RobotState, u: ControlInput) -> Tuple[float, float, float, float, float]:
    return _derivative(s.psi, s.v, s.omega, u.u_a, u.u_alpha)


def _derivative(psi, v, omega, u_a, u_alpha):
    return (v * math.cos(psi), v * math.sin(psi), omega, u_a, u_alpha)


def rk4_raw(x, y, psi, v, omega, u_a, u_alpha, dt):
    """One RK4 step on plain floats, no clamping or wrapping."""
    k1 = _derivative(psi, v, omega, u_a, u_alpha)
    h = 0.5 * dt
    k2 = _derivative(psi + h * k1[2], v + h * k1[3], omega + h * k1[4], u_a, u_alpha)
    k3 = _derivative(psi + h * k2[2], v + h * k2[3], omega + h * k2[4], u_a, u_alpha)
    k4 = _derivative(psi + dt * k3[2], v + dt * k3[3], omega + dt * k3[4], u_a, u_alpha)
    c = dt / 6.0
    return (
        x + c * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + c * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        psi + c * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        v + c * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
        omega + c * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]),
    )


def step(s: RobotState, u: ControlInput, dt: float, limits: Limits = Limits()) -> RobotState:
    """
    Advance one sampling period with RK4, then project v and omega onto the
    limits and wrap the heading.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x, y, psi, v, omega = rk4_raw(s.x, s.y, s.psi, s.v, s.omega, u.u_a, u.u_alpha, dt)
    v = min(max(v, limits.v_min), limits.v_max)
    omega = min(max(omega, -limits.omega_max), limits.omega_max)
    return RobotState(x, y, wrap_angle(psi), v, omega)


def clamp_input(u: ControlInput, limits: Limits) -> ControlInput:
    """Component-wise saturation at +-a_max, +-alpha_max."""
    return ControlInput(
        min(max(u.u_a, -limits.a_max), limits.a_max),
        min(max(u.u_alpha, -limits.alpha_max), limits.alpha_max),
    )
