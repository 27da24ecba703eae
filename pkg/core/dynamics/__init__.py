"""
Robot dynamics: second-order unicycle, RK4 discretization, admissible sets.
"""
from core.dynamics.unicycle import (
    ControlInput,
    Limits,
    RobotState,
    clamp_input,
    derivative,
    step,
    wrap_angle,
)

__all__ = ["ControlInput", "Limits", "RobotState", "clamp_input", "derivative", "step", "wrap_angle"]
