"""
Cost terms of the viewpoint-tracking MPC.
"""
from typing import Sequence

from core.dynamics.unicycle import ControlInput


def stage_cost(u: ControlInput, q_a: float, q_alpha: float) -> float:
    """Quadratic input penalty q_a u_a^2 + q_alpha u_alpha^2."""
    return q_a * u.u_a * u.u_a + q_alpha * u.u_alpha * u.u_alpha


def terminal_weight(p_now: Sequence[float], p_ref: Sequence[float], q_n: float, eps_den: float) -> float:
    """q_N / max(|p_now - p_ref|^2, eps_den): the scale applied to the squared terminal error."""
    dx, dy = p_now[0] - p_ref[0], p_now[1] - p_ref[1]
    return q_n / max(dx * dx + dy * dy, eps_den)


def terminal_cost(p_terminal: Sequence[float], p_ref: Sequence[float], p_now: Sequence[float],
                  q_n: float, eps_den: float = 1e-4) -> float:
    """
    Normalized terminal cost q_N |p_N - p_ref|^2 / max(|p_now - p_ref|^2, eps_den).

    Equals q_N when the robot ends where it started and 0 on the reference.
    """
    dx, dy = p_terminal[0] - p_ref[0], p_terminal[1] - p_ref[1]
    return terminal_weight(p_now, p_ref, q_n, eps_den) * (dx * dx + dy * dy)
