"""
Single-shooting MPC that steers the robot towards a viewpoint reference.

The N input vectors are the only decision variables; the predicted states
follow from rolling the clamped RK4 dynamics forward, so the trajectory is
always dynamically consistent. Obstacle half-planes are handled by an
augmented-Lagrangian outer loop around scipy's L-BFGS-B, which also projects
the inputs onto their box.
"""
import json
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from core.config.enums import SolverStatus
from core.config.run_config import MpcConfig
from core.dynamics.unicycle import ControlInput, Limits, RobotState, step, wrap_angle
from core.mpc.costs import terminal_weight
from core.utils.exceptions import InvalidConstraint
from core.world.constraints import boundary_constraints, closest_obstacle_constraints
from core.world.geometry import LinearConstraint, WorldPoint
from core.world.world_map import WorldMap

logger = logging.getLogger(__name__)

UNIT_NORMAL_TOL = 1e-6


@dataclass(frozen=True)
class MpcSolution:
    """Optimized input sequence with its predicted trajectory."""
    inputs: Tuple[ControlInput, ...]
    states: Tuple[RobotState, ...]
    cost: float
    max_constraint_violation: float
    status: SolverStatus
    iterations: int = 0

    @property
    def terminal_position(self) -> WorldPoint:
        return WorldPoint(self.states[-1].x, self.states[-1].y)

    @property
    def converged(self) -> bool:
        return self.status == SolverStatus.CONVERGED

    def input_array(self) -> np.ndarray:
        return _as_input_array(self.inputs)

    def shifted(self) -> np.ndarray:
        """Warm start for the next sampling period."""
        return shift_warm_start(self.input_array())


def _as_input_array(inputs) -> np.ndarray:
    if isinstance(inputs, np.ndarray):
        return np.asarray(inputs, dtype=float).reshape(-1, 2)
    rows = [u.as_array() if isinstance(u, ControlInput) else np.asarray(u, dtype=float) for u in inputs]
    if not rows:
        return np.zeros((0, 2))
    return np.array(rows, dtype=float).reshape(-1, 2)


def shift_warm_start(inputs) -> np.ndarray:
    """Drop the applied first input and pad the tail with a zero input."""
    arr = _as_input_array(inputs)
    if len(arr) == 0:
        return arr
    return np.vstack([arr[1:], np.zeros((1, 2))])


def validate_constraints(constraints: Sequence[LinearConstraint]) -> None:
    for c in constraints:
        if abs(c.normal_norm() - 1.0) > UNIT_NORMAL_TOL:
            raise InvalidConstraint(f"constraint normal {c.normal} is not a unit vector")


def build_constraints(world: WorldMap, position: Sequence[float], config: MpcConfig) -> List[LinearConstraint]:
    """Half-planes of the n_obs closest obstacles, plus the map edges when `include_bounds`."""
    constraints = closest_obstacle_constraints(world, position, config.n_obs)
    if config.include_bounds:
        constraints.extend(boundary_constraints(world))
    return constraints


def rollout(x0: RobotState, inputs, dt: float, limits: Limits = Limits()) -> List[RobotState]:
    """Repeated dynamics.step; returns len(inputs) + 1 states starting at x0."""
    states = [x0]
    for u_a, u_alpha in _as_input_array(inputs):
        states.append(step(states[-1], ControlInput(float(u_a), float(u_alpha)), dt, limits))
    return states


def _step_partials(s: RobotState, u_a: float, u_alpha: float, dt: float, limits: Limits):
    """
    Partial derivatives of one clamped RK4 step.

    The unicycle's RK4 step has a closed form in the stage headings and speeds,
    so every entry below is exact. Rows for v and omega are zeroed when the
    unclamped value leaves its limits.
    """
    h = 0.5 * dt
    c = dt / 6.0
    v, omega = s.v, s.omega
    v2 = v + h * u_a
    v4 = v + dt * u_a
    psi2 = s.psi + h * omega
    psi3 = psi2 + h * h * u_alpha
    psi4 = s.psi + dt * omega + h * dt * u_alpha
    c1, s1 = math.cos(s.psi), math.sin(s.psi)
    c2, s2 = math.cos(psi2), math.sin(psi2)
    c3, s3 = math.cos(psi3), math.sin(psi3)
    c4, s4 = math.cos(psi4), math.sin(psi4)

    dx = c * (v * c1 + 2.0 * v2 * (c2 + c3) + v4 * c4)
    dy = c * (v * s1 + 2.0 * v2 * (s2 + s3) + v4 * s4)

    x_psi, y_psi = -dy, dx
    x_v = c * (c1 + 2.0 * (c2 + c3) + c4)
    y_v = c * (s1 + 2.0 * (s2 + s3) + s4)
    x_om = -c * (2.0 * v2 * h * (s2 + s3) + v4 * dt * s4)
    y_om = c * (2.0 * v2 * h * (c2 + c3) + v4 * dt * c4)
    x_ua = c * (2.0 * h * (c2 + c3) + dt * c4)
    y_ua = c * (2.0 * h * (s2 + s3) + dt * s4)
    x_ual = -c * (2.0 * v2 * h * h * s3 + v4 * h * dt * s4)
    y_ual = c * (2.0 * v2 * h * h * c3 + v4 * h * dt * c4)

    v_raw = v + dt * u_a
    om_raw = omega + dt * u_alpha
    v_free = 0.0 if (v_raw < limits.v_min or v_raw > limits.v_max) else 1.0
    om_free = 0.0 if abs(om_raw) > limits.omega_max else 1.0

    return (x_psi, y_psi, x_v, y_v, x_om, y_om, x_ua, y_ua, x_ual, y_ual, v_free, om_free)


def _backpropagate(states: Sequence[RobotState], inputs: np.ndarray, position_grads: np.ndarray,
                   dt: float, limits: Limits) -> np.ndarray:
    """
    Reverse pass through the rollout.

    Args:
        states: Rolled-out states s_0..s_N
        inputs: (N, 2) input array
        position_grads: (N, 2) derivative of the loss w.r.t. p_1..p_N
        dt: Sampling period
        limits: Limits used in the rollout

    Returns:
        np.ndarray: (N, 2) derivative of the loss w.r.t. the inputs
    """
    n = len(inputs)
    grad = np.zeros((n, 2))
    lx = ly = lpsi = lv = lom = 0.0
    for k in range(n - 1, -1, -1):
        lx += position_grads[k, 0]
        ly += position_grads[k, 1]
        u_a, u_alpha = float(inputs[k, 0]), float(inputs[k, 1])
        (x_psi, y_psi, x_v, y_v, x_om, y_om, x_ua, y_ua, x_ual, y_ual,
         v_free, om_free) = _step_partials(states[k], u_a, u_alpha, dt, limits)
        lv_next = lv * v_free
        lom_next = lom * om_free
        grad[k, 0] = lx * x_ua + ly * y_ua + lv_next * dt
        grad[k, 1] = lx * x_ual + ly * y_ual + lpsi * 0.5 * dt * dt + lom_next * dt
        lpsi, lv, lom = (
            lx * x_psi + ly * y_psi + lpsi,
            lx * x_v + ly * y_v + lv_next,
            lx * x_om + ly * y_om + lpsi * dt + lom_next,
        )
    return grad


class _ShootingProblem:
    """Objective, constraints and gradients for one solve."""

    def __init__(self, x0: RobotState, p_ref: Sequence[float], constraints: Sequence[LinearConstraint],
                 config: MpcConfig, limits: Limits):
        self.x0 = x0
        self.p_ref = np.array([float(p_ref[0]), float(p_ref[1])])
        self.config = config
        self.limits = limits
        self.normals = np.array([c.normal for c in constraints], dtype=float).reshape(-1, 2)
        self.offsets = np.array([c.offset for c in constraints], dtype=float)
        self.weight = terminal_weight(x0.position, p_ref, config.q_n, config.eps_den)
        self.stage_weights = np.array([config.q_a, config.q_alpha])

    @property
    def n_constraints(self) -> int:
        return len(self.offsets)

    def forward(self, inputs: np.ndarray) -> Tuple[List[RobotState], np.ndarray]:
        states = rollout(self.x0, inputs, self.config.dt, self.limits)
        positions = np.array([(s.x, s.y) for s in states[1:]]).reshape(-1, 2)
        return states, positions

    def cost(self, inputs: np.ndarray, positions: np.ndarray) -> float:
        stage = float((self.stage_weights * inputs * inputs).sum())
        if len(positions) == 0:
            return stage
        err = positions[-1] - self.p_ref
        return stage + self.weight * float(err @ err)

    def constraint_values(self, positions: np.ndarray, radius: float) -> np.ndarray:
        """(N, m) residuals n^T p_k - (b - r); positive means violated."""
        if self.n_constraints == 0:
            return np.zeros((len(positions), 0))
        return positions @ self.normals.T - (self.offsets - radius)

    def evaluate(self, inputs: np.ndarray, radius: float) -> Tuple[float, float, float]:
        """(cost, max violation, summed violation) at the given radius."""
        _, positions = self.forward(inputs)
        residuals = np.maximum(self.constraint_values(positions, radius), 0.0)
        max_violation = float(residuals.max()) if residuals.size else 0.0
        return self.cost(inputs, positions), max_violation, float(residuals.sum())

    def cost_gradient_terms(self, inputs: np.ndarray, positions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        position_grads = np.zeros_like(positions)
        if len(positions):
            position_grads[-1] = 2.0 * self.weight * (positions[-1] - self.p_ref)
        return 2.0 * self.stage_weights * inputs, position_grads

    def augmented(self, flat: np.ndarray, multipliers: np.ndarray, penalty: float,
                  radius: float) -> Tuple[float, np.ndarray]:
        """Augmented Lagrangian value and gradient w.r.t. the flattened inputs."""
        inputs = flat.reshape(-1, 2)
        states, positions = self.forward(inputs)
        value = self.cost(inputs, positions)
        input_grads, position_grads = self.cost_gradient_terms(inputs, positions)
        if self.n_constraints:
            residuals = self.constraint_values(positions, radius)
            shifted = np.maximum(penalty * residuals + multipliers, 0.0)
            value += float((shifted * shifted).sum() - (multipliers * multipliers).sum()) / (2.0 * penalty)
            position_grads += shifted @ self.normals
        grad = input_grads + _backpropagate(states, inputs, position_grads, self.config.dt, self.limits)
        return value, grad.ravel()


def evaluate_objective_and_violation(inputs, x0: RobotState, p_ref: Sequence[float],
                                     constraints: Sequence[LinearConstraint], config: MpcConfig,
                                     limits: Optional[Limits] = None) -> Tuple[float, float]:
    """
    Exact objective and max_k,j max(0, n_j^T p_k - (b_j - r)) over p_1..p_N.

    Uses the configured robot radius r without the solver's collision margin.
    """
    problem = _ShootingProblem(x0, p_ref, constraints, config, limits or Limits())
    cost, max_violation, _ = problem.evaluate(_as_input_array(inputs), config.robot_radius)
    return cost, max_violation


def objective_gradient(inputs, x0: RobotState, p_ref: Sequence[float], config: MpcConfig,
                       limits: Optional[Limits] = None) -> np.ndarray:
    """Analytic gradient of the objective (stage + terminal) w.r.t. the (N, 2) inputs."""
    problem = _ShootingProblem(x0, p_ref, (), config, limits or Limits())
    arr = _as_input_array(inputs)
    states, positions = problem.forward(arr)
    input_grads, position_grads = problem.cost_gradient_terms(arr, positions)
    return input_grads + _backpropagate(states, arr, position_grads, config.dt, problem.limits)


class MpcSolver:
    """
    Receding-horizon optimizer.

    Instances hold no per-solve state; the caller owns the warm start.
    """

    def __init__(self, config: Optional[MpcConfig] = None, limits: Optional[Limits] = None):
        self.config = config or MpcConfig()
        self.limits = limits or Limits()
        self.bounds = [(-self.limits.a_max, self.limits.a_max),
                       (-self.limits.alpha_max, self.limits.alpha_max)] * self.config.horizon

    @classmethod
    def from_run_config(cls, run_config) -> "MpcSolver":
        return cls(run_config.mpc, Limits.from_config(run_config.limits))

    @property
    def constraint_radius(self) -> float:
        return self.config.robot_radius + self.config.collision_margin

    def _clip(self, inputs: np.ndarray) -> np.ndarray:
        return np.column_stack([
            np.clip(inputs[:, 0], -self.limits.a_max, self.limits.a_max),
            np.clip(inputs[:, 1], -self.limits.alpha_max, self.limits.alpha_max),
        ])

    def _fit_horizon(self, inputs) -> np.ndarray:
        arr = _as_input_array(inputs)[: self.config.horizon]
        if len(arr) < self.config.horizon:
            arr = np.vstack([arr, np.zeros((self.config.horizon - len(arr), 2))])
        return self._clip(arr)

    def _heading_seeds(self, x0: RobotState, p_ref: Sequence[float]) -> List[Tuple[str, np.ndarray]]:
        """
        Turn-towards-reference input profiles.

        From rest the position does not depend on the turn input to first
        order, so a gradient method started at zero never turns around.
        """
        dx, dy = p_ref[0] - x0.x, p_ref[1] - x0.y
        if math.hypot(dx, dy) < 1e-9:
            return []
        n, dt = self.config.horizon, self.config.dt
        bearing_error = wrap_angle(math.atan2(dy, dx) - x0.psi)
        half = max(n // 2, 1)
        alpha = bearing_error / (half * dt) ** 2
        turn = np.zeros((n, 2))
        turn[:half, 1] = alpha
        turn[half:2 * half, 1] = -alpha
        go = turn.copy()
        if abs(bearing_error) < math.pi / 2:
            go[:, 0] = 0.5 * self.limits.a_max
        else:
            go[half:, 0] = 0.5 * self.limits.a_max
        return [("turn", self._clip(turn)), ("turn_and_go", self._clip(go))]

    def _merit(self, problem: _ShootingProblem, inputs: np.ndarray) -> Tuple[float, float]:
        cost, _, summed = problem.evaluate(inputs, self.constraint_radius)
        return cost + self.config.solver.merit_weight * summed, cost

    def solve(self, x0: RobotState, p_ref: Sequence[float], constraints: Sequence[LinearConstraint] = (),
              warm_start=None) -> MpcSolution:
        """
        Optimize the input sequence towards `p_ref`.

        Args:
            x0: Current state (within limits)
            p_ref: Reference viewpoint
            constraints: Unit-normal half-planes, held fixed over the horizon
            warm_start: Optional (N, 2) inputs, typically the shifted previous solution

        Returns:
            MpcSolution: Best iterate found; non-convergence is reported in `status`

        Raises:
            InvalidConstraint: If a normal is not a unit vector
        """
        validate_constraints(constraints)
        solver_cfg = self.config.solver
        problem = _ShootingProblem(x0, p_ref, constraints, self.config, self.limits)
        radius = self.constraint_radius

        candidates = [("zero", np.zeros((self.config.horizon, 2)))]
        if warm_start is not None:
            candidates.append(("warm", self._fit_horizon(warm_start)))
        candidates.extend(self._heading_seeds(x0, p_ref))
        scored = [(self._merit(problem, inputs)[0], i, name, inputs) for i, (name, inputs) in enumerate(candidates)]
        best_merit, _, seed_name, best_inputs = min(scored, key=lambda item: (item[0], item[1]))

        inputs = best_inputs
        multipliers = np.zeros((self.config.horizon, problem.n_constraints))
        penalty = solver_cfg.initial_penalty
        best_inner_ok = False
        previous_violation = math.inf
        iterations = 0
        trace = []

        for outer in range(solver_cfg.max_outer_iterations):
            result = minimize(
                problem.augmented,
                inputs.ravel(),
                args=(multipliers, penalty, radius),
                jac=True,
                method="L-BFGS-B",
                bounds=self.bounds,
                options={"maxiter": solver_cfg.max_inner_iterations, "gtol": solver_cfg.gradient_tolerance},
            )
            iterations += int(result.nit)
            inputs = self._clip(result.x.reshape(-1, 2))
            cost, violation, summed = problem.evaluate(inputs, radius)
            merit = cost + solver_cfg.merit_weight * summed
            accepted = merit <= best_merit
            if accepted:
                best_merit, best_inputs, best_inner_ok = merit, inputs, bool(result.success)
            trace.append({"outer": outer, "inner_iterations": int(result.nit), "cost": cost,
                          "violation": violation, "merit": merit, "penalty": penalty, "accepted": accepted})

            if violation <= solver_cfg.constraint_tolerance and result.success:
                break
            if problem.n_constraints:
                _, positions = problem.forward(inputs)
                residuals = problem.constraint_values(positions, radius)
                multipliers = np.maximum(multipliers + penalty * residuals, 0.0)
                if violation > 0.25 * previous_violation:
                    penalty *= solver_cfg.penalty_growth
            previous_violation = violation

        states = rollout(x0, best_inputs, self.config.dt, self.limits)
        cost, violation, _ = problem.evaluate(best_inputs, self.config.robot_radius)
        if violation > solver_cfg.constraint_tolerance:
            status = SolverStatus.INFEASIBLE
        elif best_inner_ok:
            status = SolverStatus.CONVERGED
        else:
            status = SolverStatus.MAX_ITERATIONS

        if solver_cfg.trace_path:
            self._write_trace(solver_cfg.trace_path, seed_name, trace, status)
        logger.debug(f"MPC solve: status={status.value} cost={cost:.4f} "
                     f"violation={violation:.2e} iterations={iterations} seed={seed_name}")

        return MpcSolution(
            inputs=tuple(ControlInput(float(a), float(b)) for a, b in best_inputs),
            states=tuple(states),
            cost=cost,
            max_constraint_violation=violation,
            status=status,
            iterations=iterations,
        )

    @staticmethod
    def _write_trace(path: str, seed_name: str, trace: List[dict], status: SolverStatus) -> None:
        with open(path, "a") as f:
            for record in trace:
                f.write(json.dumps({"seed": seed_name, **record}) + "\n")
            f.write(json.dumps({"seed": seed_name, "status": status.value}) + "\n")
