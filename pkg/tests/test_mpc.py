import json
import math

import numpy as np
import pytest

from core.config.enums import SolverStatus
from core.config.run_config import MpcConfig, SolverConfig
from core.dynamics.unicycle import ControlInput, Limits, RobotState
from core.mpc.costs import stage_cost, terminal_cost
from core.mpc.solver import (
    MpcSolver,
    build_constraints,
    evaluate_objective_and_violation,
    objective_gradient,
    rollout,
    shift_warm_start,
)
from core.utils.exceptions import InvalidConstraint
from core.world.geometry import LinearConstraint


def test_stage_cost():
    assert stage_cost(ControlInput(2.0, -1.0), 0.003, 0.003) == pytest.approx(0.015)


def test_terminal_cost_is_normalized():
    assert terminal_cost((0.0, 0.0), (2.0, 0.0), (0.0, 0.0), 5.0) == pytest.approx(5.0)
    assert terminal_cost((2.0, 0.0), (2.0, 0.0), (0.0, 0.0), 5.0) == 0.0
    assert terminal_cost((1.0, 0.0), (2.0, 0.0), (0.0, 0.0), 5.0) == pytest.approx(1.25)
    # denominator guard when the robot already sits on the reference
    assert terminal_cost((0.01, 0.0), (0.0, 0.0), (0.0, 0.0), 5.0, eps_den=1e-4) == pytest.approx(5.0)


def test_rollout_starts_at_x0():
    x0 = RobotState(1.0, 1.0, 0.0, 1.0, 0.0)
    states = rollout(x0, np.zeros((15, 2)), 0.1)
    assert len(states) == 16
    assert states[0] == x0
    assert states[-1].x == pytest.approx(2.5)


def test_shift_warm_start():
    inputs = np.arange(6, dtype=float).reshape(3, 2)
    shifted = shift_warm_start(inputs)
    assert np.array_equal(shifted, [[2.0, 3.0], [4.0, 5.0], [0.0, 0.0]])


def test_gradient_matches_central_differences(rng):
    config = MpcConfig()
    h = 1e-6
    for _ in range(20):
        x0 = RobotState(0.0, 0.0, float(rng.uniform(-math.pi, math.pi)), 1.0, 0.0)
        p_ref = rng.uniform(-3.0, 3.0, size=2)
        inputs = rng.uniform(-0.3, 0.3, size=(config.horizon, 2))
        analytic = objective_gradient(inputs, x0, p_ref, config)
        numeric = np.zeros_like(inputs)
        for k in range(config.horizon):
            for j in range(2):
                plus, minus = inputs.copy(), inputs.copy()
                plus[k, j] += h
                minus[k, j] -= h
                f_plus, _ = evaluate_objective_and_violation(plus, x0, p_ref, (), config)
                f_minus, _ = evaluate_objective_and_violation(minus, x0, p_ref, (), config)
                numeric[k, j] = (f_plus - f_minus) / (2 * h)
        np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-6)


def test_stationary_optimum_is_zero_input():
    solver = MpcSolver()
    x0 = RobotState(10.0, 10.0)
    solution = solver.solve(x0, (10.0, 10.0))
    assert solution.cost <= 1e-6
    assert np.abs(solution.input_array()).max() <= 1e-6
    assert solution.status == SolverStatus.CONVERGED


def test_wall_constraint_is_respected():
    solver = MpcSolver()
    wall = LinearConstraint((1.0, 0.0), 5.0)
    x0 = RobotState(3.5, 0.0, 0.0, 1.0, 0.0)
    solution = solver.solve(x0, (8.0, 0.0), [wall])
    assert max(s.x for s in solution.states[1:]) <= 4.5 + 1e-3
    assert solution.max_constraint_violation <= 1e-3
    cost, violation = evaluate_objective_and_violation(solution.input_array(), x0, (8.0, 0.0), [wall], solver.config)
    assert cost == pytest.approx(solution.cost)
    assert violation == pytest.approx(solution.max_constraint_violation)


def test_unconstrained_solver_would_cross_the_wall():
    solver = MpcSolver()
    solution = solver.solve(RobotState(3.5, 0.0, 0.0, 1.0, 0.0), (8.0, 0.0))
    assert solution.terminal_position.x > 4.5


def test_tracks_a_two_meter_reference():
    solver = MpcSolver()
    x0 = RobotState(10.0, 10.0)
    solution = solver.solve(x0, (12.0, 10.0))
    assert solution.cost < solver.config.q_n
    assert solution.terminal_position.x > 10.5


def test_turns_towards_a_lateral_reference():
    solver = MpcSolver()
    solution = solver.solve(RobotState(10.0, 10.0), (10.0, 12.0))
    assert solution.cost < solver.config.q_n
    assert solution.terminal_position.y > 10.0


def test_converged_solutions_are_feasible_and_bounded():
    solver = MpcSolver()
    limits = solver.limits
    solution = solver.solve(RobotState(3.0, 3.0, 0.5, 1.0, 0.0), (6.0, 5.0), [LinearConstraint((0.0, 1.0), 6.0)])
    inputs = solution.input_array()
    assert np.all(np.abs(inputs[:, 0]) <= limits.a_max + 1e-12)
    assert np.all(np.abs(inputs[:, 1]) <= limits.alpha_max + 1e-12)
    if solution.converged:
        assert solution.max_constraint_violation <= solver.config.solver.constraint_tolerance
    assert len(solution.states) == solver.config.horizon + 1


def test_warm_start_is_fitted_to_the_horizon():
    solver = MpcSolver()
    x0 = RobotState(10.0, 10.0)
    first = solver.solve(x0, (12.0, 10.0))
    warm = first.shifted()
    assert warm.shape == (solver.config.horizon, 2)
    assert np.array_equal(warm[-1], [0.0, 0.0])
    second = solver.solve(rollout(x0, first.input_array()[:1], 0.1)[-1], (12.0, 10.0), warm_start=warm[:5])
    assert len(second.inputs) == solver.config.horizon


def test_rejects_non_unit_normals():
    with pytest.raises(InvalidConstraint):
        MpcSolver().solve(RobotState(), (1.0, 0.0), [LinearConstraint((2.0, 0.0), 5.0)])


def test_build_constraints(wall_world):
    config = MpcConfig()
    assert len(build_constraints(wall_world, (2.0, 10.0), config)) == 5
    assert len(build_constraints(wall_world, (2.0, 10.0), config.model_copy(update={"include_bounds": False}))) == 1


def test_custom_limits_are_honored():
    limits = Limits(v_max=1.0)
    solution = MpcSolver(limits=limits).solve(RobotState(10.0, 10.0), (14.0, 10.0))
    assert max(s.v for s in solution.states) <= 1.0


def test_trace_file(tmp_path):
    path = tmp_path / "trace.jsonl"
    solver = MpcSolver(MpcConfig(solver=SolverConfig(trace_path=str(path))))
    solver.solve(RobotState(3.5, 0.0, 0.0, 1.0, 0.0), (8.0, 0.0), [LinearConstraint((1.0, 0.0), 5.0)])
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert records[0]["outer"] == 0
    assert records[-1]["status"] in {s.value for s in SolverStatus}
