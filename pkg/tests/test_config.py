import json

import pytest

from core.config.enums import PlannerKind
from core.config.run_config import RunConfig, build_run_config, load_run_config, parse_override
from core.utils.exceptions import ConfigError


def test_reference_defaults():
    config = RunConfig()
    assert config.mpc.horizon == 15
    assert config.mpc.dt == 0.1
    assert config.mpc.q_n == 5.0
    assert config.mpc.q_a == config.mpc.q_alpha == 0.003
    assert config.episode.n_a == 5
    assert config.episode.r_pen == -0.1
    assert config.episode.t_max == 640
    assert config.mcts.n_tree == 100 and config.mcts.depth == 4
    assert config.start_clearance == config.mpc.robot_radius


def test_parse_override_builds_nested_dict():
    assert parse_override("mpc.solver.max_outer_iterations=3") == {"mpc": {"solver": {"max_outer_iterations": 3}}}
    assert parse_override("episode.planner=mcts") == {"episode": {"planner": "mcts"}}


def test_parse_override_rejects_missing_value():
    with pytest.raises(ConfigError):
        parse_override("episode.beta")


def test_overrides_apply_in_order():
    config = load_run_config(None, ["mpc.horizon=20", {"episode": {"beta": 0.5}}, "mpc.horizon=12"])
    assert config.mpc.horizon == 12
    assert config.episode.beta == 0.5
    assert config.mpc.q_n == 5.0


def test_file_values_lose_to_overrides(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"mpc": {"horizon": 10}, "episode": {"planner": "mcts"}}))
    config = load_run_config(str(path), ["mpc.horizon=11"])
    assert config.mpc.horizon == 11
    assert config.episode.planner == PlannerKind.MCTS


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_run_config(str(path))


def test_validation_error_names_the_field():
    with pytest.raises(ConfigError, match=r"episode\.beta"):
        build_run_config({"episode": {"beta": 1.0}})


def test_uninformative_sensor_rejected():
    with pytest.raises(ConfigError):
        build_run_config({"sensor": {"p_hit": 0.3, "p_false": 0.3}})


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        build_run_config({"mpc": {"horizn": 10}})


def test_negative_obstacle_count_rejected():
    with pytest.raises(ConfigError):
        build_run_config({"n_obstacles": -1})
    with pytest.raises(ConfigError):
        build_run_config({"benchmark": {"obstacle_counts": [1, -2]}})


def test_obstacles_must_fit_in_map():
    with pytest.raises(ConfigError):
        build_run_config({"world": {"width_m": 6.0, "half_extent_max_m": 4.0}})
