import itertools
import math

import numpy as np
import pytest
from PIL import Image

from core.belief.belief_map import (
    BeliefMap,
    cell_entropy,
    coverage_reached,
    entropy_map,
    expected_mutual_information,
    export_belief_json,
    export_belief_pgm,
    free_entropy,
    init_uniform,
    mutual_information_grid,
    realized_info_gain,
    update,
)
from core.belief.sensor import Observation, SensorModel, simulate_observation
from core.utils.exceptions import ShapeMismatch
from core.world.world_map import GroundTruthTargets


def logit(p):
    return math.log(p / (1.0 - p))


def observe_all(shape, values):
    return Observation(mask=np.ones(shape, dtype=bool), values=np.asarray(values, dtype=bool).reshape(shape))


def test_uniform_prior(wall_world):
    belief = init_uniform(wall_world)
    assert np.all(belief.probabilities() == 0.5)
    assert free_entropy(belief, wall_world.free_mask) == pytest.approx(wall_world.n_free)
    assert entropy_map(belief, wall_world)[wall_world.obstacle_mask].sum() == 0.0


def test_binary_entropy():
    assert cell_entropy(0.5) == pytest.approx(1.0)
    assert cell_entropy(0.0) == 0.0
    assert cell_entropy(1.0) == 0.0
    assert cell_entropy(0.11) == pytest.approx(cell_entropy(0.89))


def test_single_reading_posterior():
    belief = BeliefMap(np.zeros((1, 1)))
    posterior = update(belief, observe_all((1, 1), [True]), SensorModel(0.8, 0.2))
    assert posterior.probabilities()[0, 0] == pytest.approx(0.8, abs=1e-12)


def test_update_matches_bayes_rule(rng):
    for _ in range(1000):
        prior = rng.uniform(0.05, 0.95)
        p_false, p_hit = np.sort(rng.uniform(0.05, 0.95, size=2))
        if p_hit - p_false < 1e-3:
            continue
        z = bool(rng.integers(2))
        belief = BeliefMap(np.full((1, 1), logit(prior)), l_clamp=50.0)
        posterior = update(belief, observe_all((1, 1), [z]), SensorModel(p_hit, p_false)).probabilities()[0, 0]
        like_one, like_zero = (p_hit, p_false) if z else (1.0 - p_hit, 1.0 - p_false)
        expected = like_one * prior / (like_one * prior + like_zero * (1.0 - prior))
        assert posterior == pytest.approx(expected, rel=1e-9)


def test_update_order_does_not_matter(rng):
    sensor = SensorModel(0.7, 0.2)
    belief = BeliefMap(rng.uniform(-2.0, 2.0, size=(4, 5)), l_clamp=50.0)
    a = observe_all((4, 5), rng.integers(2, size=20))
    b = observe_all((4, 5), rng.integers(2, size=20))
    ab = update(update(belief, a, sensor), b, sensor)
    ba = update(update(belief, b, sensor), a, sensor)
    np.testing.assert_allclose(ab.log_odds, ba.log_odds, rtol=0, atol=1e-12)


def test_unobserved_cells_unchanged():
    belief = BeliefMap(np.zeros((2, 2)))
    mask = np.array([[True, False], [False, False]])
    posterior = update(belief, Observation(mask, mask.copy()), SensorModel(0.8, 0.2))
    assert posterior.log_odds[0, 0] > 0
    assert np.all(posterior.log_odds[mask == 0] == 0.0)


def test_perfect_sensor_resolves_cells():
    belief = BeliefMap(np.zeros((1, 2)))
    posterior = update(belief, observe_all((1, 2), [True, False]), SensorModel())
    assert posterior.log_odds[0, 0] == belief.l_clamp
    assert posterior.log_odds[0, 1] == -belief.l_clamp
    assert entropy_map(posterior).sum() == 0.0
    assert mutual_information_grid(posterior, SensorModel()).sum() == 0.0


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        update(BeliefMap(np.zeros((2, 2))), observe_all((3, 3), [False] * 9), SensorModel())


def test_perfect_sensor_information_is_one_bit_per_uniform_cell():
    belief = BeliefMap(np.zeros((3, 4)))
    visible = np.zeros((3, 4), dtype=bool)
    visible[0, :3] = True
    visible[2, 1] = True
    assert expected_mutual_information(belief, visible, SensorModel()) == pytest.approx(4.0, abs=1e-12)
    assert expected_mutual_information(belief, [], SensorModel()) == 0.0


def test_resolved_cell_carries_no_information():
    belief = BeliefMap(np.full((1, 1), 100.0))
    assert expected_mutual_information(belief, [(0, 0)], SensorModel(0.8, 0.2)) <= 1e-3


def _brute_force_information(probs, sensor):
    """H(M) - sum_z P(z) H(M | z) over every joint outcome of k readings."""
    prior_entropy = sum(cell_entropy(p) for p in probs)
    conditional = 0.0
    for outcome in itertools.product((0, 1), repeat=len(probs)):
        p_outcome, h_given = 1.0, 0.0
        for p, z in zip(probs, outcome):
            like_one = sensor.p_hit if z else 1.0 - sensor.p_hit
            like_zero = sensor.p_false if z else 1.0 - sensor.p_false
            p_z = like_one * p + like_zero * (1.0 - p)
            p_outcome *= p_z
            h_given += cell_entropy(like_one * p / p_z)
        conditional += p_outcome * h_given
    return prior_entropy - conditional


@pytest.mark.parametrize("k", [1, 3, 6, 8])
def test_closed_form_information_matches_enumeration(k, rng):
    sensor = SensorModel(0.85, 0.1)
    probs = rng.uniform(0.05, 0.95, size=k)
    belief = BeliefMap(np.array([[logit(p) for p in probs]]))
    closed_form = expected_mutual_information(belief, np.ones((1, k), dtype=bool), sensor)
    assert closed_form == pytest.approx(_brute_force_information(probs, sensor), abs=1e-9)


def test_realized_gain_averages_to_expected_information():
    sensor = SensorModel(0.8, 0.1)
    probs = np.array([[0.3, 0.5, 0.7, 0.9, 0.2]])
    belief = BeliefMap(np.log(probs / (1.0 - probs)), l_clamp=50.0)
    expected = expected_mutual_information(belief, np.ones(probs.shape, dtype=bool), sensor)
    rng = np.random.default_rng(3)
    free = np.ones(probs.shape, dtype=bool)
    gains = []
    for _ in range(1000):
        targets = GroundTruthTargets(rng.random(probs.shape) < probs)
        obs = simulate_observation(targets, free, sensor, rng)
        gains.append(realized_info_gain(belief, update(belief, obs, sensor), free))
    gains = np.array(gains)
    assert abs(gains.mean() - expected) <= 4 * gains.std() / math.sqrt(len(gains))


def test_simulated_hit_rate():
    targets = GroundTruthTargets(np.ones((100, 100), dtype=bool))
    obs = simulate_observation(targets, np.ones((100, 100), dtype=bool), SensorModel(0.8, 0.1),
                               np.random.default_rng(5))
    rate = obs.values.mean()
    assert abs(rate - 0.8) <= 3 * math.sqrt(0.8 * 0.2 / 1e4)


def test_perfect_readings_equal_targets(rng):
    occupied = rng.random((6, 6)) < 0.3
    visible = rng.random((6, 6)) < 0.5
    obs = simulate_observation(GroundTruthTargets(occupied), visible, SensorModel(), rng)
    assert len(obs) == visible.sum()
    assert np.array_equal(obs.values, occupied & visible)
    assert set(obs.readings) == {(r, c) for r, c in np.argwhere(visible)}


def test_coverage_goal(empty_world):
    belief = init_uniform(empty_world)
    free = empty_world.free_mask
    assert not coverage_reached(belief, free, 0.9)
    resolved = belief.with_log_odds(np.full(empty_world.shape, -belief.l_clamp))
    assert coverage_reached(resolved, free, 0.9)
    with pytest.raises(ValueError):
        coverage_reached(belief, free, 1.0)


def test_coverage_boundary_at_ninety_percent(empty_world):
    belief = init_uniform(empty_world)
    n_free = empty_world.n_free

    def resolve(n_cells):
        log_odds = np.zeros(empty_world.shape)
        log_odds.flat[:n_cells] = -belief.l_clamp
        return belief.with_log_odds(log_odds)

    assert coverage_reached(resolve(n_free * 90 // 100), empty_world.free_mask, 0.9)
    assert not coverage_reached(resolve(n_free * 89 // 100), empty_world.free_mask, 0.9)


def test_realized_gain_of_perfect_sensor_counts_cells(empty_world):
    belief = init_uniform(empty_world)
    visible = np.zeros(empty_world.shape, dtype=bool)
    visible[:2, :5] = True
    obs = simulate_observation(GroundTruthTargets(np.zeros(empty_world.shape, dtype=bool)), visible, SensorModel(),
                               np.random.default_rng(0))
    assert realized_info_gain(belief, update(belief, obs, SensorModel()), empty_world.free_mask) == pytest.approx(10.0)


def test_exports(tmp_path, empty_world):
    belief = init_uniform(empty_world)
    export_belief_json(belief, str(tmp_path / "belief.json"))
    export_belief_pgm(belief, str(tmp_path / "belief.pgm"))
    with Image.open(tmp_path / "belief.pgm") as image:
        assert image.mode == "L"
        assert image.size == (empty_world.n_cols, empty_world.n_rows)
        assert set(image.getdata()) == {128}
