import xml.etree.ElementTree as ET

import numpy as np

from core.belief.belief_map import init_uniform
from core.dynamics.unicycle import RobotState
from core.planners.observation import extract_local_grid
from core.render.svg_renderer import belief_color, belief_rgb, render_frame, render_map
from core.world.world_map import GroundTruthTargets


def svg_ids(path):
    return {element.get("id") for element in ET.parse(path).getroot().iter()}


def test_belief_colors():
    assert belief_color(0.0) == "#00008c"
    assert belief_color(0.5) == "#009900"
    assert belief_color(1.0) == "#990000"


def test_uniform_belief_is_a_single_color(empty_world):
    image = belief_rgb(init_uniform(empty_world).probabilities())
    assert image.shape == (40, 40, 3) and image.dtype == np.uint8
    assert np.all(image == image[0, 0])
    assert image[0, 0].tolist() == [0, 153, 0]


def test_render_map_is_reproducible(tmp_path, wall_world):
    targets = GroundTruthTargets(wall_world.free_mask & (np.arange(40)[None, :] % 7 == 0))
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (first, second):
        render_map(wall_world, str(path), trajectory=[(2.0, 10.0), (3.0, 11.0)], targets=targets, title="wall")
    assert first.read_bytes() == second.read_bytes()
    assert "trajectory" in svg_ids(first)


def test_render_frame(tmp_path, wall_world):
    state = RobotState(3.0, 10.0, 0.4)
    path = tmp_path / "frame.svg"
    render_frame(wall_world, [(2.25, 10.25), (3.0, 10.0)], state, (4.0, 11.0), extract_local_grid(wall_world, state, 16),
                 init_uniform(wall_world).probabilities(), str(path))
    ids = svg_ids(path)
    assert {"trajectory", "p_ref"} <= ids
