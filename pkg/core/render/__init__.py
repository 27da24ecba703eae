"""
Static SVG rendering of maps, episodes and beliefs.
"""
from core.render.svg_renderer import belief_color, belief_rgb, render_frame, render_map

__all__ = ["belief_color", "belief_rgb", "render_frame", "render_map"]
