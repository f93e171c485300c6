"""Exact and approximate weak-visibility counting for planar segment scenes."""

from .kernel import Line, Point, Ray, Segment
from .scene import Scene, load_scene, read_scene, save_scene, validate_nondegenerate, write_scene
from .visibility import is_target_visible, visibility_count, visibility_graph, visible_set

__version__ = "0.1.0"
