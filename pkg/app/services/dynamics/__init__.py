from .analysis import count_descents, log_w_speed, plateau_mask, plateau_segment
from .boundary import boundary_angle, contour_for, contour_segments, level_set_points
from .grok_time import grok_time_geometric, grok_time_simple
from .integrate import integrate_reduced
from .interpolate import LandscapeInterpolant, interp_value_and_grad

__all__ = [
    "LandscapeInterpolant",
    "boundary_angle",
    "contour_for",
    "contour_segments",
    "count_descents",
    "grok_time_geometric",
    "grok_time_simple",
    "integrate_reduced",
    "interp_value_and_grad",
    "level_set_points",
    "log_w_speed",
    "plateau_mask",
    "plateau_segment",
]
