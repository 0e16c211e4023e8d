from .svg import render_curves, render_heatmap, render_reduced_curve, render_svg, render_trajectory

__all__ = ["render_curves", "render_heatmap", "render_reduced_curve", "render_svg", "render_trajectory"]
