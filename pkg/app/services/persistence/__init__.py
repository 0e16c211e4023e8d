"""
Reading and writing run records, landscape grids and trajectories.
"""

from .detect import Artifact, load_artifact
from .grids import load_curve, load_grid, save_grid
from .records import load_json, read_records, write_records
from .trajectories import read_trajectory, write_trajectory

__all__ = [
    "Artifact",
    "load_artifact",
    "load_curve",
    "load_grid",
    "load_json",
    "read_records",
    "read_trajectory",
    "save_grid",
    "write_records",
    "write_trajectory",
]
