from .cells import CellJob, CellSolver, SingleTaskFamily, run_cells
from .curves import default_magnitude, reduced_curve_1d, regularized_train_landscape
from .grid import critical_data_size, log_w_axis, reduced_grid
from .shape import shape_metrics
from .sphere import SphereMinResult, minimize_on_sphere, standard_norm

__all__ = [
    "CellJob",
    "CellSolver",
    "SingleTaskFamily",
    "SphereMinResult",
    "critical_data_size",
    "default_magnitude",
    "log_w_axis",
    "minimize_on_sphere",
    "reduced_curve_1d",
    "reduced_grid",
    "regularized_train_landscape",
    "run_cells",
    "shape_metrics",
    "standard_norm",
]
