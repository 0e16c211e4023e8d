"""
Load any persisted artifact, telling the kind apart by CSV header or JSON keys.
"""

from pathlib import Path

from app.core.exceptions import RecordsParseError
from app.pydantic_models.dynamics import ReducedTrajectory
from app.pydantic_models.experiment import RunRecords
from app.pydantic_models.landscape import LandscapeGrid, ReducedCurve
from app.utils.constants import RECORD_COLUMNS, TRAJECTORY_COLUMNS

from .grids import load_curve, load_grid
from .records import load_json, read_records
from .trajectories import read_trajectory

Artifact = RunRecords | LandscapeGrid | ReducedCurve | ReducedTrajectory


def load_artifact(path: str | Path) -> Artifact:
    """Run records (CSV or JSON), a grid, a reduced curve or a trajectory CSV."""
    path = Path(path)
    if path.suffix.lower() != ".json":
        with path.open() as stream:
            header = tuple(stream.readline().strip().split(","))
        if header == TRAJECTORY_COLUMNS:
            return read_trajectory(path)
        if header == RECORD_COLUMNS:
            return read_records(path)
        raise RecordsParseError(path, f"unrecognised CSV header {','.join(header)}", line=1)

    document = load_json(path)
    if not isinstance(document, dict):
        raise RecordsParseError(path, "expected a JSON object")
    if "w_axis" in document:
        return load_grid(path)
    if "points" in document:
        return load_curve(path)
    if "rows" in document:
        return read_records(path)
    raise RecordsParseError(path, f"unrecognised document with keys {sorted(document)}")
