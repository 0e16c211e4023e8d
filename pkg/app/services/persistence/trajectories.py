"""
Reduced trajectories as CSV with columns t,w,m,train_loss,test_loss.

A missing test loss is written as an empty field.
"""

import csv
import logging
from pathlib import Path

from pydantic import ValidationError

from app.core.exceptions import RecordsParseError
from app.pydantic_models.dynamics import ReducedTrajectory, TrajectorySample
from app.utils.constants import TRAJECTORY_COLUMNS, TrajectoryStatus

logger = logging.getLogger(__name__)


def write_trajectory(trajectory: ReducedTrajectory, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for sample in trajectory.samples:
            writer.writerow(
                ["" if getattr(sample, c) is None else repr(float(getattr(sample, c))) for c in TRAJECTORY_COLUMNS]
            )
    logger.info(f"Wrote {len(trajectory.samples)} trajectory samples ({trajectory.status.value}) to {path}")
    return path


def read_trajectory(path: str | Path, status: TrajectoryStatus = TrajectoryStatus.MAX_STEPS) -> ReducedTrajectory:
    """The CSV does not carry the terminal status; callers may supply it."""
    path = Path(path)
    with path.open(newline="") as stream:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or tuple(header) != TRAJECTORY_COLUMNS:
            raise RecordsParseError(path, f"header must be {','.join(TRAJECTORY_COLUMNS)}, got {header}", line=1)
        samples = []
        for line, fields in enumerate(reader, start=2):
            if not fields:
                continue
            if len(fields) != len(TRAJECTORY_COLUMNS):
                raise RecordsParseError(path, f"expected {len(TRAJECTORY_COLUMNS)} fields, got {len(fields)}", line=line)
            try:
                values = {name: (None if text == "" else float(text)) for name, text in zip(TRAJECTORY_COLUMNS, fields)}
                samples.append(TrajectorySample(**values))
            except (ValueError, ValidationError) as e:
                raise RecordsParseError(path, f"malformed row {fields}: {e}", line=line) from e
    try:
        return ReducedTrajectory(samples=samples, status=status)
    except ValidationError as e:
        raise RecordsParseError(path, str(e)) from e
