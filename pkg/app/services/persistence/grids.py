"""
Landscape grids as JSON documents.
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from app.core.exceptions import RecordsParseError
from app.pydantic_models.landscape import LandscapeGrid, ReducedCurve

from .records import load_json

logger = logging.getLogger(__name__)


def save_grid(grid: LandscapeGrid | ReducedCurve, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(grid.model_dump_json(indent=2))
    logger.info(f"Wrote {type(grid).__name__} to {path}")
    return path


def load_grid(path: str | Path) -> LandscapeGrid:
    path = Path(path)
    try:
        return LandscapeGrid.model_validate(load_json(path))
    except ValidationError as e:
        raise RecordsParseError(path, f"not a landscape grid: {e}") from e


def load_curve(path: str | Path) -> ReducedCurve:
    path = Path(path)
    try:
        return ReducedCurve.model_validate(load_json(path))
    except ValidationError as e:
        raise RecordsParseError(path, f"not a reduced curve: {e}") from e
