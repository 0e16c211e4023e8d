"""
De-grokking: the same addition run with a free norm and with a pinned one.
"""

import logging

from app.core.exceptions import DomainError
from app.pydantic_models.experiment import DegrokResult, ExperimentConfig
from app.utils.constants import TaskKind

from .training import run_training

logger = logging.getLogger(__name__)

DEGROK_ALPHA = 0.8


def degrok_experiment(base: ExperimentConfig, constrained_alpha: float = DEGROK_ALPHA) -> DegrokResult:
    """
    Paired addition runs from the same seed.

    The first keeps the config's alpha and weight decay with a free norm;
    the second starts at constrained_alpha and pins the norm there.
    """
    if base.task != TaskKind.ADDITION:
        raise DomainError(f"de-grokking runs on the addition task, got {base.task.value}")
    settings = base.model_dump()
    free = ExperimentConfig.model_validate({**settings, "constrained": False, "constrained_norm": None})
    pinned = ExperimentConfig.model_validate(
        {**settings, "alpha": constrained_alpha, "constrained": True, "constrained_norm": None}
    )
    logger.info(f"De-grokking pair: free alpha={free.alpha} vs pinned alpha={pinned.alpha}")
    return DegrokResult(unconstrained=run_training(free), constrained=run_training(pinned))
