"""
Parameter sweeps of training runs and log-log power-law fits.
"""

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.experiment import (
    ExperimentConfig,
    PowerLawFit,
    SweepOutcome,
    SweepResult,
)
from app.utils.constants import Metric, SweepParam

from .metrics import parse_metric, time_to_level
from .training import run_training

logger = logging.getLogger(__name__)

MIN_SWEEP_POINTS = 4
# sweeps over these parameters must span at least a decade
DECADE_PARAMS = (SweepParam.WEIGHT_DECAY, SweepParam.LR)


def fit_power_law(xs: list[float], ys: list[float]) -> PowerLawFit:
    """Least-squares line through (log x, log y)."""
    if len(xs) != len(ys):
        raise DomainError(f"{len(xs)} x values for {len(ys)} y values")
    if len(xs) < 2:
        raise DomainError(f"a power-law fit needs at least 2 points, got {len(xs)}")
    if any(not x > 0 for x in xs) or any(not y > 0 for y in ys):
        raise DomainError("a power-law fit needs positive values")
    log_x, log_y = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = float(np.sqrt(np.mean((log_y - (intercept + slope * log_x)) ** 2)))
    return PowerLawFit(slope=float(slope), intercept=float(intercept), residual=residual, n_points=len(xs))


def config_for(base: ExperimentConfig, param: SweepParam, value: float) -> ExperimentConfig:
    value = int(round(value)) if param == SweepParam.N_TRAIN else float(value)
    return ExperimentConfig.model_validate({**base.model_dump(), param.value: value})


def _check_values(param: SweepParam, values: list[float]) -> None:
    if len(values) < MIN_SWEEP_POINTS:
        raise DomainError(f"a sweep needs at least {MIN_SWEEP_POINTS} values, got {len(values)}")
    if any(not value > 0 for value in values):
        raise DomainError(f"sweep values must be positive, got {values}")
    if param in DECADE_PARAMS and max(values) / min(values) < 10:
        raise DomainError(f"{param.value} sweep must span at least one decade, got {values}")


def sweep_result(
    param: SweepParam, values: list[float], metric: Metric, level: float, outcomes: list[SweepOutcome]
) -> SweepResult:
    """Fit log time against log value over outcomes with a finite, positive time."""
    finite = [(o.value, o.time) for o in outcomes if o.time is not None and o.time > 0]
    fit, reason = None, None
    if len(finite) < 2:
        reason = f"only {len(finite)} of {len(outcomes)} runs reached {metric.value} {level}"
        logger.warning(f"Sweep fit omitted: {reason}")
    else:
        fit = fit_power_law([v for v, _ in finite], [float(t) for _, t in finite])
    return SweepResult(
        param=param, values=values, metric=metric, level=level,
        outcomes=outcomes, fit=fit, fit_omitted_reason=reason,
    )


def sweep(
    base: ExperimentConfig,
    param: SweepParam | str,
    values: list[float],
    metric: Metric | str = Metric.TEST_ACC,
    level: float = 0.95,
    workers: int = 1,
) -> SweepResult:
    """
    One run per value of `param`, then a power-law fit of time-to-level.

    Runs are independent; with workers > 1 they run on a process pool and
    are assembled in value order.
    """
    try:
        param = SweepParam(param)
    except ValueError as e:
        raise DomainError(f"cannot sweep {param!r}; expected one of {[p.value for p in SweepParam]}") from e
    metric = parse_metric(metric)
    values = [float(value) for value in values]
    _check_values(param, values)
    configs = [config_for(base, param, value) for value in values]
    logger.info(f"Sweeping {param.value} over {values} ({workers} worker(s))")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            all_records = list(executor.map(run_training, configs))
    else:
        all_records = [run_training(config) for config in configs]

    outcomes = []
    for value, records in zip(values, all_records):
        outcome = SweepOutcome(
            value=value, time=time_to_level(records, metric, level), status=records.status, records=records
        )
        logger.info(f"{param.value}={value:g}: {metric.value} >= {level} at step {outcome.time}")
        outcomes.append(outcome)
    return sweep_result(param, values, metric, level, outcomes)

