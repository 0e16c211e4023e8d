"""
Measurements on run records.
"""

from app.core.exceptions import DomainError
from app.pydantic_models.experiment import RunRecords
from app.utils.constants import Metric


def parse_metric(metric: Metric | str) -> Metric:
    try:
        return Metric(metric)
    except ValueError as e:
        allowed = ", ".join(m.value for m in Metric)
        raise DomainError(f"unknown metric {metric!r}; expected one of {allowed}") from e


def time_to_level(records: RunRecords, metric: Metric | str, level: float) -> int | None:
    """
    First logged step where the metric reaches the level.

    Accuracies must rise to >= level, losses fall to <= level.
    """
    metric = parse_metric(metric)
    for row in records.rows:
        value = getattr(row, metric.value)
        if (value <= level) if metric.is_loss else (value >= level):
            return row.step
    return None


def generalization_delay(records: RunRecords, level: float) -> float | None:
    """
    time_to_level(test_acc) / time_to_level(train_acc), or None if either
    level is never reached. A train time of 0 counts as one step.
    """
    train_time = time_to_level(records, Metric.TRAIN_ACC, level)
    test_time = time_to_level(records, Metric.TEST_ACC, level)
    if train_time is None or test_time is None:
        return None
    return test_time / max(train_time, 1)
