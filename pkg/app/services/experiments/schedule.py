"""
Which steps of a run get logged.
"""

import math

from app.core.exceptions import DomainError
from app.utils.constants import GEOMETRIC_LOG_RATIO, GEOMETRIC_LOG_START


def logging_steps(steps: int, log_every: int) -> list[int]:
    """
    Step 0, then every log_every steps up to step 100, then steps growing by
    a factor 1.1 but never by less than log_every, and always the final step.
    """
    if steps < 0 or log_every < 1:
        raise DomainError(f"need steps >= 0 and log_every >= 1, got {steps}, {log_every}")
    logged = [0]
    step = log_every
    while step <= min(steps, GEOMETRIC_LOG_START):
        logged.append(step)
        step += log_every
    step = logged[-1]
    while steps > GEOMETRIC_LOG_START:
        step = max(step + log_every, math.ceil(step * GEOMETRIC_LOG_RATIO))
        if step > steps:
            break
        logged.append(step)
    if logged[-1] != steps:
        logged.append(steps)
    return logged
