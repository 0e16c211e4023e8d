"""
Closed-form grokking-time estimates.
"""

import math

from app.core.exceptions import DomainError
from app.pydantic_models.dynamics import GrokTimeEstimate


def grok_time_simple(w0: float, wc: float, gamma: float) -> GrokTimeEstimate:
    """
    ln(w0 / wc) / gamma: time for pure weight decay to shrink w0 to wc.

    gamma = 0 never shrinks the norm, so the estimate is infinite and
    flagged as not generalizing.
    """
    if not wc > 0 or w0 < wc:
        raise DomainError(f"need w0 >= wc > 0, got w0={w0}, wc={wc}")
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    if gamma == 0:
        return GrokTimeEstimate(time=math.inf, generalizes=False)
    return GrokTimeEstimate(time=math.log(w0 / wc) / gamma, generalizes=True)


def grok_time_geometric(L: float, h: float, theta_b: float, eta_d: float, gamma: float) -> float:
    """
    (L + h tan(theta_b)) / (eta_d gamma).

    Args:
        L: Distance in log w from the start to the generalizing region.
        h: Offset in m between the boundary crossing and the target.
        theta_b: Angle of the region boundary, in [0, pi/2).
        eta_d: Decoder learning rate.
        gamma: Weight decay.
    """
    if L < 0 or h < 0:
        raise DomainError(f"L and h must be non-negative, got L={L}, h={h}")
    if not 0 <= theta_b < math.pi / 2:
        raise DomainError(f"theta_b must lie in [0, pi/2), got {theta_b}")
    if not eta_d > 0 or not gamma > 0:
        raise DomainError(f"eta_d and gamma must be positive, got eta_d={eta_d}, gamma={gamma}")
    return (L + h * math.tan(theta_b)) / (eta_d * gamma)
