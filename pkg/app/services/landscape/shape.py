"""
L/U shape diagnostics of reduced curves.
"""

from app.core.exceptions import DomainError
from app.pydantic_models.landscape import ReducedCurve, ShapeMetrics

MIN_SHAPE_POINTS = 5


def shape_metrics(
    curve: ReducedCurve,
    tau_L: float = 0.02,
    tau_U: float | None = None,
    tau_M: float | None = None,
) -> ShapeMetrics:
    """
    Decide whether the train curve is L-shaped and the test curve U-shaped.

    Args:
        curve: Reduced curve; failed points are ignored.
        tau_L: Largest allowed increase between consecutive train losses.
        tau_U: Margin both test endpoints must exceed the test minimum by.
            Defaults to 0.05 times the test-loss range.
        tau_M: Test-minus-train gap above which alpha counts as mismatched.
            Defaults to 0.1 times the range of all train and test losses.

    Returns:
        ShapeMetrics with the argmin alpha of the test loss and the alpha
        interval spanned by mismatched points (None when there is none).
    """
    points = curve.valid_points()
    if len(points) < MIN_SHAPE_POINTS:
        raise DomainError(f"shape metrics need at least {MIN_SHAPE_POINTS} valid points, got {len(points)}")
    alphas = [point.alpha for point in points]
    train = [point.train_loss for point in points]
    test = [point.test_loss for point in points]

    if tau_U is None:
        tau_U = 0.05 * (max(test) - min(test))
    if tau_M is None:
        tau_M = 0.1 * (max(train + test) - min(train + test))

    is_L = all(later <= earlier + tau_L for earlier, later in zip(train, train[1:]))
    best = min(range(len(test)), key=test.__getitem__)
    is_U = test[0] > test[best] + tau_U and test[-1] > test[best] + tau_U

    mismatched = [alpha for alpha, tr, te in zip(alphas, train, test) if te - tr > tau_M]
    mismatch_region = (min(mismatched), max(mismatched)) if mismatched else None

    return ShapeMetrics(
        argmin_alpha=alphas[best],
        is_L=is_L,
        is_U=is_U,
        mismatch_region=mismatch_region,
        tau_L=tau_L,
        tau_U=tau_U,
        tau_M=tau_M,
    )
