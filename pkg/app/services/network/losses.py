"""
Losses and accuracy metrics.
"""

import numpy as np

from app.core.exceptions import DomainError
from app.utils.constants import AccuracyMode, LossKind

from .batch import Batch


def _check_outputs(Y: np.ndarray, batch: Batch) -> np.ndarray:
    Y = np.asarray(Y, dtype=np.float64)
    if Y.shape != batch.targets.shape:
        raise DomainError(f"outputs {Y.shape} do not match targets {batch.targets.shape}")
    return Y


def _labels(batch: Batch, what: str) -> np.ndarray:
    if batch.labels is None:
        raise DomainError(f"{what} requires integer labels")
    return batch.labels


def _log_softmax(Y: np.ndarray) -> np.ndarray:
    shifted = Y - Y.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def loss_value(Y: np.ndarray, batch: Batch, kind: LossKind | str) -> float:
    """
    mse: mean over samples and output dims of the squared error.
    cross_entropy: mean over samples of -log softmax(Y)[label].
    """
    Y = _check_outputs(Y, batch)
    kind = LossKind.parse(kind)
    if kind == LossKind.MSE:
        return float(np.mean((Y - batch.targets) ** 2))
    labels = _labels(batch, "cross entropy")
    log_probs = _log_softmax(Y)
    return float(-np.mean(log_probs[np.arange(Y.shape[0]), labels]))


def loss_output_grad(Y: np.ndarray, batch: Batch, kind: LossKind | str) -> np.ndarray:
    """Gradient of loss_value with respect to the outputs Y."""
    Y = _check_outputs(Y, batch)
    kind = LossKind.parse(kind)
    if kind == LossKind.MSE:
        return 2.0 * (Y - batch.targets) / Y.size
    labels = _labels(batch, "cross entropy")
    probs = np.exp(_log_softmax(Y))
    probs[np.arange(Y.shape[0]), labels] -= 1.0
    return probs / Y.shape[0]


class AccuracyRule:
    """
    How a task turns outputs into right/wrong decisions.

    regression_threshold: max-norm error below theta.
    argmax: argmax of the output row equals the label.
    nearest_target: the nearest codebook row equals the label.
    """

    def __init__(
        self,
        mode: AccuracyMode | str,
        theta: float = 0.01,
        codebook: np.ndarray | None = None,
    ):
        self.mode = AccuracyMode(mode)
        if self.mode == AccuracyMode.REGRESSION_THRESHOLD and not theta > 0:
            raise DomainError(f"theta must be positive, got {theta}")
        if self.mode == AccuracyMode.NEAREST_TARGET and codebook is None:
            raise DomainError("nearest_target accuracy needs a codebook")
        self.theta = float(theta)
        self.codebook = None if codebook is None else np.asarray(codebook, dtype=np.float64)

    def __call__(self, Y: np.ndarray, batch: Batch) -> float:
        return accuracy(Y, batch, self.mode, theta=self.theta, codebook=self.codebook)

    def __repr__(self) -> str:
        return f"AccuracyRule({self.mode.value}, theta={self.theta})"


def accuracy(
    Y: np.ndarray,
    batch: Batch,
    mode: AccuracyMode | str,
    theta: float = 0.01,
    codebook: np.ndarray | None = None,
) -> float:
    """Fraction of correctly handled samples; ties go to the lowest index."""
    Y = _check_outputs(Y, batch)
    mode = AccuracyMode(mode)
    if len(batch) == 0:
        return 0.0
    if mode == AccuracyMode.REGRESSION_THRESHOLD:
        errors = np.max(np.abs(Y - batch.targets), axis=1)
        return float(np.mean(errors < theta))
    labels = _labels(batch, f"{mode.value} accuracy")
    if mode == AccuracyMode.ARGMAX:
        predicted = np.argmax(Y, axis=1)
    else:
        if codebook is None:
            raise DomainError("nearest_target accuracy needs a codebook")
        distances = ((Y[:, None, :] - codebook[None, :, :]) ** 2).sum(axis=2)
        predicted = np.argmin(distances, axis=1)
    return float(np.mean(predicted == labels))
