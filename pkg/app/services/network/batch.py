"""
Input/target bundles fed to the network.
"""

import numpy as np

from app.core.exceptions import DomainError


class Batch:
    """
    Inputs, targets and (optionally) integer class labels of N samples.

    All arrays are stored as 64-bit; row counts must agree.
    """

    def __init__(
        self,
        inputs: np.ndarray,
        targets: np.ndarray,
        labels: np.ndarray | None = None,
    ):
        inputs = np.asarray(inputs, dtype=np.float64)
        targets = np.asarray(targets, dtype=np.float64)
        if inputs.ndim != 2 or targets.ndim != 2:
            raise DomainError(
                f"inputs and targets must be matrices, got shapes {inputs.shape} and {targets.shape}"
            )
        if inputs.shape[0] != targets.shape[0]:
            raise DomainError(
                f"row counts differ: {inputs.shape[0]} inputs vs {targets.shape[0]} targets"
            )
        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
            if labels.shape != (inputs.shape[0],):
                raise DomainError(
                    f"labels must have shape ({inputs.shape[0]},), got {labels.shape}"
                )
        self.inputs = inputs
        self.targets = targets
        self.labels = labels

    def __len__(self) -> int:
        return self.inputs.shape[0]

    def take(self, indices: np.ndarray) -> "Batch":
        """Row subset, in the given order."""
        labels = self.labels[indices] if self.labels is not None else None
        return Batch(self.inputs[indices], self.targets[indices], labels)

    def with_inputs(self, inputs: np.ndarray) -> "Batch":
        return Batch(inputs, self.targets, self.labels)

    def __repr__(self) -> str:
        return f"Batch(n={len(self)}, d_in={self.inputs.shape[1]}, d_out={self.targets.shape[1]})"
