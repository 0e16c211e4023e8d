"""
Common interface of every supervised task the lab trains on.
"""

from typing import Any

from app.pydantic_models.network import MLPSpec
from app.services.network.batch import Batch
from app.services.network.losses import AccuracyRule, loss_value
from app.services.network.mlp import forward
from app.services.network.params import ParamVector
from app.utils.constants import LossKind


class TaskMetrics:
    """Loss and accuracy of one parameter vector on the train and test split."""

    def __init__(self, train_loss: float, test_loss: float, train_acc: float, test_acc: float):
        self.train_loss = train_loss
        self.test_loss = test_loss
        self.train_acc = train_acc
        self.test_acc = test_acc

    @property
    def train_err(self) -> float:
        return 1.0 - self.train_acc

    @property
    def test_err(self) -> float:
        return 1.0 - self.test_acc

    def as_dict(self) -> dict[str, float]:
        return {
            "train_loss": self.train_loss,
            "test_loss": self.test_loss,
            "train_acc": self.train_acc,
            "test_acc": self.test_acc,
        }


class Task:
    """
    A train/test split with its default architecture and accuracy rule.

    Tasks are immutable after construction and safe to share read-only.
    """

    name = "task"

    def __init__(self, train: Batch, test: Batch, spec: MLPSpec, accuracy_rule: AccuracyRule):
        self.train = train
        self.test = test
        self.default_spec = spec
        self.accuracy_rule = accuracy_rule

    def spec(self, loss: LossKind | str | None = None, widths: list[int] | None = None) -> MLPSpec:
        """Default architecture, optionally with another loss or hidden widths."""
        update: dict[str, Any] = {}
        if loss is not None:
            update["loss"] = LossKind.parse(loss)
        if widths is not None:
            update["layer_widths"] = list(widths)
        if not update:
            return self.default_spec
        return MLPSpec(**{**self.default_spec.model_dump(), **update})

    def evaluate_batch(self, spec: MLPSpec, p: ParamVector, batch: Batch) -> tuple[float, float]:
        """(loss, accuracy); an empty split counts as loss 0 and accuracy 1."""
        if len(batch) == 0:
            return 0.0, 1.0
        outputs = forward(spec, p, batch.inputs)
        return loss_value(outputs, batch, spec.loss), self.accuracy_rule(outputs, batch)

    def evaluate(self, spec: MLPSpec, p: ParamVector, test: Batch | None = None) -> TaskMetrics:
        train_loss, train_acc = self.evaluate_batch(spec, p, self.train)
        test_loss, test_acc = self.evaluate_batch(spec, p, self.test if test is None else test)
        return TaskMetrics(train_loss, test_loss, train_acc, test_acc)

    def describe(self) -> dict[str, Any]:
        return {
            "task": self.name,
            "n_train": len(self.train),
            "n_test": len(self.test),
            "accuracy": self.accuracy_rule.mode.value,
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n_train={len(self.train)}, n_test={len(self.test)})"
