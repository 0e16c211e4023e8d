"""
Task families: one task per value of a landscape grid's second axis.
"""

from typing import Any

from app.utils.constants import AxisKind

from .addition import gen_addition_task
from .base import Task
from .mnist import MnistTask, mnist_interpolated, subset
from .teacher_student import gen_teacher_student


class TaskFamily:
    """Builds the task of one grid column; must be picklable for process pools."""

    axis_kind: AxisKind = AxisKind.MESSINESS

    def build(self, value: float) -> Task:
        raise NotImplementedError

    def describe(self) -> dict[str, Any]:
        return {"family": type(self).__name__, "axis": self.axis_kind.value}


class AdditionMessinessFamily(TaskFamily):
    """(w, m) grids of the addition task; split, targets and G fixed by seed."""

    axis_kind = AxisKind.MESSINESS

    def __init__(self, p: int = 10, train_size: int = 45, seed: int = 0):
        self.p = p
        self.train_size = train_size
        self.seed = seed

    def build(self, value: float) -> Task:
        return gen_addition_task(self.p, float(value), self.train_size, self.seed)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "task": "addition", "p": self.p,
                "train_size": self.train_size, "seed": self.seed}


class MnistDataSizeFamily(TaskFamily):
    """(w, N) grids: the training set is re-subsetted per N with a fixed seed."""

    axis_kind = AxisKind.DATA_SIZE

    def __init__(self, task: MnistTask, seed: int = 0):
        self.task = task
        self.seed = seed

    def build(self, value: float) -> Task:
        return subset(self.task, int(value), self.seed)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "task": "mnist", "seed": self.seed}


class MnistMessinessFamily(TaskFamily):
    """(w, m) grids over raw versus label-constant images."""

    axis_kind = AxisKind.MESSINESS

    def __init__(self, task: MnistTask):
        self.task = task

    def build(self, value: float) -> Task:
        return mnist_interpolated(self.task, float(value))

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "task": "mnist"}


class TeacherStudentDataSizeFamily(TaskFamily):
    """(w, N) grids of the teacher-student task with a fixed test set."""

    axis_kind = AxisKind.DATA_SIZE

    def __init__(self, seed: int = 0, n_test: int = 100, theta: float = 0.01):
        self.seed = seed
        self.n_test = n_test
        self.theta = theta

    def build(self, value: float) -> Task:
        return gen_teacher_student(self.seed, int(value), self.n_test, self.theta)

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "task": "teacher_student", "seed": self.seed,
                "n_test": self.n_test}
