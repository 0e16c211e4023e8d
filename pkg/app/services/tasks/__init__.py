"""
Task constructors: teacher-student regression, toy addition and MNIST.
"""

from .addition import AdditionTask, enumerate_pairs, gen_addition_task, make_representation
from .base import Task, TaskMetrics
from .families import (
    AdditionMessinessFamily,
    MnistDataSizeFamily,
    MnistMessinessFamily,
    TaskFamily,
    TeacherStudentDataSizeFamily,
)
from .mnist import (
    MnistTask,
    load_mnist,
    mnist_interpolated,
    read_idx_images,
    read_idx_labels,
    subset,
    subset_test,
)
from .teacher_student import TeacherStudentTask, gen_teacher_student

__all__ = [
    "AdditionMessinessFamily",
    "AdditionTask",
    "MnistDataSizeFamily",
    "MnistMessinessFamily",
    "MnistTask",
    "Task",
    "TaskFamily",
    "TaskMetrics",
    "TeacherStudentDataSizeFamily",
    "TeacherStudentTask",
    "enumerate_pairs",
    "gen_addition_task",
    "gen_teacher_student",
    "load_mnist",
    "make_representation",
    "mnist_interpolated",
    "read_idx_images",
    "read_idx_labels",
    "subset",
    "subset_test",
]
