"""
Teacher-student regression: targets come from a fixed random network of the
same architecture as the student.
"""

import logging

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.network import MLPSpec
from app.services.network.batch import Batch
from app.services.network.losses import AccuracyRule
from app.services.network.mlp import forward
from app.services.network.params import ParamVector, init_params
from app.utils.constants import (
    TEACHER_SEED_SALT,
    TEACHER_STUDENT_WIDTHS,
    AccuracyMode,
    Activation,
    LossKind,
)

from .base import Task

logger = logging.getLogger(__name__)

TEACHER_SPEC = MLPSpec(
    layer_widths=list(TEACHER_STUDENT_WIDTHS), activation=Activation.TANH, loss=LossKind.MSE
)


class TeacherStudentTask(Task):
    """Gaussian inputs labelled by a standard-initialised teacher (alpha = 1)."""

    name = "teacher_student"

    def __init__(
        self,
        teacher_spec: MLPSpec,
        teacher_params: ParamVector,
        train: Batch,
        test: Batch,
        theta: float,
        seed: int,
    ):
        super().__init__(
            train,
            test,
            teacher_spec,
            AccuracyRule(AccuracyMode.REGRESSION_THRESHOLD, theta=theta),
        )
        self.teacher_spec = teacher_spec
        self.teacher_params = teacher_params
        self.theta = theta
        self.seed = seed

    def describe(self) -> dict:
        return {**super().describe(), "seed": self.seed, "theta": self.theta}


def teacher_seed(seed: int) -> int:
    return int(seed) ^ TEACHER_SEED_SALT


def gen_teacher_student(
    seed: int = 0,
    n_train: int = 100,
    n_test: int = 100,
    theta: float = 0.01,
    spec: MLPSpec = TEACHER_SPEC,
) -> TeacherStudentTask:
    """
    Build the task.

    Test inputs are drawn before training inputs, so changing n_train keeps
    the test set and grows the training set by appending rows.
    """
    if n_train < 1 or n_test < 1:
        raise DomainError(f"n_train and n_test must be >= 1, got {n_train} and {n_test}")
    teacher_params = init_params(spec, teacher_seed(seed))
    rng = np.random.default_rng(seed)
    test_inputs = rng.standard_normal((n_test, spec.input_width))
    train_inputs = rng.standard_normal((n_train, spec.input_width))
    train = Batch(train_inputs, forward(spec, teacher_params, train_inputs))
    test = Batch(test_inputs, forward(spec, teacher_params, test_inputs))
    logger.debug(
        f"Teacher-student task seed={seed}: n_train={n_train} n_test={n_test}, "
        f"teacher norm {teacher_params.norm:.4g}"
    )
    return TeacherStudentTask(spec, teacher_params, train, test, theta, seed)
