"""
Task construction from an ExperimentConfig.
"""

import logging
from functools import lru_cache

from app.core.exceptions import DomainError
from app.pydantic_models.experiment import ExperimentConfig
from app.services.tasks.addition import gen_addition_task
from app.services.tasks.base import Task
from app.services.tasks.mnist import MnistTask, load_mnist, subset, subset_test
from app.services.tasks.teacher_student import gen_teacher_student
from app.utils.constants import LossKind, TaskKind

logger = logging.getLogger(__name__)

DEFAULT_N_TRAIN = {
    TaskKind.TEACHER_STUDENT: 100,
    TaskKind.ADDITION: 45,
    TaskKind.MNIST: 1000,
}


@lru_cache(maxsize=2)
def _load_mnist_cached(directory: str, loss: LossKind) -> MnistTask:
    return load_mnist(directory, loss)


def build_task(config: ExperimentConfig) -> Task:
    """
    Build the task a config describes.

    MNIST needs `mnist_dir`; the training set is subsetted to n_train and
    the test set to test_subset, both with the run seed.
    """
    n_train = config.n_train or DEFAULT_N_TRAIN[config.task]
    if config.task == TaskKind.TEACHER_STUDENT:
        return gen_teacher_student(config.seed, n_train, config.n_test, config.theta)
    if config.task == TaskKind.ADDITION:
        return gen_addition_task(config.p, config.messiness, n_train, config.seed)

    task = subset(mnist_source(config), n_train, config.seed)
    logger.info(f"MNIST run uses {n_train} train and {len(task.test)} test samples (subset seed {config.seed})")
    return task


def mnist_source(config: ExperimentConfig) -> MnistTask:
    """Full MNIST training set with the test set cut to test_subset."""
    if not config.mnist_dir:
        raise DomainError("no MNIST directory: pass --mnist-dir or set GROKLAB_MNIST_DIR")
    full = _load_mnist_cached(config.mnist_dir, config.loss or LossKind.MSE)
    if config.test_subset < len(full.test):
        return subset_test(full, config.test_subset, config.seed)
    return full
