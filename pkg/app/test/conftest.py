"""
Pytest configuration and shared fixtures.
"""
import gzip
import struct
from pathlib import Path

import numpy as np
import pytest

from app.core.config import ConfigFile, get_config
from app.pydantic_models.network import MLPSpec
from app.services.network.batch import Batch
from app.services.tasks.teacher_student import gen_teacher_student
from app.utils.constants import IDX_IMAGES_MAGIC, IDX_LABELS_MAGIC, MNIST_FILES, Activation, LossKind


@pytest.fixture(scope="session")
def test_config():
    """
    Get test configuration.

    Logging is configured from test.toml as a side effect.
    """
    return get_config(ConfigFile.TEST)


@pytest.fixture
def small_spec() -> MLPSpec:
    return MLPSpec(layer_widths=[3, 5, 4, 2], activation=Activation.TANH, loss=LossKind.MSE)


@pytest.fixture
def small_batch() -> Batch:
    rng = np.random.default_rng(7)
    inputs = rng.standard_normal((8, 3))
    labels = rng.integers(0, 2, size=8)
    targets = np.eye(2)[labels]
    return Batch(inputs, targets, labels)


@pytest.fixture
def tiny_teacher_student():
    """Teacher-student task with a few samples; students use `tiny_student_spec`."""
    return gen_teacher_student(seed=0, n_train=12, n_test=12)


@pytest.fixture
def tiny_student_spec(tiny_teacher_student) -> MLPSpec:
    return tiny_teacher_student.spec(widths=[5, 8, 5])


def write_idx_images(path: Path, images: np.ndarray, magic: int = IDX_IMAGES_MAGIC, compress: bool = False) -> Path:
    count, rows, cols = images.shape
    payload = struct.pack(">4I", magic, count, rows, cols) + images.astype(np.uint8).tobytes()
    opener = gzip.open if compress else open
    with opener(path, "wb") as stream:
        stream.write(payload)
    return path


def write_idx_labels(path: Path, labels: np.ndarray, magic: int = IDX_LABELS_MAGIC, compress: bool = False) -> Path:
    payload = struct.pack(">2I", magic, labels.shape[0]) + labels.astype(np.uint8).tobytes()
    opener = gzip.open if compress else open
    with opener(path, "wb") as stream:
        stream.write(payload)
    return path


@pytest.fixture
def mnist_dir(tmp_path) -> Path:
    """
    A directory of four IDX files with 4x4 images: 60 train and 30 test
    samples, pixel value 16 * label + noise.
    """
    rng = np.random.default_rng(3)
    for split, count in (("train", 60), ("test", 30)):
        labels = np.arange(count) % 10
        images = (16 * labels[:, None, None] + rng.integers(0, 8, size=(count, 4, 4))).astype(np.uint8)
        write_idx_images(tmp_path / MNIST_FILES[f"{split}_images"], images)
        write_idx_labels(tmp_path / MNIST_FILES[f"{split}_labels"], labels)
    return tmp_path
