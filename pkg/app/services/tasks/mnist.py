"""
MNIST ingestion from IDX files, subsetting and representation interpolation.

IDX layout (big-endian):
  images: magic 0x00000803, count, rows, cols, then count*rows*cols bytes
  labels: magic 0x00000801, count, then count bytes
Files may be gzip-compressed (a `.gz` suffix is tried automatically).
"""

import gzip
import logging
import struct
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from app.core.exceptions import (
    BadMagicError,
    DomainError,
    IngestionError,
    MissingFileError,
    TruncatedPayloadError,
)
from app.pydantic_models.network import MLPSpec
from app.services.network.batch import Batch
from app.services.network.losses import AccuracyRule
from app.utils.constants import (
    IDX_IMAGES_MAGIC,
    IDX_LABELS_MAGIC,
    MNIST_FILES,
    MNIST_WIDTHS,
    AccuracyMode,
    Activation,
    LossKind,
)

from .base import Task

logger = logging.getLogger(__name__)

N_CLASSES = 10
# label y is shown to the network as the constant image y / LINEAR_SCALE
LINEAR_SCALE = 9.0


class MnistTask(Task):
    """Flattened images scaled to [0, 1] with one-hot targets."""

    name = "mnist"

    def __init__(self, train: Batch, test: Batch, loss: LossKind = LossKind.MSE, source: str = ""):
        widths = list(MNIST_WIDTHS)
        widths[0] = train.inputs.shape[1]
        spec = MLPSpec(layer_widths=widths, activation=Activation.RELU, loss=loss)
        super().__init__(train, test, spec, AccuracyRule(AccuracyMode.ARGMAX))
        self.source = source

    def replace(self, train: Batch | None = None, test: Batch | None = None) -> "MnistTask":
        return MnistTask(
            self.train if train is None else train,
            self.test if test is None else test,
            self.default_spec.loss,
            self.source,
        )

    def describe(self) -> dict:
        return {**super().describe(), "source": self.source}


def _open(path: Path):
    if path.exists():
        return gzip.open(path, "rb") if path.suffix == ".gz" else open(path, "rb")
    gz_path = path.with_name(path.name + ".gz")
    if gz_path.exists():
        return gzip.open(gz_path, "rb")
    raise MissingFileError(path, "file not found")


def _read_header(stream, path: Path, fields: int) -> tuple[int, ...]:
    raw = stream.read(4 * fields)
    if len(raw) < 4 * fields:
        raise TruncatedPayloadError(path, f"header needs {4 * fields} bytes, found {len(raw)}")
    return struct.unpack(f">{fields}I", raw)


def read_idx_images(path: str | Path) -> np.ndarray:
    """count x (rows*cols) uint8 matrix."""
    path = Path(path)
    with _open(path) as stream:
        magic, count, rows, cols = _read_header(stream, path, 4)
        if magic != IDX_IMAGES_MAGIC:
            raise BadMagicError(path, f"expected image magic {IDX_IMAGES_MAGIC}, found {magic}")
        expected = count * rows * cols
        payload = stream.read(expected)
    if len(payload) < expected:
        raise TruncatedPayloadError(path, f"expected {expected} pixel bytes, found {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(count, rows * cols)


def read_idx_labels(path: str | Path) -> np.ndarray:
    path = Path(path)
    with _open(path) as stream:
        magic, count = _read_header(stream, path, 2)
        if magic != IDX_LABELS_MAGIC:
            raise BadMagicError(path, f"expected label magic {IDX_LABELS_MAGIC}, found {magic}")
        payload = stream.read(count)
    if len(payload) < count:
        raise TruncatedPayloadError(path, f"expected {count} labels, found {len(payload)}")
    labels = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
    if labels.size and labels.max() >= N_CLASSES:
        raise IngestionError(path, f"label {int(labels.max())} outside 0..{N_CLASSES - 1}")
    return labels


def one_hot(labels: np.ndarray, n_classes: int = N_CLASSES) -> np.ndarray:
    targets = np.zeros((labels.shape[0], n_classes))
    targets[np.arange(labels.shape[0]), labels] = 1.0
    return targets


def _mnist_batch(images_path: Path, labels_path: Path) -> Batch:
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise IngestionError(
            labels_path, f"{labels.shape[0]} labels for {images.shape[0]} images in {images_path}"
        )
    return Batch(images.astype(np.float64) / 255.0, one_hot(labels), labels)


def resolve_idx_paths(idx_paths: str | Path | Mapping[str, str | Path]) -> dict[str, Path]:
    """A directory holding the four standard files, or an explicit mapping."""
    if isinstance(idx_paths, Mapping):
        missing = set(MNIST_FILES) - set(idx_paths)
        if missing:
            raise DomainError(f"missing IDX paths for {sorted(missing)}")
        return {key: Path(idx_paths[key]) for key in MNIST_FILES}
    directory = Path(idx_paths)
    return {key: directory / name for key, name in MNIST_FILES.items()}


def load_mnist(
    idx_paths: str | Path | Mapping[str, str | Path], loss: LossKind | str = LossKind.MSE
) -> MnistTask:
    paths = resolve_idx_paths(idx_paths)
    train = _mnist_batch(paths["train_images"], paths["train_labels"])
    test = _mnist_batch(paths["test_images"], paths["test_labels"])
    logger.info(f"Loaded MNIST: {len(train)} train / {len(test)} test samples")
    source = str(paths["train_images"].parent)
    return MnistTask(train, test, LossKind.parse(loss), source)


def _sample(n_total: int, n: int, seed: int, what: str) -> np.ndarray:
    if not 1 <= n <= n_total:
        raise DomainError(f"{what} size must lie in [1, {n_total}], got {n}")
    return np.sort(np.random.default_rng(seed).choice(n_total, size=n, replace=False))


def subset(task: MnistTask, n: int, seed: int) -> MnistTask:
    """Uniform training subset of size n, without replacement."""
    return task.replace(train=task.train.take(_sample(len(task.train), n, seed, "training subset")))


def subset_test(task: MnistTask, n: int, seed: int) -> MnistTask:
    """Uniform test subset of size n, used to keep evaluation cheap."""
    return task.replace(test=task.test.take(_sample(len(task.test), n, seed, "test subset")))


def _interpolate(batch: Batch, m: float) -> Batch:
    linear = np.broadcast_to((batch.labels / LINEAR_SCALE)[:, None], batch.inputs.shape)
    return batch.with_inputs(m * batch.inputs + (1.0 - m) * linear)


def mnist_interpolated(task: MnistTask, m: float) -> MnistTask:
    """
    Inputs become m * raw + (1 - m) * (constant image of value label / 9),
    on both splits.
    """
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"messiness m must lie in [0, 1], got {m}")
    return task.replace(train=_interpolate(task.train, m), test=_interpolate(task.test, m))
