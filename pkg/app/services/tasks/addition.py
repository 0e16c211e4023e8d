"""
Toy addition in base p with scalar input representations.

Symbol i is encoded as a scalar E_i; the decoder sees E_i + E_j and must
output the fixed random 30-dimensional target vector of k = i + j.
"""

import logging

import numpy as np

from app.core.exceptions import DomainError
from app.pydantic_models.network import MLPSpec
from app.services.network.batch import Batch
from app.services.network.losses import AccuracyRule
from app.utils.constants import (
    ADDITION_DECODER_WIDTHS,
    ADDITION_TARGET_DIM,
    AccuracyMode,
    Activation,
    LossKind,
)

from .base import Task

logger = logging.getLogger(__name__)

DECODER_SPEC = MLPSpec(
    layer_widths=list(ADDITION_DECODER_WIDTHS), activation=Activation.RELU, loss=LossKind.MSE
)


def _check_messiness(m: float) -> None:
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"messiness m must lie in [0, 1], got {m}")


def make_representation(p: int, m: float, seed: int) -> np.ndarray:
    """
    E_k = m G_k + (1 - m) k with G_k ~ N(0, 1) fixed by the seed.

    m = 0 is the linear representation, m = 1 the random one.
    """
    if p < 1:
        raise DomainError(f"base p must be >= 1, got {p}")
    _check_messiness(m)
    random_part = np.random.default_rng(seed).standard_normal(p)
    linear_part = np.arange(p, dtype=np.float64)
    return m * random_part + (1.0 - m) * linear_part


def enumerate_pairs(p: int) -> np.ndarray:
    """Unordered pairs (i, j), i <= j, in lexicographic order."""
    return np.array([(i, j) for i in range(p) for j in range(i, p)], dtype=np.int64).reshape(-1, 2)


class AdditionTask(Task):
    """
    All p(p+1)/2 unordered pairs split into disjoint train and test sets.

    The representation may be replaced (it is trainable in full training
    runs); splits and output targets stay fixed per seed.
    """

    name = "addition"

    def __init__(
        self,
        p: int,
        m: float,
        seed: int,
        pairs: np.ndarray,
        representation: np.ndarray,
        output_targets: np.ndarray,
        train_indices: np.ndarray,
        test_indices: np.ndarray,
        spec: MLPSpec = DECODER_SPEC,
    ):
        self.p = p
        self.m = m
        self.seed = seed
        self.pairs = pairs
        self.sums = pairs.sum(axis=1)
        self.representation = np.asarray(representation, dtype=np.float64)
        self.output_targets = output_targets
        self.train_indices = train_indices
        self.test_indices = test_indices
        super().__init__(
            self.batch(train_indices),
            self.batch(test_indices),
            spec,
            AccuracyRule(AccuracyMode.NEAREST_TARGET, codebook=output_targets),
        )

    @property
    def n_pairs(self) -> int:
        return self.pairs.shape[0]

    def decoder_inputs(self, indices: np.ndarray, representation: np.ndarray | None = None) -> np.ndarray:
        rep = self.representation if representation is None else representation
        i, j = self.pairs[indices, 0], self.pairs[indices, 1]
        return (rep[i] + rep[j])[:, None]

    def batch(self, indices: np.ndarray, representation: np.ndarray | None = None) -> Batch:
        labels = self.sums[indices]
        return Batch(
            self.decoder_inputs(indices, representation),
            self.output_targets[labels],
            labels,
        )

    def representation_grad(self, indices: np.ndarray, input_grad: np.ndarray) -> np.ndarray:
        """Scatter dloss/d(E_i + E_j) back onto the p scalars."""
        grad = np.zeros(self.p)
        flat = np.asarray(input_grad, dtype=np.float64).reshape(-1)
        np.add.at(grad, self.pairs[indices, 0], flat)
        np.add.at(grad, self.pairs[indices, 1], flat)
        return grad

    def with_representation(self, representation: np.ndarray) -> "AdditionTask":
        representation = np.asarray(representation, dtype=np.float64)
        if representation.shape != (self.p,):
            raise DomainError(f"representation must have shape ({self.p},), got {representation.shape}")
        return AdditionTask(
            self.p,
            self.m,
            self.seed,
            self.pairs,
            representation,
            self.output_targets,
            self.train_indices,
            self.test_indices,
            self.default_spec,
        )

    def describe(self) -> dict:
        return {**super().describe(), "p": self.p, "m": self.m, "seed": self.seed}


def gen_addition_task(p: int = 10, m: float = 1.0, train_size: int = 45, seed: int = 0) -> AdditionTask:
    """
    Build the addition task.

    A seed-determined permutation picks the training pairs; output targets
    are drawn i.i.d. N(0, I_30) from a separate stream of the same seed, so
    neither depends on m.
    """
    _check_messiness(m)
    pairs = enumerate_pairs(p)
    n_pairs = pairs.shape[0]
    if not 1 <= train_size <= n_pairs:
        raise DomainError(f"train_size must lie in [1, {n_pairs}] for p={p}, got {train_size}")
    split_rng = np.random.default_rng([seed, 1])
    order = split_rng.permutation(n_pairs)
    train_indices = np.sort(order[:train_size])
    test_indices = np.sort(order[train_size:])
    targets_rng = np.random.default_rng([seed, 2])
    output_targets = targets_rng.standard_normal((2 * p - 1, ADDITION_TARGET_DIM))
    representation = make_representation(p, m, seed)
    logger.debug(f"Addition task p={p} m={m} train_size={train_size} seed={seed}")
    return AdditionTask(p, m, seed, pairs, representation, output_targets, train_indices, test_indices)
