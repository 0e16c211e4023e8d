"""
Application constants.
"""
from enum import Enum


class ConfigFile:
    """Configuration file paths."""
    PRODUCTION = "production.toml"
    DEVELOPMENT = "development.toml"
    TEST = "test.toml"


class TaskKind(str, Enum):
    """Task families the lab can build."""
    TEACHER_STUDENT = "teacher_student"
    ADDITION = "addition"
    MNIST = "mnist"

    @classmethod
    def parse(cls, value: "str | TaskKind") -> "TaskKind":
        """Accept both `teacher-student` and `teacher_student` spellings."""
        if isinstance(value, cls):
            return value
        return cls(str(value).strip().lower().replace("-", "_"))


class Activation(str, Enum):
    TANH = "tanh"
    RELU = "relu"


class LossKind(str, Enum):
    MSE = "mse"
    CROSS_ENTROPY = "cross_entropy"

    @classmethod
    def parse(cls, value: "str | LossKind") -> "LossKind":
        """`ce` is accepted as shorthand for cross entropy."""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("-", "_")
        return cls.CROSS_ENTROPY if text in ("ce", "cross_entropy") else cls(text)


class OptimizerKind(str, Enum):
    SGD = "sgd"
    ADAM = "adam"
    ADAMW = "adamw"


class AccuracyMode(str, Enum):
    REGRESSION_THRESHOLD = "regression_threshold"
    ARGMAX = "argmax"
    NEAREST_TARGET = "nearest_target"


class AxisKind(str, Enum):
    """Second axis of a reduced landscape grid."""
    DATA_SIZE = "N"
    MESSINESS = "m"


class Metric(str, Enum):
    """Columns of a run record that time_to_level can watch."""
    TRAIN_LOSS = "train_loss"
    TEST_LOSS = "test_loss"
    TRAIN_ACC = "train_acc"
    TEST_ACC = "test_acc"

    @property
    def is_loss(self) -> bool:
        return self in (Metric.TRAIN_LOSS, Metric.TEST_LOSS)


class RunStatus(str, Enum):
    COMPLETED = "completed"
    DIVERGED = "diverged"


class TrajectoryStatus(str, Enum):
    REACHED_TARGET = "reached_target"
    MAX_STEPS = "max_steps"
    LEFT_GRID = "left_grid"
    NAN_CELL = "nan_cell"


class PlotKind(str, Enum):
    CURVES = "curves"
    HEATMAP = "heatmap"
    TRAJECTORY = "trajectory"


class SweepParam(str, Enum):
    WEIGHT_DECAY = "weight_decay"
    ALPHA = "alpha"
    N_TRAIN = "n_train"
    LR = "lr"


class ExitCode:
    """Process exit codes of the command line."""
    OK = 0
    DOMAIN_ERROR = 1
    IO_ERROR = 2
    DIVERGED = 3


# Record file contract
RECORD_COLUMNS = ("step", "train_loss", "test_loss", "train_acc", "test_acc", "weight_norm")
TRAJECTORY_COLUMNS = ("t", "w", "m", "train_loss", "test_loss")

# Architectures
TEACHER_STUDENT_WIDTHS = (5, 100, 100, 5)
ADDITION_DECODER_WIDTHS = (1, 200, 200, 30)
MNIST_WIDTHS = (784, 200, 200, 10)
ADDITION_TARGET_DIM = 30

# Teacher parameters are drawn from seed ^ TEACHER_SEED_SALT
TEACHER_SEED_SALT = 0x5EED_7EAC

# IDX magic numbers
IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}

# Logging cadence: every log_every steps until GEOMETRIC_LOG_START, then x GEOMETRIC_LOG_RATIO
GEOMETRIC_LOG_START = 100
GEOMETRIC_LOG_RATIO = 1.1

# Default sweep of the teacher-student reduced curve
DEFAULT_ALPHA_GRID = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0)

# Default Euler step of the reduced flow: eta_d * gamma * dt per step, or a fixed dt without decay
DT_DECAY_PER_STEP = 1e-4
DEFAULT_DT = 0.01

# Reduced-trajectory validity conditions recorded with every trajectory
REDUCED_TRAJECTORY_ASSUMPTIONS = (
    "scale separation: the weight direction is always at its constrained optimum",
    "representation evolution is linear between the random and the linear representation",
)
