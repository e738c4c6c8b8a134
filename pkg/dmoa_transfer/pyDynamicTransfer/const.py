"""Constants for the Dynamic Transfer Library"""

from enum import Enum

DEFAULT_POPULATION_SIZE = 100
DEFAULT_BOOSTING_ROUNDS = 10
DEFAULT_TARGET_COUNT = 50
DEFAULT_TEST_COUNT = 500
INITIAL_GENERATIONS = 50

# Weak learner defaults (gamma defaults to 1/n when unset)
SVR_C = 1.0
SVR_EPSILON = 0.1
SVR_TOL = 1e-3
SVR_PASSES = 10

BETA_FLOOR = 1e-10
BETA_CEIL = 1.0 - 1e-10
HYPOTHESIS_ERROR_LIMIT = 0.5

NOISE_SCALE = 0.05
REGION_MARGIN = 0.1

SBX_ETA = 20.0
SBX_PROBABILITY = 0.9
SBX_MIN_GAP = 1e-14
PM_ETA = 20.0

POF_POINTS_2D = 500
POF_GRID_3D = 32

CHANGE_TOLERANCE = 1e-12
SENTINEL_FRACTION = 0.1

SHIFT_CONSTANT = 2.0


class ChangeType(Enum):
    """How an environment change moves the optimal sets"""

    TYPE_I = "TypeI"  # POS moves, POF fixed
    TYPE_II = "TypeII"  # both move
    TYPE_III = "TypeIII"  # POF moves, POS fixed


class Domain(Enum):
    """Which environment a training sample was evaluated in"""

    SOURCE = 0
    TARGET = 1


class Variant(Enum):
    """How the initial population of a new environment is obtained"""

    RTLP = "rtlp"
    PLAIN = "plain"
    RANDOM_RESTART = "random-restart"


class ChangeDetection(Enum):
    """Environment change trigger"""

    SCHEDULE = "schedule"
    SENTINEL = "sentinel"


class SamplingRegion(Enum):
    """Where target samples and screening candidates are drawn from"""

    BOX = "box"  # the whole decision box
    POPULATION = "population"  # around the previous population, which also joins the pool


class TaskKind(Enum):
    """Synthetic regression transfer task shapes"""

    IDENTICAL = "identical"
    SHIFTED = "shifted"
    UNRELATED = "unrelated"
