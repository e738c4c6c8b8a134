"""Constants for the dynamic transfer experiment runner."""

DOMAIN = "dmoa_transfer"

CONF_PROBLEMS = "problems"
CONF_SETTINGS = "settings"
CONF_SEEDS = "seeds"
CONF_POPULATION_SIZE = "population_size"
CONF_BOOSTING_ROUNDS = "boosting_rounds"
CONF_TARGET_COUNT = "target_count"
CONF_TEST_COUNT = "test_count"
CONF_OPTIMIZER = "optimizer"
CONF_VARIANTS = "variants"
CONF_OUTPUT = "output"
CONF_INITIAL_GENERATIONS = "initial_generations"
CONF_CHANGES = "changes"
CONF_CHANGE_DETECTION = "change_detection"
CONF_IGD_SQUARED = "igd_squared"
CONF_WORKERS = "workers"
CONF_SVR = "svr"
CONF_NOISE_SCALE = "noise_scale"
CONF_SAMPLING_REGION = "sampling_region"
CONF_REGION_MARGIN = "region_margin"
CONF_CROSSOVER = "crossover"
CONF_MUTATION = "mutation"
CONF_DIMENSIONS = "dimensions"

DEFAULT_PROBLEMS = ["FDA1", "FDA2", "FDA3", "FDA4", "FDA5", "dMOP1", "dMOP2", "dMOP3"]
DEFAULT_SETTINGS = [[5, 10], [10, 10]]
DEFAULT_SEED_COUNT = 10
DEFAULT_OPTIMIZER = "nsga2"
DEFAULT_VARIANTS = ["rtlp", "plain"]
DEFAULT_OUTPUT = "results"
DEFAULT_WORKERS = 1

SUMMARY_FILE = "summary.csv"
ABLATION_FILE = "ablation.csv"
CELL_FILE_GLOB = "*_*_*_*_*.csv"

SUMMARY_COLUMNS = [
    "problem",
    "tau_t",
    "n_t",
    "variant",
    "migd_mean",
    "migd_std",
    "ms_mean",
    "ms_std",
    "n_seeds",
]

LOG_FORMAT = "%(log_color)s%(asctime)s %(levelname)-8s%(reset)s %(name)s: %(message)s"
