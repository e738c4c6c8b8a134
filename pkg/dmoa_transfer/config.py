"""Experiment configuration: YAML file, command-line overrides and schema validation."""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
import itertools
import logging
from pathlib import Path
from typing import Any

import voluptuous as vol
import yaml

from .const import (
    CONF_BOOSTING_ROUNDS,
    CONF_CHANGE_DETECTION,
    CONF_CHANGES,
    CONF_CROSSOVER,
    CONF_DIMENSIONS,
    CONF_IGD_SQUARED,
    CONF_INITIAL_GENERATIONS,
    CONF_MUTATION,
    CONF_NOISE_SCALE,
    CONF_OPTIMIZER,
    CONF_OUTPUT,
    CONF_POPULATION_SIZE,
    CONF_PROBLEMS,
    CONF_REGION_MARGIN,
    CONF_SAMPLING_REGION,
    CONF_SEEDS,
    CONF_SETTINGS,
    CONF_SVR,
    CONF_TARGET_COUNT,
    CONF_TEST_COUNT,
    CONF_VARIANTS,
    CONF_WORKERS,
    DEFAULT_OPTIMIZER,
    DEFAULT_OUTPUT,
    DEFAULT_PROBLEMS,
    DEFAULT_SEED_COUNT,
    DEFAULT_SETTINGS,
    DEFAULT_VARIANTS,
    DEFAULT_WORKERS,
)
from .pyDynamicTransfer.const import (
    DEFAULT_BOOSTING_ROUNDS,
    DEFAULT_POPULATION_SIZE,
    DEFAULT_TARGET_COUNT,
    DEFAULT_TEST_COUNT,
    INITIAL_GENERATIONS,
    NOISE_SCALE,
    REGION_MARGIN,
    ChangeDetection,
    SamplingRegion,
    Variant,
)
from .pyDynamicTransfer.exceptions import UnknownOptimizer
from .pyDynamicTransfer.optimizer import get_optimizer
from .pyDynamicTransfer.problems import PROBLEMS
from .pyDynamicTransfer.runner import Cell, RunSettings

_LOGGER = logging.getLogger(__name__)


class ConfigurationError(Exception):
    """Raised when the experiment configuration cannot be used."""

    def __init__(self, message: str) -> None:
        """Raise configuration error."""
        self.message = message
        super().__init__(self.message)


def problem_name(value: Any) -> str:
    """Canonical registry name for a problem, matched case-insensitively."""
    for name in PROBLEMS:
        if name.lower() == str(value).lower():
            return name
    raise vol.Invalid(f"unknown problem '{value}'")


def optimizer_name(value: Any) -> str:
    """Lower-cased optimizer name that the registry can build."""
    try:
        get_optimizer(str(value))
    except UnknownOptimizer as err:
        raise vol.Invalid(err.message) from err
    return str(value).lower()


def even(value: int) -> int:
    """Reject odd population sizes."""
    if value % 2:
        raise vol.Invalid(f"population size must be even, got {value}")
    return value


def seed_list(value: Any) -> list[int]:
    """A seed count n expands to seeds 0..n-1."""
    if isinstance(value, int) and not isinstance(value, bool):
        if value < 1:
            raise vol.Invalid("seed count must be >= 1")
        return list(range(value))
    return vol.Schema([vol.Coerce(int)])(value)


PositiveInt = vol.All(vol.Coerce(int), vol.Range(min=1))
PositiveFloat = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))
Probability = vol.All(vol.Coerce(float), vol.Range(min=0, max=1))

SVR_SCHEMA = vol.Schema(
    {
        vol.Optional("C"): PositiveFloat,
        vol.Optional("epsilon"): vol.All(vol.Coerce(float), vol.Range(min=0)),
        vol.Optional("gamma"): PositiveFloat,
        vol.Optional("tol"): PositiveFloat,
    }
)

OPERATOR_SCHEMA = vol.Schema(
    {
        vol.Optional("eta"): vol.All(vol.Coerce(float), vol.Range(min=0)),
        vol.Optional("probability"): Probability,
    }
)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_PROBLEMS, default=DEFAULT_PROBLEMS): vol.All(
            [problem_name], vol.Length(min=1)
        ),
        vol.Optional(CONF_SETTINGS, default=DEFAULT_SETTINGS): vol.All(
            [vol.All(vol.ExactSequence([PositiveInt, PositiveInt]), tuple)],
            vol.Length(min=1),
        ),
        vol.Optional(CONF_SEEDS, default=DEFAULT_SEED_COUNT): seed_list,
        vol.Optional(CONF_POPULATION_SIZE, default=DEFAULT_POPULATION_SIZE): vol.All(
            vol.Coerce(int), vol.Range(min=2), even
        ),
        vol.Optional(CONF_BOOSTING_ROUNDS, default=DEFAULT_BOOSTING_ROUNDS): vol.All(
            vol.Coerce(int), vol.Range(min=2)
        ),
        vol.Optional(CONF_TARGET_COUNT, default=DEFAULT_TARGET_COUNT): vol.All(
            vol.Coerce(int), vol.Range(min=2)
        ),
        vol.Optional(CONF_TEST_COUNT, default=DEFAULT_TEST_COUNT): PositiveInt,
        vol.Optional(CONF_OPTIMIZER, default=DEFAULT_OPTIMIZER): optimizer_name,
        vol.Optional(CONF_VARIANTS, default=DEFAULT_VARIANTS): vol.All(
            [vol.Coerce(Variant)], vol.Length(min=1)
        ),
        vol.Optional(CONF_OUTPUT, default=DEFAULT_OUTPUT): vol.Coerce(Path),
        vol.Optional(CONF_INITIAL_GENERATIONS, default=INITIAL_GENERATIONS): PositiveInt,
        vol.Optional(CONF_CHANGES): PositiveInt,
        vol.Optional(
            CONF_CHANGE_DETECTION, default=ChangeDetection.SCHEDULE.value
        ): vol.Coerce(ChangeDetection),
        vol.Optional(CONF_IGD_SQUARED, default=False): bool,
        vol.Optional(CONF_WORKERS, default=DEFAULT_WORKERS): PositiveInt,
        vol.Optional(CONF_SVR, default=dict): SVR_SCHEMA,
        vol.Optional(CONF_NOISE_SCALE, default=NOISE_SCALE): vol.All(
            vol.Coerce(float), vol.Range(min=0)
        ),
        vol.Optional(
            CONF_SAMPLING_REGION, default=SamplingRegion.POPULATION.value
        ): vol.Coerce(SamplingRegion),
        vol.Optional(CONF_REGION_MARGIN, default=REGION_MARGIN): vol.All(
            vol.Coerce(float), vol.Range(min=0)
        ),
        vol.Optional(CONF_CROSSOVER, default=dict): OPERATOR_SCHEMA,
        vol.Optional(CONF_MUTATION, default=dict): OPERATOR_SCHEMA,
        vol.Optional(CONF_DIMENSIONS, default=dict): vol.Schema(
            {problem_name: vol.All(vol.Coerce(int), vol.Range(min=2))}
        ),
    }
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment grid plus the per-cell run settings."""

    problems: list[str]
    settings: list[tuple[int, int]]
    seeds: list[int]
    variants: list[Variant]
    output: Path
    workers: int
    run_settings: RunSettings

    def cells(self) -> Iterator[Cell]:
        """Every (problem, setting, seed, variant) combination in grid order."""
        for problem, (tau_t, n_t), seed, variant in itertools.product(
            self.problems, self.settings, self.seeds, self.variants
        ):
            yield Cell(problem, tau_t, n_t, seed, variant)

    @property
    def cell_count(self) -> int:
        """Size of the experiment grid."""
        return len(self.problems) * len(self.settings) * len(self.seeds) * len(self.variants)


def _operators(conf: Mapping[str, Any]) -> dict[str, float]:
    operators = {}
    crossover, mutation = conf[CONF_CROSSOVER], conf[CONF_MUTATION]
    if "eta" in crossover:
        operators["crossover_eta"] = crossover["eta"]
    if "probability" in crossover:
        operators["crossover_probability"] = crossover["probability"]
    if "eta" in mutation:
        operators["mutation_eta"] = mutation["eta"]
    if "probability" in mutation:
        operators["mutation_probability"] = mutation["probability"]
    return operators


def build_config(raw: Mapping[str, Any] | None) -> ExperimentConfig:
    """Validate a raw mapping and build the experiment configuration."""
    try:
        conf = CONFIG_SCHEMA(dict(raw or {}))
    except vol.Invalid as err:
        raise ConfigurationError(f"Invalid configuration: {err}") from err

    if conf[CONF_TEST_COUNT] < conf[CONF_POPULATION_SIZE]:
        raise ConfigurationError(
            f"{CONF_TEST_COUNT} must be at least {CONF_POPULATION_SIZE}"
        )
    run_settings = RunSettings(
        population_size=conf[CONF_POPULATION_SIZE],
        boosting_rounds=conf[CONF_BOOSTING_ROUNDS],
        target_count=conf[CONF_TARGET_COUNT],
        test_count=conf[CONF_TEST_COUNT],
        optimizer=conf[CONF_OPTIMIZER],
        initial_generations=conf[CONF_INITIAL_GENERATIONS],
        changes=conf.get(CONF_CHANGES),
        change_detection=conf[CONF_CHANGE_DETECTION],
        igd_squared=conf[CONF_IGD_SQUARED],
        noise_scale=conf[CONF_NOISE_SCALE],
        sampling_region=conf[CONF_SAMPLING_REGION],
        region_margin=conf[CONF_REGION_MARGIN],
        svr=dict(conf[CONF_SVR]),
        operators=_operators(conf),
        dimensions=dict(conf[CONF_DIMENSIONS]),
    )
    return ExperimentConfig(
        problems=list(dict.fromkeys(conf[CONF_PROBLEMS])),
        settings=list(dict.fromkeys(conf[CONF_SETTINGS])),
        seeds=list(dict.fromkeys(conf[CONF_SEEDS])),
        variants=list(dict.fromkeys(conf[CONF_VARIANTS])),
        output=conf[CONF_OUTPUT],
        workers=conf[CONF_WORKERS],
        run_settings=run_settings,
    )


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Raw mapping from a YAML file."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = yaml.safe_load(handle)
    except OSError as err:
        raise ConfigurationError(f"Cannot read configuration {path}: {err}") from err
    except yaml.YAMLError as err:
        raise ConfigurationError(f"Malformed configuration {path}: {err}") from err
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"Configuration {path} must be a mapping")
    return raw


def apply_overrides(raw: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Merge command-line overrides over the file values.

    tau_t and n_t replace that component in every configured setting.
    """
    merged = dict(raw)
    for key, value in overrides.items():
        if value is None or key in ("tau_t", "n_t"):
            continue
        merged[key] = value
    tau_t, n_t = overrides.get("tau_t"), overrides.get("n_t")
    if tau_t is not None or n_t is not None:
        settings = merged.get(CONF_SETTINGS, DEFAULT_SETTINGS)
        merged[CONF_SETTINGS] = [
            [tau_t if tau_t is not None else pair[0], n_t if n_t is not None else pair[1]]
            for pair in settings
        ]
    return merged


def load_config(
    path: str | Path | None = None, overrides: Mapping[str, Any] | None = None
) -> ExperimentConfig:
    """Read, merge and validate; fails before any cell runs."""
    raw = read_config_file(path) if path is not None else {}
    config = build_config(apply_overrides(raw, overrides or {}))
    _LOGGER.debug(
        "Loaded configuration with %d cells into %s", config.cell_count, config.output
    )
    return config
