"""Aggregation of per-cell CSV reports into summary and ablation tables."""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from .const import ABLATION_FILE, CELL_FILE_GLOB, SUMMARY_COLUMNS, SUMMARY_FILE
from .pyDynamicTransfer.const import Variant
from .pyDynamicTransfer.metrics import REPORT_COLUMNS

_LOGGER = logging.getLogger(__name__)

CELL_KEYS = ["problem", "tau_t", "n_t", "variant"]
ABLATION_COLUMNS = [
    "problem",
    "tau_t",
    "n_t",
    "migd_plain",
    "migd_rtlp",
    "migd_improvement_pct",
    "ms_plain",
    "ms_rtlp",
    "ms_change_pct",
]


class ReportError(Exception):
    """Raised when a results directory holds nothing to aggregate."""


def load_runs(directory: str | Path) -> pd.DataFrame:
    """Concatenate every per-cell CSV in `directory`."""
    directory = Path(directory)
    frames = [
        pd.read_csv(path)
        for path in sorted(directory.glob(CELL_FILE_GLOB))
        if path.name not in (SUMMARY_FILE, ABLATION_FILE)
    ]
    frames = [frame for frame in frames if list(frame.columns) == REPORT_COLUMNS]
    if not frames:
        raise ReportError(f"No run reports found in {directory}")
    _LOGGER.debug("Loaded %d run reports from %s", len(frames), directory)
    return pd.concat(frames, ignore_index=True)


def per_seed(runs: pd.DataFrame) -> pd.DataFrame:
    """MIGD and mean MS of each run."""
    return (
        runs.groupby([*CELL_KEYS, "seed"], sort=True)
        .agg(migd=("igd", "mean"), ms=("ms", "mean"))
        .reset_index()
    )


def summarize(runs: pd.DataFrame) -> pd.DataFrame:
    """Mean and standard deviation over seeds per (problem, setting, variant)."""
    seeds = per_seed(runs)
    summary = (
        seeds.groupby(CELL_KEYS, sort=True)
        .agg(
            migd_mean=("migd", "mean"),
            migd_std=("migd", "std"),
            ms_mean=("ms", "mean"),
            ms_std=("ms", "std"),
            n_seeds=("seed", "nunique"),
        )
        .reset_index()
    )
    summary[["migd_std", "ms_std"]] = summary[["migd_std", "ms_std"]].fillna(0.0)
    return summary[SUMMARY_COLUMNS]


def ablation(summary: pd.DataFrame) -> pd.DataFrame:
    """Relative MIGD improvement and MS change of transfer seeding over the plain variant."""
    setting = ["problem", "tau_t", "n_t"]
    plain = summary[summary["variant"] == Variant.PLAIN.value].set_index(setting)
    rtlp = summary[summary["variant"] == Variant.RTLP.value].set_index(setting)
    joined = plain[["migd_mean", "ms_mean"]].join(
        rtlp[["migd_mean", "ms_mean"]], lsuffix="_plain", rsuffix="_rtlp", how="inner"
    )
    table = pd.DataFrame(
        {
            "migd_plain": joined["migd_mean_plain"],
            "migd_rtlp": joined["migd_mean_rtlp"],
            "migd_improvement_pct": 100.0
            * (joined["migd_mean_plain"] - joined["migd_mean_rtlp"])
            / joined["migd_mean_plain"],
            "ms_plain": joined["ms_mean_plain"],
            "ms_rtlp": joined["ms_mean_rtlp"],
            "ms_change_pct": 100.0
            * (joined["ms_mean_rtlp"] - joined["ms_mean_plain"])
            / joined["ms_mean_plain"],
        }
    )
    return table.reset_index()[ABLATION_COLUMNS]


def mark_best(summary: pd.DataFrame) -> pd.DataFrame:
    """Flag the lowest-MIGD and highest-MS variant of each problem and setting."""
    marked = summary.copy()
    setting = marked.groupby(["problem", "tau_t", "n_t"], sort=False)
    marked["best_migd"] = marked["migd_mean"] == setting["migd_mean"].transform("min")
    marked["best_ms"] = marked["ms_mean"] == setting["ms_mean"].transform("max")
    return marked


def format_summary(summary: pd.DataFrame) -> str:
    """Printable table as mean(std), best entries starred."""
    marked = mark_best(summary)
    lines = []
    for row in marked.itertuples(index=False):
        migd = f"{row.migd_mean:.4e}({row.migd_std:.2e}){'*' if row.best_migd else ''}"
        ms = f"{row.ms_mean:.4f}({row.ms_std:.2e}){'*' if row.best_ms else ''}"
        lines.append(
            f"{row.problem:<6} ({row.tau_t:>2},{row.n_t:>2}) {row.variant:<15} "
            f"MIGD {migd:<24} MS {ms:<20} seeds={row.n_seeds}"
        )
    return "\n".join(lines)


def write_report(directory: str | Path) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Write summary.csv and ablation.csv next to the run reports."""
    directory = Path(directory)
    summary = summarize(load_runs(directory))
    table = ablation(summary)
    summary.to_csv(directory / SUMMARY_FILE, index=False)
    table.to_csv(directory / ABLATION_FILE, index=False)
    _LOGGER.info("Wrote %s and %s", directory / SUMMARY_FILE, directory / ABLATION_FILE)
    return summary, table
