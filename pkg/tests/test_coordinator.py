"""Tests for the grid coordinator and the command line."""

from __future__ import annotations

import asyncio
from pathlib import Path

import pandas as pd
import pytest

from dmoa_transfer.__main__ import main
from dmoa_transfer.config import build_config
from dmoa_transfer.const import SUMMARY_FILE
from dmoa_transfer.coordinator import CellFailed, ExperimentCoordinator
from dmoa_transfer.pyDynamicTransfer.metrics import REPORT_COLUMNS
from dmoa_transfer.pyDynamicTransfer.runner import CellRunner


def _tiny(output: Path, **extra) -> dict:
    return {
        "problems": ["FDA1"],
        "settings": [[2, 10]],
        "seeds": 2,
        "population_size": 10,
        "test_count": 20,
        "target_count": 5,
        "boosting_rounds": 2,
        "initial_generations": 3,
        "changes": 2,
        "dimensions": {"FDA1": 3},
        "workers": 2,
        "output": str(output),
        **extra,
    }


class FailingRunner:
    """Runs cells normally except the one named."""

    def __init__(self, runner: CellRunner, fail: str) -> None:
        self._runner = runner
        self._fail = fail

    def run(self, cell):
        if cell.name == self._fail:
            raise RuntimeError("boom")
        return self._runner.run(cell)


class TestCoordinator:
    """Grid execution."""

    def test_one_file_per_cell(self, tmp_path):
        """Every cell writes its own report."""
        config = build_config(_tiny(tmp_path))
        reports = asyncio.run(ExperimentCoordinator(config).async_run())
        assert len(reports) == config.cell_count == 4
        for cell in config.cells():
            frame = pd.read_csv(tmp_path / f"{cell.name}.csv")
            assert list(frame.columns) == REPORT_COLUMNS
            assert len(frame) == 3

    def test_parallel_matches_serial(self, tmp_path):
        """Worker count does not change results."""
        serial = build_config(_tiny(tmp_path / "serial", workers=1))
        parallel = build_config(_tiny(tmp_path / "parallel", workers=4))
        asyncio.run(ExperimentCoordinator(serial).async_run())
        asyncio.run(ExperimentCoordinator(parallel).async_run())
        for cell in serial.cells():
            pd.testing.assert_frame_equal(
                pd.read_csv(tmp_path / "serial" / f"{cell.name}.csv"),
                pd.read_csv(tmp_path / "parallel" / f"{cell.name}.csv"),
            )

    def test_rerun_replaces_only_its_cell(self, tmp_path):
        """Re-running one cell leaves the other files alone."""
        config = build_config(_tiny(tmp_path))
        asyncio.run(ExperimentCoordinator(config).async_run())
        untouched = tmp_path / "FDA1_2_10_0_plain.csv"
        before = untouched.stat().st_mtime_ns
        single = build_config(_tiny(tmp_path, seeds=[1], variants=["rtlp"]))
        asyncio.run(ExperimentCoordinator(single).async_run())
        assert untouched.stat().st_mtime_ns == before

    def test_failures_reported_after_grid(self, tmp_path):
        """A failing cell does not stop the others."""
        config = build_config(_tiny(tmp_path))
        coordinator = ExperimentCoordinator(
            config,
            runner_factory=lambda: FailingRunner(
                CellRunner(config.run_settings), "FDA1_2_10_0_rtlp"
            ),
        )
        with pytest.raises(CellFailed) as err:
            asyncio.run(coordinator.async_run())
        assert list(err.value.failures) == ["FDA1_2_10_0_rtlp"]
        assert len(coordinator.reports) == 3
        assert not (tmp_path / "FDA1_2_10_0_rtlp.csv").exists()


class TestCommandLine:
    """Exit codes of the subcommands."""

    def test_run_then_report(self, tmp_path, capsys):
        """run writes reports and report aggregates them."""
        config = tmp_path / "tiny.yaml"
        config.write_text(
            "settings: [[2, 10]]\n"
            "population_size: 10\n"
            "test_count: 20\n"
            "target_count: 5\n"
            "boosting_rounds: 2\n"
            "initial_generations: 3\n"
            "changes: 2\n"
            "dimensions: {FDA1: 3}\n",
            encoding="utf-8",
        )
        out = tmp_path / "results"
        argv = ["run", "--config", str(config), "--problem", "FDA1", "--seeds", "1", "--out", str(out)]
        assert main(argv) == 0
        assert main(["report", "--in", str(out)]) == 0
        assert (out / SUMMARY_FILE).exists()
        assert "FDA1" in capsys.readouterr().out

    def test_bad_config(self, tmp_path):
        """Configuration errors exit with 2 before anything runs."""
        assert main(["run", "--problem", "ZDT1", "--out", str(tmp_path)]) == 2
        assert not list(tmp_path.iterdir())

    def test_empty_report(self, tmp_path):
        """Nothing to aggregate exits with 1."""
        assert main(["report", "--in", str(tmp_path)]) == 1
