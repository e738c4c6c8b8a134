"""Coordinator running the experiment grid"""

from __future__ import annotations

import asyncio
from collections.abc import Callable
import logging
from pathlib import Path

from .config import ExperimentConfig
from .helpers import cell_path
from .pyDynamicTransfer.metrics import RunReport
from .pyDynamicTransfer.runner import Cell, CellRunner

_LOGGER = logging.getLogger(__name__)


class CellFailed(Exception):
    """Raised after the grid finishes when one or more cells failed."""

    def __init__(self, failures: dict[str, BaseException]) -> None:
        """Raise cell failure summary."""
        self.failures = failures
        self.message = f"{len(failures)} cell(s) failed: {', '.join(sorted(failures))}"
        super().__init__(self.message)


class ExperimentCoordinator:
    """Runs independent cells in worker threads and serialises report writes."""

    def __init__(
        self,
        config: ExperimentConfig,
        runner_factory: Callable[[], CellRunner] | None = None,
    ) -> None:
        self.config = config
        self._runner = (runner_factory or (lambda: CellRunner(config.run_settings)))()
        self._semaphore = asyncio.Semaphore(config.workers)
        self._write_lock = asyncio.Lock()
        self.reports: dict[str, RunReport] = {}
        self.failures: dict[str, BaseException] = {}

    @property
    def output(self) -> Path:
        """Directory receiving one CSV per cell."""
        return Path(self.config.output)

    async def async_run(self) -> dict[str, RunReport]:
        """Run every cell; raise CellFailed at the end if any of them failed."""
        self.output.mkdir(parents=True, exist_ok=True)
        _LOGGER.info(
            "Running %d cells with %d worker(s)", self.config.cell_count, self.config.workers
        )
        await asyncio.gather(*(self._run_cell(cell) for cell in self.config.cells()))
        if self.failures:
            raise CellFailed(self.failures)
        return self.reports

    async def _run_cell(self, cell: Cell) -> None:
        async with self._semaphore:
            try:
                report = await asyncio.to_thread(self._runner.run, cell)
            except Exception as ex:
                _LOGGER.error("Cell %s failed: %s", cell.name, ex)
                self.failures[cell.name] = ex
                return
        await self._write(cell, report)

    async def _write(self, cell: Cell, report: RunReport) -> None:
        async with self._write_lock:
            path = cell_path(self.output, cell)
            report.to_frame().to_csv(path, index=False, float_format="%.17g")
            self.reports[cell.name] = report
            _LOGGER.info("Wrote %s", path)


def run_experiment(config: ExperimentConfig) -> dict[str, RunReport]:
    """Blocking entry point around the coordinator."""
    return asyncio.run(ExperimentCoordinator(config).async_run())
