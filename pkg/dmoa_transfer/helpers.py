"""Helper functions for the experiment runner"""

from __future__ import annotations

import logging
from pathlib import Path

import colorlog

from .const import DOMAIN, LOG_FORMAT
from .pyDynamicTransfer.runner import Cell


def setup_logging(verbose: bool = False) -> None:
    """Install a coloured console handler on the root logger."""
    handler = colorlog.StreamHandler()
    handler.setFormatter(
        colorlog.ColoredFormatter(
            LOG_FORMAT,
            datefmt="%H:%M:%S",
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red,bg_white",
            },
        )
    )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.WARNING)
    logging.getLogger(DOMAIN).setLevel(logging.DEBUG if verbose else logging.INFO)


def cell_path(output: Path, cell: Cell) -> Path:
    """Report file owned by one cell."""
    return Path(output) / f"{cell.name}.csv"
