"""CSV (pandas) and JSON (orjson) writers for run series and study reports."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Union

import orjson
import pandas as pd

from breakage_fvm.diagnostics import ConvergenceReport
from breakage_fvm.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["cells", "total_number", "error", "eoc"]
SERIES_COLUMNS = ["time", "m0", "m1", "min_concentration", "dt_usage"]
SERIES_FLOAT_FORMAT = "%.12e"


def report_frame(report: ConvergenceReport) -> pd.DataFrame:
    return pd.DataFrame(report.to_rows(), columns=REPORT_COLUMNS)


def _prepare(path: Union[str, Path], fmt: str) -> Path:
    if fmt not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown output format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_report(report: ConvergenceReport, path: Union[str, Path], fmt: str = "csv") -> Path:
    path = _prepare(path, fmt)
    if fmt == "csv":
        report_frame(report).to_csv(path, index=False, lineterminator="\n")
    else:
        path.write_bytes(orjson.dumps(report.to_dict(), option=orjson.OPT_INDENT_2))
    logger.info("wrote convergence report (%d levels) to %s", len(report.cell_counts), path)
    return path


def write_series(frame: pd.DataFrame, path: Union[str, Path], fmt: str = "csv") -> Path:
    path = _prepare(path, fmt)
    if fmt == "csv":
        frame.to_csv(path, index=False, float_format=SERIES_FLOAT_FORMAT, lineterminator="\n")
    else:
        payload = {column: frame[column].tolist() for column in frame.columns}
        path.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2))
    logger.info("wrote %d rows to %s", len(frame), path)
    return path
