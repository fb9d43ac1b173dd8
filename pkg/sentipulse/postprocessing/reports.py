"""
Evaluation reports: one MAPE table per model family (companies as rows, covariate sets
as columns, plus a mean row), rendered as CSV or markdown, and the plot-ready files
written next to them.
"""

# standard library imports
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union
import io
import json
import os

# third party imports
import numpy as np
import pandas as pd
from loguru import logger
from tabulate import tabulate

# local imports
from sentipulse.definition.panel import CorrelationMatrix
from sentipulse.subroutines import safe_string

REPORT_FORMATS = ("csv", "markdown")
MISSING = "NA"
PARTIAL_MARK = "*"
DECIMALS = 7

Cell = Tuple[str, str]


@dataclass(eq=True)
class EvaluationReport:
    """
    MAPE values (in percent) of one model family.

    Parameters
    ----------
    family
        'ARIMA' or 'VAR'.
    columns
        Labels of the covariate sets, in report order.
    companies
        Companies, in report order.
    values
        Maps (company, column) to the cell's MAPE or to None for a failed cell.
    failures
        Maps failed cells to the reason of the failure.
    metadata
        Free-form information on how the report was made (granularity, split, orders).
    forecasts
        Maps cells to a frame with the columns instant, actual and predicted.
    """

    family: str
    columns: Tuple[str, ...]
    companies: Tuple[str, ...]
    values: Dict[Cell, Optional[float]]
    failures: Dict[Cell, str] = field(default_factory=dict, compare=False)
    metadata: dict = field(default_factory=dict, compare=False)
    forecasts: Dict[Cell, pd.DataFrame] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self):
        self.columns = tuple(self.columns)
        self.companies = tuple(self.companies)
        for company in self.companies:
            for column in self.columns:
                value = self.values.get((company, column))
                if value is not None and not value >= 0:
                    raise ValueError(
                        f"MAPE of ({company}, {column}) must be non-negative: {value}"
                    )

    def value(self, company: str, column: str) -> Optional[float]:
        return self.values.get((company, column))

    def column_values(self, column: str) -> List[Optional[float]]:
        return [self.value(company, column) for company in self.companies]

    def mean_row(self) -> Dict[str, Tuple[Optional[float], bool]]:
        """
        Per column: the arithmetic mean over the successful cells and a flag telling
        whether some cells of the column failed (partial mean). The mean is None if all
        cells failed.
        """
        row = {}
        for column in self.columns:
            values = self.column_values(column)
            present = [v for v in values if v is not None]
            mean = float(np.mean(present)) if present else None
            row[column] = (mean, len(present) < len(values))
        return row

    @property
    def n_failed(self) -> int:
        return sum(
            self.value(company, column) is None
            for company in self.companies
            for column in self.columns
        )


def column_mean(values: Sequence[float]) -> float:
    """The mean-row aggregate of a report column."""
    if len(values) == 0:
        raise ValueError("Cannot average an empty report column")
    return float(np.mean(np.asarray(values, dtype=float)))


def _format_value(value: Optional[float]) -> str:
    return MISSING if value is None else f"{value:.{DECIMALS}f}"


def _report_rows(report: EvaluationReport) -> List[List[str]]:
    rows = [
        [company] + [_format_value(report.value(company, c)) for c in report.columns]
        for company in report.companies
    ]
    mean_cells = []
    for mean, partial in report.mean_row().values():
        cell = _format_value(mean)
        if partial and mean is not None:
            cell += PARTIAL_MARK
        mean_cells.append(cell)
    rows.append(["Mean"] + mean_cells)
    return rows


def render_report(report: EvaluationReport, fmt: str = "csv") -> str:
    """
    Renders a report as CSV or as a markdown table. Both contain the same numbers: MAPE
    in percent with seven decimals, 'NA' for failed cells and a final 'Mean' row whose
    cells carry a '*' if the column contains failed cells.

    Parameters
    ----------
    report
        The report to render.
    fmt
        'csv' or 'markdown'.

    Returns
    -------
        The rendered text; identical reports give identical text.
    """
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"Unknown report format '{fmt}', use one of {REPORT_FORMATS}")
    header = ["Company"] + list(report.columns)
    rows = _report_rows(report)
    if fmt == "markdown":
        table = tabulate(rows, headers=header, tablefmt="github", disable_numparse=True)
        return table + "\n"
    frame = pd.DataFrame(rows, columns=header)
    return frame.to_csv(index=False, lineterminator="\n")


def parse_report(source: Union[str, TextIO], family: str = "ARIMA") -> EvaluationReport:
    """
    Reads a report rendered as CSV (the inverse of render_report(..., 'csv')). The mean
    row is not stored in the report since it is recomputed from the cells.

    Parameters
    ----------
    source
        The CSV text or a readable stream.
    family
        The model family to assign to the report.

    Returns
    -------
        The report (failure reasons are not part of the CSV and are set to 'NA').
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    frame = pd.read_csv(source, dtype=str, keep_default_na=False)
    if len(frame.columns) == 0 or frame.columns[0] != "Company":
        raise ValueError("A report needs 'Company' as its first column")
    frame = frame[frame["Company"] != "Mean"]
    columns = tuple(frame.columns[1:])
    companies = tuple(frame["Company"])
    values, failures = {}, {}
    for _, row in frame.iterrows():
        for column in columns:
            cell = (row["Company"], column)
            raw = row[column].strip()
            if raw == MISSING:
                values[cell] = None
                failures[cell] = MISSING
            else:
                values[cell] = float(raw)
    return EvaluationReport(family, columns, companies, values, failures)


def forecast_file_name(company: str, column: str) -> str:
    return f"forecast_{safe_string(company)}_{safe_string(column)}.csv"


def write_report_files(report: EvaluationReport, out_dir: str) -> List[str]:
    """
    Writes '<family>_mape.csv', '<family>_mape.md' and '<family>_metadata.json' into
    out_dir and one 'forecast_<company>_<covariate set>.csv' (instant, actual,
    predicted) per successful cell into its subdirectory '<family>'.

    Returns
    -------
        The paths of the written files.
    """
    os.makedirs(out_dir, exist_ok=True)
    family = report.family.lower()
    paths = []

    csv_path = os.path.join(out_dir, f"{family}_mape.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        f.write(render_report(report, "csv"))
    md_path = os.path.join(out_dir, f"{family}_mape.md")
    with open(md_path, "w", encoding="utf-8") as f:
        f.write(render_report(report, "markdown"))
    paths += [csv_path, md_path]

    metadata = dict(report.metadata)
    metadata["failures"] = {
        f"{company} | {column}": reason
        for (company, column), reason in sorted(report.failures.items())
    }
    metadata_path = os.path.join(out_dir, f"{family}_metadata.json")
    with open(metadata_path, "w", encoding="utf-8") as f:
        json.dump(metadata, f, indent=2, sort_keys=True)
        f.write("\n")
    paths.append(metadata_path)

    forecast_dir = os.path.join(out_dir, family)
    if report.forecasts:
        os.makedirs(forecast_dir, exist_ok=True)
    for (company, column), frame in sorted(report.forecasts.items()):
        path = os.path.join(forecast_dir, forecast_file_name(company, column))
        frame = frame.copy()
        frame["instant"] = [pd.Timestamp(t).isoformat() for t in frame["instant"]]
        frame.to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
        paths.append(path)
    logger.info(f"Wrote {len(paths)} {report.family} report file(s) to '{out_dir}'")
    return paths


def render_correlation(matrix: CorrelationMatrix) -> str:
    """CSV of a correlation matrix, labelled by variable names in both directions."""
    frame = matrix.to_frame()
    frame.index.name = "variable"
    return frame.to_csv(float_format="%.10f", na_rep=MISSING, lineterminator="\n")
