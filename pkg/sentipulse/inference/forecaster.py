"""
Pieces shared by the ARIMA and VAR forecasters: the forecast container, the information
criteria and the logging of optimizer results.
"""

# standard library imports
from dataclasses import dataclass
from typing import Optional

# third party imports
import numpy as np
import pandas as pd
from scipy.optimize import OptimizeResult
from loguru import logger

CRITERIA = ("aic", "bic")


@dataclass(frozen=True, eq=False)
class ForecastResult:
    """
    Point forecasts of a model for the steps 1, ..., horizon after the forecast origin.

    Parameters
    ----------
    point
        The forecasts in the units of the modelled series (e.g. USD for prices).
    origin
        The last instant of the data the forecast was made from, if known.
    """

    point: np.ndarray
    origin: Optional[pd.Timestamp] = None

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float).reshape(-1)
        if not np.all(np.isfinite(point)):
            raise ValueError("Forecasts must be finite")
        object.__setattr__(self, "point", point)

    @property
    def horizon(self) -> int:
        return len(self.point)


def aic(loglik: float, n_params: int) -> float:
    return -2.0 * loglik + 2.0 * n_params


def bic(loglik: float, n_params: int, n_obs: int) -> float:
    return -2.0 * loglik + np.log(n_obs) * n_params


def check_criterion(criterion: str) -> str:
    criterion = criterion.lower()
    if criterion not in CRITERIA:
        raise ValueError(
            f"Unknown information criterion '{criterion}', use one of {CRITERIA}"
        )
    return criterion


def check_horizon(horizon: int):
    if int(horizon) != horizon or horizon < 1:
        raise ValueError(f"The forecast horizon must be a positive integer: {horizon}")


def log_optimizer_results(
    minimize_results: OptimizeResult,
    title: str,
    quiet: bool = False,
):
    """
    Logs the process information of a scipy.optimize.minimize run. Successful runs are
    logged with level INFO (or DEBUG when 'quiet' is set), runs that did not converge
    with level WARNING.

    Parameters
    ----------
    minimize_results
        The object returned by scipy's minimize function.
    title
        Headline of the summary, e.g. 'Maximum likelihood estimation of ARIMA(1, 0, 0)'.
    quiet
        Demotes the summary of successful runs to DEBUG (used in grid searches).
    """
    message = str(minimize_results.message)
    n_char = max(len(message), len(title))
    msg = (
        f"{title}\n"
        f"{'=' * n_char}\n"
        f"{message}\n"
        f"{'-' * n_char}\n"
        f"Number of iterations:           {minimize_results.nit}\n"
        f"Number of function evaluations: {minimize_results.nfev}\n"
        f"Objective at optimum:           {minimize_results.fun:.10g}\n"
        f"{'-' * n_char}"
    )
    if minimize_results.status == 0:
        printer = logger.debug if quiet else logger.info
    else:  # something went wrong
        printer = logger.warning
    for line in msg.split("\n"):
        printer(line)
