# standard library imports
from typing import Optional, Sequence, Union
import itertools

# third party imports
import numpy as np
import pandas as pd
from loguru import logger
from tabulate import tabulate

# local imports
from sentipulse.inference.arima.model import ArimaFit, ArimaFitError, ArimaOrder
from sentipulse.inference.arima.model import fit_arima, MIN_EXTRA_OBSERVATIONS
from sentipulse.inference.forecaster import check_criterion
from sentipulse.subroutines import titled_table, log_multiline


def auto_select(
    series: Union[Sequence[float], np.ndarray],
    covariates: Optional[Union[Sequence, np.ndarray]] = None,
    p_max: int = 5,
    d_max: int = 2,
    q_max: int = 5,
    criterion: str = "aic",
    origin: Optional[pd.Timestamp] = None,
    **fit_options,
) -> ArimaFit:
    """
    Exhaustive order search: fits every ARIMA(p, d, q) with p <= p_max, d <= d_max and
    q <= q_max and returns the converged fit with the smallest information criterion.
    Ties are broken by the smaller p + q, then the smaller d, then the smaller p. All
    fits are scored on the same observations of the original series (each fit's
    likelihood is conditioned on its first d_max - d differenced values).

    Parameters
    ----------
    series
        The observed series.
    covariates
        Optional covariate matrix (one row per observation).
    p_max, d_max, q_max
        Bounds of the order grid.
    criterion
        'aic' (default) or 'bic'.
    origin
        Instant of the last observation, stored on the fits.
    fit_options
        Optimizer settings passed on to fit_arima (max_iter, xtol, ftol).

    Returns
    -------
    best
        The selected fit.
    """
    criterion = check_criterion(criterion)
    if min(p_max, d_max, q_max) < 0:
        raise ValueError(
            f"The grid bounds must be non-negative, found ({p_max}, {d_max}, {q_max})"
        )
    n = len(np.asarray(series).reshape(-1))

    candidates, failed, rows = [], [], []
    for p, d, q in itertools.product(
        range(p_max + 1), range(d_max + 1), range(q_max + 1)
    ):
        order = ArimaOrder(p, d, q)
        if n < d + p + q + MIN_EXTRA_OBSERVATIONS + (d_max - d):
            rows.append([str(order), "-", "too few observations"])
            continue
        try:
            fit = fit_arima(
                series,
                order,
                covariates,
                n_cond=d_max - d,
                origin=origin,
                quiet=True,
                **fit_options,
            )
        except ArimaFitError as error:
            failed.append(error)
            rows.append([str(order), "-", "not converged"])
            continue
        except np.linalg.LinAlgError as error:
            rows.append([str(order), "-", str(error)])
            logger.debug(f"Skipping {order}: {error}")
            continue
        candidates.append(fit)
        rows.append([str(order), f"{fit.criterion(criterion):.4f}", ""])

    log_multiline(
        titled_table(
            f"Order search ({criterion.upper()})",
            tabulate(rows, headers=["order", criterion, "note"], tablefmt="presto"),
        ),
        printer=logger.debug,
    )
    if not candidates:
        best_failed = [e.best for e in failed if e.best is not None]
        best = (
            min(best_failed, key=lambda f: f.criterion(criterion))
            if best_failed
            else None
        )
        raise ArimaFitError(
            f"None of the {len(rows)} grid points yielded a converged fit", best=best
        )

    best = min(
        candidates,
        key=lambda f: (
            f.criterion(criterion),
            f.order.p + f.order.q,
            f.order.d,
            f.order.p,
        ),
    )
    logger.info(
        f"Selected {best.order} ({criterion} = {best.criterion(criterion):.4f}) out of "
        f"{len(candidates)} converged grid points"
    )
    return best
