"""
The backtest protocol: split each company's panel by date, fit the models on the
training part for every covariate set, forecast the testing part from a fixed origin
(or rolling) and score the forecasts by their mean absolute percentage error.
"""

# standard library imports
from dataclasses import asdict
from typing import Mapping, Optional, Sequence, Tuple, Union
import time

# third party imports
import numpy as np
import pandas as pd
from loguru import logger

# local imports
from sentipulse.config import ArimaSettings, VarSettings
from sentipulse.definition.panel import Panel, SENTIMENT_COLUMNS
from sentipulse.definition.split import SplitSpec
from sentipulse.inference.arima.model import forecast_arima, rolling_forecast_arima
from sentipulse.inference.arima.selection import auto_select
from sentipulse.inference.var.model import default_p_max, forecast_var
from sentipulse.inference.var.model import select_var_lag
from sentipulse.postprocessing.reports import EvaluationReport
from sentipulse.subroutines import pretty_time_delta

FAMILIES = ("ARIMA", "VAR")

# covariate-set key: (report label, panel columns)
COVARIATE_SETS = {
    "history": ("Hist. record", ()),
    "company": ("Companies", ("companyS",)),
    "ceo": ("CEOs", ("ceoS",)),
    "vaccine": ("Vaccine", ("vaccineS",)),
    "covid": ("COVID", ("covidS",)),
    "competitors": ("Competitors", ("competitorsS",)),
    "all": ("All", SENTIMENT_COLUMNS),
    "company&vaccine": ("Company&vaccine", ("companyS", "vaccineS")),
}


def covariate_set(key: str) -> Tuple[str, Tuple[str, ...]]:
    """Returns the report label and the panel columns of a covariate-set key."""
    try:
        return COVARIATE_SETS[key.strip().lower()]
    except KeyError:
        raise ValueError(
            f"Unknown covariate set '{key}', known are {list(COVARIATE_SETS)}"
        ) from None


def split_panel(panel: Panel, spec: SplitSpec) -> Tuple[Panel, Panel]:
    """
    Partitions a panel by the (market-time) date of its instants. Rows on excluded
    dates and outside of both periods end up in neither part; the order is kept.

    Parameters
    ----------
    panel
        The panel to split.
    spec
        The date ranges of the split.

    Returns
    -------
    train
        Rows of the training period.
    test
        Rows of the testing period.
    """
    if len(panel) == 0:
        raise ValueError(f"Cannot split the empty panel of '{panel.company}'")
    parts = np.array([spec.part_of(t.date()) for t in panel.instants], dtype=object)
    train = panel.select(parts == "train")
    test = panel.select(parts == "test")
    for name, part in (("training", train), ("testing", test)):
        if len(part) == 0:
            raise ValueError(
                f"The {name} part of the panel of '{panel.company}' is empty"
            )
    n_dropped = len(panel) - len(train) - len(test)
    logger.debug(
        f"Split '{panel.company}': {len(train)} training, {len(test)} testing, "
        f"{n_dropped} unused rows"
    )
    return train, test


def mape(
    actual: Union[Sequence[float], np.ndarray],
    forecast: Union[Sequence[float], np.ndarray],
) -> float:
    """
    Mean absolute percentage error (1/n) sum |(A_t - F_t) / A_t|, in percent.

    Parameters
    ----------
    actual
        The observed values; none of them may be zero.
    forecast
        The forecasts, as many as observed values.

    Returns
    -------
        The MAPE in percent.
    """
    actual = np.asarray(actual, dtype=float).reshape(-1)
    forecast = np.asarray(forecast, dtype=float).reshape(-1)
    if len(actual) != len(forecast):
        raise ValueError(
            f"Got {len(actual)} actual values but {len(forecast)} forecasts"
        )
    if len(actual) == 0:
        raise ValueError("MAPE needs at least one value")
    if np.any(actual == 0.0):
        raise ValueError("MAPE is undefined for actual values of zero")
    return float(100.0 * np.mean(np.abs((actual - forecast) / actual)))


def _forecast_arima_cell(
    train: Panel,
    test: Panel,
    columns: Tuple[str, ...],
    settings: ArimaSettings,
) -> Tuple[np.ndarray, str]:
    y = train.column("open")
    covariates = train.matrix(columns) if columns else None
    future_covariates = test.matrix(columns) if columns else None
    fit_options = {
        "max_iter": settings.max_iter,
        "xtol": settings.xtol,
        "ftol": settings.ftol,
    }
    best = auto_select(
        y,
        covariates,
        p_max=settings.p_max,
        d_max=settings.d_max,
        q_max=settings.q_max,
        criterion=settings.criterion,
        origin=train.instants[-1],
        **fit_options,
    )
    if settings.rolling:
        result = rolling_forecast_arima(
            y,
            best.order,
            test.column("open"),
            covariates,
            future_covariates,
            **fit_options,
        )
    else:
        result = forecast_arima(best, len(test), future_covariates)
    return result.point, str(best.order)


def _forecast_var_cell(
    train: Panel,
    test: Panel,
    columns: Tuple[str, ...],
    settings: VarSettings,
) -> Tuple[np.ndarray, str]:
    labels = ("open",) + tuple(columns)
    data = train.matrix(labels)
    if settings.difference:
        data = np.diff(data, axis=0)
    n, k = data.shape
    p_max = min(settings.p_max, default_p_max(n, k))
    p, fit = select_var_lag(data, p_max, labels, settings.criterion)
    point = forecast_var(fit, len(test))[:, 0]
    if settings.difference:
        point = train.column("open")[-1] + np.cumsum(point)
    return point, f"VAR({p})"


def run_evaluation(
    panels: Mapping[str, Panel],
    family: str,
    covariate_keys: Sequence[str],
    split: SplitSpec,
    arima: Optional[ArimaSettings] = None,
    var: Optional[VarSettings] = None,
    companies: Optional[Sequence[str]] = None,
) -> EvaluationReport:
    """
    Runs the backtest of one model family over all companies and covariate sets. A cell
    that fails (e.g. no converged ARIMA order or a rank deficient VAR) is recorded as
    failed with its reason, the remaining cells are still evaluated.

    Parameters
    ----------
    panels
        Maps each company to its panel.
    family
        'ARIMA' or 'VAR'.
    covariate_keys
        The covariate sets to evaluate, e.g. ['history', 'company', 'all'].
    split
        The train/test split.
    arima
        Settings of the ARIMA fits (defaults if not given).
    var
        Settings of the VAR fits (defaults if not given).
    companies
        The report's company order; defaults to the order of 'panels'.

    Returns
    -------
    report
        MAPE per company and covariate set with forecasts and metadata attached.
    """
    family = family.upper()
    if family not in FAMILIES:
        raise ValueError(f"Unknown model family '{family}', use one of {FAMILIES}")
    arima = arima or ArimaSettings()
    var = var or VarSettings()
    companies = list(companies) if companies is not None else list(panels)
    sets = [(key, *covariate_set(key)) for key in covariate_keys]
    if not sets:
        raise ValueError("At least one covariate set is needed")

    values, failures, forecasts = {}, {}, {}
    orders, sizes, granularities = {}, {}, {}
    t_start = time.time()
    for company in companies:
        cells = [(company, label) for _, label, _ in sets]
        try:
            train, test = split_panel(panels[company], split)
        except (KeyError, ValueError) as error:
            if isinstance(error, KeyError):
                reason = f"no panel for '{company}'"
            else:
                reason = str(error)
            logger.warning(f"{family} | {company}: {reason}")
            for cell in cells:
                values[cell], failures[cell] = None, reason
            continue
        sizes[company] = {"train": len(train), "test": len(test)}
        granularities[company] = panels[company].granularity
        for key, label, columns in sets:
            cell = (company, label)
            try:
                if family == "ARIMA":
                    point, order = _forecast_arima_cell(train, test, columns, arima)
                else:
                    point, order = _forecast_var_cell(train, test, columns, var)
                actual = test.column("open")
                values[cell] = mape(actual, point)
            except (ValueError, RuntimeError, np.linalg.LinAlgError) as error:
                values[cell], failures[cell] = None, f"{type(error).__name__}: {error}"
                logger.warning(f"{family} | {company} | {label}: failed ({error})")
                continue
            orders[f"{company} | {label}"] = order
            forecasts[cell] = pd.DataFrame(
                {"instant": list(test.instants), "actual": actual, "predicted": point}
            )
            logger.info(
                f"{family} | {company} | {label}: {order}, MAPE = {values[cell]:.4f}%"
            )

    metadata = {
        "family": family,
        "covariate_sets": {label: list(columns) for _, label, columns in sets},
        "granularity": granularities,
        "horizon": (
            "rolling one-step refits"
            if family == "ARIMA" and arima.rolling
            else "fixed-origin multi-step"
        ),
        "covariates_at_forecast": "observed test-period values",
        "split": split.as_dict(),
        "sizes": sizes,
        "selected_orders": orders,
        "settings": asdict(arima) if family == "ARIMA" else asdict(var),
    }
    report = EvaluationReport(
        family=family,
        columns=tuple(label for _, label, _ in sets),
        companies=tuple(companies),
        values=values,
        failures=failures,
        metadata=metadata,
        forecasts=forecasts,
    )
    logger.info(
        f"{family} evaluation of {len(companies)} companies x {len(sets)} covariate "
        f"sets finished in {pretty_time_delta(time.time() - t_start)} "
        f"({report.n_failed} failed cell(s))"
    )
    return report
