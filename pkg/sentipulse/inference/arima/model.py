"""
ARIMA(p, d, q) models with optional linear covariate effects (regression with ARIMA
errors). The ARMA coefficients are estimated in two stages with scipy's Nelder-Mead
simplex method: minimizing the conditional sum of squares gives the start values for
maximizing the exact Gaussian likelihood. The intercept and the covariate coefficients
are concentrated out of both objectives (by least squares and by generalized least
squares, respectively).
"""

# standard library imports
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

# third party imports
import numpy as np
import pandas as pd
from scipy.optimize import minimize, OptimizeResult
from scipy.signal import lfilter
from loguru import logger

# local imports
from sentipulse.inference.arima.statespace import is_stationary, is_invertible
from sentipulse.inference.arima.statespace import regression_loglik
from sentipulse.inference.forecaster import ForecastResult
from sentipulse.inference.forecaster import aic, bic, check_horizon
from sentipulse.inference.forecaster import log_optimizer_results

# returned by the objectives for non-stationary or non-invertible iterates
_BARRIER = 1e10

MIN_EXTRA_OBSERVATIONS = 10


@dataclass(frozen=True)
class ArimaOrder:
    """The orders p (autoregression), d (differencing) and q (moving average)."""

    p: int
    d: int
    q: int

    def __post_init__(self):
        for name in ("p", "d", "q"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"Order '{name}' must be a non-negative int: {value}")
            object.__setattr__(self, name, int(value))

    def __str__(self) -> str:
        return f"ARIMA({self.p}, {self.d}, {self.q})"

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.p, self.d, self.q


@dataclass(frozen=True, eq=False)
class ArimaFit:
    """
    A fitted ARIMA(p, d, q) model with optional covariates. Besides the estimates, the
    fit keeps the end of its training data, which is needed to forecast from it.

    Parameters
    ----------
    order
        The model order.
    ar, ma
        The AR and MA coefficients (lengths p and q).
    intercept
        Mean of the d-times differenced series net of covariate effects; only estimated
        for d = 0, otherwise zero.
    beta
        One coefficient per covariate column.
    sigma2
        Innovation variance (maximum likelihood estimate).
    loglik
        Exact Gaussian log-likelihood of the modelled observations.
    aic, bic
        Information criteria computed from loglik and n_params.
    n_obs
        Number of observations the likelihood is made of.
    n_params
        Number of free parameters p + q + [d = 0] + #covariates + 1.
    css
        Conditional sum of squares at the estimates.
    converged
        False for the best iterate of an optimizer run that did not converge.
    tails
        Last value of the j-times differenced series for j = 0, ..., d - 1.
    last_errors
        Last p values of the differenced regression errors.
    last_innovations
        Last q one-step residuals.
    last_covariates
        Last d covariate rows (needed to difference future covariates).
    """

    order: ArimaOrder
    ar: Tuple[float, ...]
    ma: Tuple[float, ...]
    intercept: float
    beta: Tuple[float, ...]
    sigma2: float
    loglik: float
    aic: float
    bic: float
    n_obs: int
    n_params: int
    css: float
    converged: bool = True
    tails: Tuple[float, ...] = ()
    last_errors: Tuple[float, ...] = ()
    last_innovations: Tuple[float, ...] = ()
    last_covariates: Tuple[Tuple[float, ...], ...] = ()
    origin: Optional[pd.Timestamp] = field(default=None, compare=False)

    @property
    def n_covariates(self) -> int:
        return len(self.beta)

    def criterion(self, name: str) -> float:
        return self.aic if name == "aic" else self.bic

    def to_dict(self) -> dict:
        """A JSON-compatible representation; see from_dict for the inverse."""
        return {
            "order": {"p": self.order.p, "d": self.order.d, "q": self.order.q},
            "ar": list(self.ar),
            "ma": list(self.ma),
            "intercept": self.intercept,
            "beta": list(self.beta),
            "sigma2": self.sigma2,
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "n_obs": self.n_obs,
            "n_params": self.n_params,
            "css": self.css,
            "converged": self.converged,
            "state": {
                "tails": list(self.tails),
                "last_errors": list(self.last_errors),
                "last_innovations": list(self.last_innovations),
                "last_covariates": [list(row) for row in self.last_covariates],
                "origin": None if self.origin is None else self.origin.isoformat(),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArimaFit":
        state = data.get("state", {})
        origin = state.get("origin")
        return cls(
            order=ArimaOrder(**data["order"]),
            ar=tuple(data["ar"]),
            ma=tuple(data["ma"]),
            intercept=float(data["intercept"]),
            beta=tuple(data["beta"]),
            sigma2=float(data["sigma2"]),
            loglik=float(data["loglik"]),
            aic=float(data["aic"]),
            bic=float(data["bic"]),
            n_obs=int(data["n_obs"]),
            n_params=int(data["n_params"]),
            css=float(data["css"]),
            converged=bool(data["converged"]),
            tails=tuple(state.get("tails", ())),
            last_errors=tuple(state.get("last_errors", ())),
            last_innovations=tuple(state.get("last_innovations", ())),
            last_covariates=tuple(
                tuple(row) for row in state.get("last_covariates", ())
            ),
            origin=None if origin is None else pd.Timestamp(origin),
        )


class ArimaFitError(RuntimeError):
    """
    Raised when the optimizer does not converge. The best iterate is still available as
    'best' (an ArimaFit with converged=False).
    """

    def __init__(self, message: str, best: Optional[ArimaFit] = None):
        super().__init__(message)
        self.best = best


def difference(series: Union[Sequence[float], np.ndarray], d: int) -> np.ndarray:
    """
    Applies d-th order differencing (d = 0 returns a copy). The result is d values
    shorter than the input. For 2D input the rows are differenced.
    """
    series = np.asarray(series, dtype=float)
    if d < 0:
        raise ValueError(f"The differencing order must be non-negative, found {d}")
    if d >= len(series):
        raise ValueError(
            f"Cannot difference a series of length {len(series)} {d} time(s)"
        )
    return np.diff(series, n=d, axis=0) if d > 0 else series.copy()


def integrate(
    differenced: Union[Sequence[float], np.ndarray],
    initial: Union[Sequence[float], np.ndarray],
    d: int,
) -> np.ndarray:
    """
    Inverts 'difference': rebuilds a series from its d-times differenced version and
    its first d values.

    Parameters
    ----------
    differenced
        The d-times differenced series.
    initial
        The first d values of the original series.
    d
        The differencing order.

    Returns
    -------
        The original series (length len(differenced) + d).
    """
    s = np.asarray(differenced, dtype=float)
    initial = np.asarray(initial, dtype=float)
    if len(initial) != d:
        raise ValueError(f"Integration of order {d} needs {d} initial values")
    # first element of the j-times differenced series, for j = 0, ..., d - 1
    heads = [np.diff(initial, n=j)[0] for j in range(d)]
    for j in reversed(range(d)):
        s = np.concatenate([[heads[j]], heads[j] + np.cumsum(s)])
    return s


def _integrate_forecast(z: np.ndarray, tails: Sequence[float]) -> np.ndarray:
    """Integrates forecasts of the differenced series from the training data's end."""
    for tail in reversed(tails):
        z = tail + np.cumsum(z)
    return z


def _as_covariates(
    covariates: Optional[Union[Sequence, np.ndarray]], n: int, name: str
) -> np.ndarray:
    if covariates is None:
        return np.empty((n, 0))
    covariates = np.asarray(covariates, dtype=float)
    if covariates.ndim == 1:
        covariates = covariates.reshape(-1, 1)
    if covariates.ndim != 2 or covariates.shape[0] != n:
        raise ValueError(
            f"The {name} must have {n} rows, found shape {covariates.shape}"
        )
    if not np.all(np.isfinite(covariates)):
        raise ValueError(f"The {name} contain non-finite values")
    return covariates


def _ar_filter(x: np.ndarray, ar: np.ndarray) -> np.ndarray:
    """u_t = x_t - ar_1 x_(t-1) - ... - ar_p x_(t-p) for t >= p (rows of x)."""
    p = len(ar)
    u = x[p:].copy()
    for i, phi in enumerate(ar, start=1):
        u -= phi * x[p - i : len(x) - i]
    return u


def _css_residuals(
    z: np.ndarray,
    X: np.ndarray,
    ar: np.ndarray,
    ma: np.ndarray,
    coef: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Computes the CSS residuals for given ARMA coefficients. Unless they are given, the
    regression coefficients are concentrated out by least squares. The residuals start
    at index p.

    Returns
    -------
    e
        Residuals for t = p, ..., n - 1.
    coef
        Least squares regression coefficients (intercept first, if present).
    css
        Sum of squared residuals.
    """
    ma_poly = np.r_[1.0, ma]
    fz = lfilter([1.0], ma_poly, _ar_filter(z, ar))
    if X.shape[1] == 0:
        return fz, np.empty(0), float(fz @ fz)
    fX = lfilter([1.0], ma_poly, _ar_filter(X, ar), axis=0)
    if coef is None:
        coef = np.linalg.lstsq(fX, fz, rcond=None)[0]
    e = fz - fX @ coef
    return e, coef, float(e @ e)


def _nelder_mead(
    objective: Callable[[np.ndarray], float],
    x0: np.ndarray,
    step: float,
    options: dict,
) -> OptimizeResult:
    """Nelder-Mead run from an initial simplex with edges of length 'step' along x0."""
    x0 = np.asarray(x0, dtype=float)
    simplex = np.vstack([x0, x0 + step * np.eye(len(x0))])
    return minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={**options, "initial_simplex": simplex},
    )


def fit_arima(
    series: Union[Sequence[float], np.ndarray],
    order: Union[ArimaOrder, Tuple[int, int, int]],
    covariates: Optional[Union[Sequence, np.ndarray]] = None,
    n_cond: int = 0,
    max_iter: int = 500,
    xtol: float = 1e-8,
    ftol: float = 1e-10,
    origin: Optional[pd.Timestamp] = None,
    quiet: bool = False,
) -> ArimaFit:
    """
    Fits an ARIMA(p, d, q) model, optionally with linear covariate effects whose errors
    follow the ARIMA process. The series and the covariates are differenced d times;
    an intercept is only estimated for d = 0.

    Parameters
    ----------
    series
        The observed series (oldest value first).
    order
        The model order (p, d, q).
    covariates
        Optional matrix with one row per observation and one column per covariate.
        None and a matrix with zero columns are equivalent.
    n_cond
        Number of leading differenced observations the exact likelihood is conditioned
        on. Setting it to d_max - d makes likelihoods of different d comparable.
    max_iter
        Maximum number of Nelder-Mead iterations per optimizer run.
    xtol, ftol
        Absolute parameter and objective tolerances of the optimizer.
    origin
        Instant of the last observation; stored on the fit as the forecast origin.
    quiet
        Logs successful optimizer runs with level DEBUG instead of INFO.

    Returns
    -------
    fit
        The fitted model.
    """
    if not isinstance(order, ArimaOrder):
        order = ArimaOrder(*order)
    p, d, q = order.as_tuple()
    y = np.asarray(series, dtype=float).reshape(-1)
    n = len(y)
    if not np.all(np.isfinite(y)):
        raise ValueError("The series contains non-finite values")
    n_min = d + p + q + MIN_EXTRA_OBSERVATIONS
    if n < n_min:
        raise ValueError(f"{order} needs at least {n_min} observations, found {n}")
    raw_covariates = _as_covariates(covariates, n, "covariates")

    z = difference(y, d)
    X = difference(raw_covariates, d)
    if d == 0:
        X = np.column_stack([np.ones(len(z)), X])
    if X.shape[1] > 0 and np.linalg.matrix_rank(X) < X.shape[1]:
        raise np.linalg.LinAlgError(
            f"The covariate matrix of {order} is singular (rank "
            f"{np.linalg.matrix_rank(X)} < {X.shape[1]} columns)"
        )

    def css_objective(theta: np.ndarray) -> float:
        ar, ma = theta[:p], theta[p:]
        if not (is_stationary(ar) and is_invertible(ma)):
            return _BARRIER
        css = _css_residuals(z, X, ar, ma)[2]
        if css <= 0.0:
            return -_BARRIER
        return 0.5 * np.log(css / (len(z) - p))

    def ml_objective(theta: np.ndarray) -> float:
        ar, ma = theta[:p], theta[p:]
        if not (is_stationary(ar) and is_invertible(ma)):
            return _BARRIER
        try:
            loglik = regression_loglik(z, X, ar, ma, n_cond=n_cond)[0]
        except ValueError:
            return _BARRIER
        return -loglik / (len(z) - n_cond)

    converged, message = True, ""
    theta = np.zeros(p + q)
    if p + q > 0:
        options = {"maxiter": max_iter, "xatol": xtol, "fatol": ftol}
        css_results = _nelder_mead(css_objective, theta, 0.1, options)
        logger.debug(f"CSS start values of {order}: {list(css_results.x)}")
        # the second run restarts from the first one's optimum with a fresh simplex
        ml_results = _nelder_mead(ml_objective, css_results.x, 0.05, options)
        ml_results = _nelder_mead(ml_objective, ml_results.x, 0.05, options)
        log_optimizer_results(
            ml_results, f"Maximum likelihood estimation of {order}", quiet=quiet
        )
        theta = np.asarray(ml_results.x, dtype=float)
        converged = ml_results.status == 0
        message = str(ml_results.message)

    ar, ma = theta[:p], theta[p:]
    loglik, sigma2, n_obs, coef = regression_loglik(z, X, ar, ma, n_cond=n_cond)
    e, _, css = _css_residuals(z, X, ar, ma, coef)
    intercept = float(coef[0]) if d == 0 else 0.0
    beta = coef[1:] if d == 0 else coef
    errors = z - X @ coef if X.shape[1] > 0 else z
    n_params = p + q + int(d == 0) + raw_covariates.shape[1] + 1

    fit = ArimaFit(
        order=order,
        ar=tuple(float(v) for v in ar),
        ma=tuple(float(v) for v in ma),
        intercept=intercept,
        beta=tuple(float(v) for v in beta),
        sigma2=sigma2,
        loglik=loglik,
        aic=aic(loglik, n_params),
        bic=bic(loglik, n_params, n_obs),
        n_obs=n_obs,
        n_params=n_params,
        css=css,
        converged=converged,
        tails=tuple(float(difference(y, j)[-1]) for j in range(d)),
        last_errors=tuple(float(v) for v in errors[len(errors) - p :]) if p else (),
        last_innovations=tuple(float(v) for v in e[len(e) - q :]) if q else (),
        last_covariates=tuple(
            tuple(float(v) for v in row) for row in raw_covariates[n - d :]
        )
        if d
        else (),
        origin=origin,
    )
    if not converged:
        raise ArimaFitError(f"{order} did not converge: {message}", best=fit)
    logger.debug(
        f"Fitted {order} with {fit.n_covariates} covariate(s): loglik = "
        f"{fit.loglik:.4f}, aic = {fit.aic:.4f}"
    )
    return fit


def forecast_arima(
    fit: ArimaFit,
    horizon: int,
    future_covariates: Optional[Union[Sequence, np.ndarray]] = None,
) -> ForecastResult:
    """
    Recursive multi-step forecast from the end of the fit's training data. Future
    innovations are set to zero; the forecasts of the differenced series are integrated
    back d times.

    Parameters
    ----------
    fit
        The fitted model.
    horizon
        Number of steps to forecast.
    future_covariates
        The covariate values of the forecast steps (horizon rows); required if and only
        if the fit has covariates.

    Returns
    -------
        The point forecasts on the scale of the original series.
    """
    check_horizon(horizon)
    p, d, q = fit.order.as_tuple()
    if fit.n_covariates > 0:
        if future_covariates is None:
            raise ValueError(
                f"The fit has {fit.n_covariates} covariate(s); their future values "
                f"are needed for forecasting"
            )
        future = _as_covariates(future_covariates, horizon, "future covariates")
        if future.shape[1] != fit.n_covariates:
            raise ValueError(
                f"Expected {fit.n_covariates} future covariate column(s), found "
                f"{future.shape[1]}"
            )
        if d:
            history = np.asarray(fit.last_covariates, dtype=float)
            future = np.diff(np.vstack([history, future]), n=d, axis=0)
        regression = future @ np.asarray(fit.beta)
    else:
        regression = np.zeros(horizon)

    errors = list(fit.last_errors)
    innovations = list(fit.last_innovations)
    z = np.empty(horizon)
    for h in range(horizon):
        w = sum(fit.ar[i] * errors[-1 - i] for i in range(p))
        w += sum(fit.ma[j] * innovations[-1 - j] for j in range(q))
        z[h] = fit.intercept + regression[h] + w
        errors.append(w)
        innovations.append(0.0)
    return ForecastResult(_integrate_forecast(z, fit.tails), origin=fit.origin)


def rolling_forecast_arima(
    series: Union[Sequence[float], np.ndarray],
    order: Union[ArimaOrder, Tuple[int, int, int]],
    future_series: Union[Sequence[float], np.ndarray],
    covariates: Optional[Union[Sequence, np.ndarray]] = None,
    future_covariates: Optional[Union[Sequence, np.ndarray]] = None,
    **fit_options,
) -> ForecastResult:
    """
    Rolling-origin evaluation: before each forecast step the given order is refitted on
    all data observed so far (training data plus the already passed test values) and a
    one-step forecast is made.

    Parameters
    ----------
    series
        The training series.
    order
        The (previously selected) model order.
    future_series
        The actual test values; each is revealed after its forecast was made.
    covariates
        Training covariates (or None).
    future_covariates
        Test covariates, one row per test value (or None).
    fit_options
        Passed on to fit_arima.

    Returns
    -------
        The one-step forecasts for all test values.
    """
    y = np.asarray(series, dtype=float).reshape(-1)
    future_y = np.asarray(future_series, dtype=float).reshape(-1)
    horizon = len(future_y)
    check_horizon(horizon)
    if covariates is None:
        all_covariates = None
    else:
        train_covariates = _as_covariates(covariates, len(y), "covariates")
        test_covariates = _as_covariates(
            future_covariates, horizon, "future covariates"
        )
        all_covariates = np.vstack([train_covariates, test_covariates])
    all_y = np.concatenate([y, future_y])

    point = []  # type: List[float]
    for h in range(horizon):
        n = len(y) + h
        fit = fit_arima(
            all_y[:n],
            order,
            None if all_covariates is None else all_covariates[:n],
            quiet=True,
            **fit_options,
        )
        step_covariates = None if all_covariates is None else all_covariates[n : n + 1]
        point.append(float(forecast_arima(fit, 1, step_covariates).point[0]))
    return ForecastResult(np.array(point))
