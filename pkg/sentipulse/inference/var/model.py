"""
Vector autoregressions Y_t = c + A_1 Y_(t-1) + ... + A_p Y_(t-p) + e_t, estimated
equation by equation with ordinary least squares.
"""

# standard library imports
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

# third party imports
import numpy as np
from loguru import logger
from tabulate import tabulate

# local imports
from sentipulse.inference.forecaster import aic, bic, check_criterion, check_horizon
from sentipulse.subroutines import titled_table, log_multiline

MIN_EXTRA_OBSERVATIONS = 10


@dataclass(frozen=True, eq=False)
class VarFit:
    """
    A fitted VAR(p) system of k variables.

    Parameters
    ----------
    labels
        The variable names (length k).
    c
        Intercept vector (length k).
    A
        Coefficient matrices A_1, ..., A_p, shape (p, k, k); A[i][r, s] is the effect of
        variable s at lag i + 1 on variable r.
    sigma
        Maximum likelihood residual covariance (divisor n_obs).
    loglik
        Gaussian log-likelihood; +inf if sigma is singular.
    aic, bic
        Information criteria with k + p * k^2 free parameters (covariance excluded).
    n_obs
        Number of modelled observations (input rows minus p).
    history
        The last p observations of the data (oldest first), used for forecasting.
    """

    labels: Tuple[str, ...]
    c: np.ndarray
    A: np.ndarray
    sigma: np.ndarray
    loglik: float
    aic: float
    bic: float
    n_obs: int
    history: np.ndarray

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def p(self) -> int:
        return self.A.shape[0]

    @property
    def n_params(self) -> int:
        return self.k + self.p * self.k ** 2

    def criterion(self, name: str) -> float:
        return self.aic if name == "aic" else self.bic

    def to_dict(self) -> dict:
        """JSON-compatible representation; matrices are nested lists (row-major)."""
        return {
            "labels": list(self.labels),
            "k": self.k,
            "p": self.p,
            "c": self.c.tolist(),
            "A": self.A.tolist(),
            "sigma": self.sigma.tolist(),
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "n_obs": self.n_obs,
            "history": self.history.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VarFit":
        k = len(data["labels"])
        return cls(
            labels=tuple(data["labels"]),
            c=np.asarray(data["c"], dtype=float),
            A=np.asarray(data["A"], dtype=float).reshape(-1, k, k),
            sigma=np.asarray(data["sigma"], dtype=float),
            loglik=float(data["loglik"]),
            aic=float(data["aic"]),
            bic=float(data["bic"]),
            n_obs=int(data["n_obs"]),
            history=np.asarray(data["history"], dtype=float).reshape(-1, k),
        )


def as_data_matrix(data: Union[Sequence, np.ndarray]) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    if data.ndim != 2:
        raise ValueError(f"VAR data must be an n x k matrix, found shape {data.shape}")
    if not np.all(np.isfinite(data)):
        raise ValueError("VAR data contains non-finite values")
    return data


def check_labels(labels: Optional[Sequence[str]], k: int) -> Tuple[str, ...]:
    if labels is None:
        return tuple(f"y{i}" for i in range(k))
    labels = tuple(labels)
    if len(labels) != k or len(set(labels)) != k:
        raise ValueError(f"Need {k} distinct labels, found {labels}")
    return labels


def lagged_regressors(data: np.ndarray, p: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Builds the regression of a VAR(p): the targets Y_t for t = p, ..., n - 1 and the
    regressors [1, Y_(t-1), ..., Y_(t-p)] (constant first, then lag by lag).
    """
    n, k = data.shape
    Y = data[p:]
    X = np.ones((n - p, 1 + k * p))
    for i in range(1, p + 1):
        X[:, 1 + (i - 1) * k : 1 + i * k] = data[p - i : n - i]
    return Y, X


def gaussian_loglik(sigma: np.ndarray, n_obs: int) -> float:
    """Log-likelihood of a VAR at its ML covariance; +inf for a singular covariance."""
    k = sigma.shape[0]
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        return np.inf
    return float(-0.5 * n_obs * (k * np.log(2.0 * np.pi) + logdet + k))


def fit_var(
    data: Union[Sequence, np.ndarray],
    p: int,
    labels: Optional[Sequence[str]] = None,
) -> VarFit:
    """
    Fits a VAR(p) by ordinary least squares.

    Parameters
    ----------
    data
        The n x k data matrix (oldest row first); a 1D input is a single variable.
    p
        The lag order, at least 1.
    labels
        Names of the k variables.

    Returns
    -------
    fit
        The fitted system.
    """
    data = as_data_matrix(data)
    n, k = data.shape
    labels = check_labels(labels, k)
    if int(p) != p or p < 1:
        raise ValueError(f"The VAR lag order must be a positive int, found {p}")
    n_min = k * p + MIN_EXTRA_OBSERVATIONS
    if n < n_min:
        raise ValueError(
            f"A VAR({p}) of {k} variables needs at least {n_min} observations, "
            f"found {n}"
        )
    constant = [label for label, column in zip(labels, data.T) if np.ptp(column) == 0]
    if constant:
        raise ValueError(f"The variable(s) {constant} have zero variance")

    Y, X = lagged_regressors(data, p)
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        raise np.linalg.LinAlgError(
            f"The regressors of the VAR({p}) are rank deficient ({rank} < "
            f"{X.shape[1]})"
        )
    B = np.linalg.lstsq(X, Y, rcond=None)[0]
    residuals = Y - X @ B
    n_obs = n - p
    sigma = residuals.T @ residuals / n_obs
    sigma = 0.5 * (sigma + sigma.T)
    c = B[0]
    A = np.stack([B[1 + i * k : 1 + (i + 1) * k].T for i in range(p)])
    loglik = gaussian_loglik(sigma, n_obs)
    n_params = k + p * k ** 2
    return VarFit(
        labels=labels,
        c=c,
        A=A,
        sigma=sigma,
        loglik=loglik,
        aic=aic(loglik, n_params),
        bic=bic(loglik, n_params, n_obs),
        n_obs=n_obs,
        history=data[n - p :].copy(),
    )


def default_p_max(n: int, k: int) -> int:
    """The default lag bound min(10, n // (3k)), but at least 1."""
    return max(1, min(10, n // (3 * k)))


def select_var_lag(
    data: Union[Sequence, np.ndarray],
    p_max: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
    criterion: str = "aic",
) -> Tuple[int, VarFit]:
    """
    Chooses the lag order of a VAR by an information criterion. All candidate orders
    1, ..., p_max are estimated on the same sample (the first p_max rows only serve as
    lags), the chosen order is then refitted on all data. Ties go to the smaller order.

    Parameters
    ----------
    data
        The n x k data matrix.
    p_max
        Largest candidate order; defaults to min(10, n // (3k)).
    labels
        Names of the k variables.
    criterion
        'aic' (default) or 'bic'.

    Returns
    -------
    p
        The selected order.
    fit
        The selected order fitted on the full sample.
    """
    criterion = check_criterion(criterion)
    data = as_data_matrix(data)
    n, k = data.shape
    if p_max is None:
        p_max = default_p_max(n, k)
    if p_max < 1:
        raise ValueError(f"p_max must be at least 1, found {p_max}")
    while p_max > 1 and n < k * p_max + MIN_EXTRA_OBSERVATIONS:
        p_max -= 1
        logger.warning(f"Too few observations, lowering the VAR lag bound to {p_max}")
    if p_max == 1:
        return 1, fit_var(data, 1, labels)

    best_p, best_value, rows = 1, np.inf, []
    for p in range(1, p_max + 1):
        value = fit_var(data[p_max - p :], p, labels).criterion(criterion)
        rows.append([p, f"{value:.4f}"])
        if value < best_value:
            best_p, best_value = p, value
    log_multiline(
        titled_table(
            f"VAR lag selection ({criterion.upper()})",
            tabulate(rows, headers=["p", criterion], tablefmt="presto"),
        ),
        printer=logger.debug,
    )
    logger.info(f"Selected VAR({best_p}) for the variables {list(labels or [])}")
    return best_p, fit_var(data, best_p, labels)


def forecast_var(fit: VarFit, horizon: int) -> np.ndarray:
    """
    Recursive forecast with zero future errors.

    Parameters
    ----------
    fit
        The fitted system.
    horizon
        Number of steps.

    Returns
    -------
        A horizon x k matrix of forecasts (column order as the fit's labels).
    """
    check_horizon(horizon)
    values = list(fit.history)
    forecasts = np.empty((horizon, fit.k))
    for h in range(horizon):
        y = fit.c.copy()
        for i in range(fit.p):
            y += fit.A[i] @ values[-1 - i]
        forecasts[h] = y
        values.append(y)
    return forecasts
