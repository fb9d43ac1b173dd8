"""
Exact Gaussian likelihood of a zero-mean ARMA(p, q) process. The likelihood is the
prediction error decomposition a Kalman filter on the state-space form (Harvey's
representation) produces. It is obtained from the Cholesky factor of the covariance
of the series after its AR part is filtered out for t >= max(p, q); that covariance is
banded, so the factorization costs O(n max(p, q)^2) and needs no loop over time.
"""

# standard library imports
from typing import Sequence, Tuple

# third party imports
import numpy as np
from scipy.linalg import solve_discrete_lyapunov
from scipy.linalg import cholesky_banded, solve_banded
from scipy.signal import lfilter


def is_stationary(ar: Sequence[float]) -> bool:
    """True if all roots of 1 - ar_1 z - ... - ar_p z^p lie outside the unit circle."""
    ar = np.asarray(ar, dtype=float)
    if len(ar) == 0:
        return True
    # roots of z^p - ar_1 z^(p-1) - ... - ar_p are the inverses of the polynomial's
    return bool(np.all(np.abs(np.roots(np.r_[1.0, -ar])) < 1.0))


def is_invertible(ma: Sequence[float]) -> bool:
    """True if all roots of 1 + ma_1 z + ... + ma_q z^q lie outside the unit circle."""
    ma = np.asarray(ma, dtype=float)
    if len(ma) == 0:
        return True
    return bool(np.all(np.abs(np.roots(np.r_[1.0, ma])) < 1.0))


def state_space_matrices(
    ar: Sequence[float], ma: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Builds the transition matrix T and the disturbance loading R of the ARMA process
    x_t = ar_1 x_(t-1) + ... + e_t + ma_1 e_(t-1) + ... with a state of dimension
    r = max(p, q + 1). The observation is the first state element.

    Returns
    -------
    T
        The r x r transition matrix (AR coefficients in the first column, ones on the
        superdiagonal).
    R
        The loading vector (1, ma_1, ..., ma_(r-1)) with zero padding.
    """
    ar = np.asarray(ar, dtype=float)
    ma = np.asarray(ma, dtype=float)
    r = max(len(ar), len(ma) + 1)
    T = np.zeros((r, r))
    T[: len(ar), 0] = ar
    T[: r - 1, 1:] = np.eye(r - 1)
    R = np.zeros(r)
    R[0] = 1.0
    R[1 : len(ma) + 1] = ma
    return T, R


def arma_autocovariance(
    ar: Sequence[float], ma: Sequence[float], n_lags: int
) -> np.ndarray:
    """
    Autocovariances gamma(0), ..., gamma(n_lags - 1) of a stationary ARMA process with
    unit innovation variance, taken from the stationary state covariance P0 (solution
    of P0 = T P0 T' + R R') as gamma(k) = (T^k P0)[0, 0].
    """
    T, R = state_space_matrices(ar, ma)
    M = solve_discrete_lyapunov(T, np.outer(R, R))
    gamma = np.empty(n_lags)
    for k in range(n_lags):
        gamma[k] = M[0, 0]
        M = T @ M
    return gamma


def _covariance_band(ar: np.ndarray, ma: np.ndarray, n: int) -> np.ndarray:
    """
    Lower band (LAPACK layout, band[i - j, j] = S[i, j]) of the covariance S of
    w_t = x_t for t < m and w_t = x_t - ar_1 x_(t-1) - ... - ar_p x_(t-p) for t >= m,
    where m = max(p, q). The lower bandwidth is m.
    """
    p, q = len(ar), len(ma)
    m = max(p, q)
    theta = np.r_[1.0, ma]
    # weights of the MA(inf) representation, psi_0 ... psi_q
    psi = lfilter(theta, np.r_[1.0, -ar], np.r_[1.0, np.zeros(q)])
    gamma = arma_autocovariance(ar, ma, m)
    band = np.zeros((m + 1, n))
    for h in range(m + 1):
        if h <= q:
            # covariance of the MA(q) part w_t, t >= m
            band[h, : n - h] = theta[: q + 1 - h] @ theta[h:]
            # covariance of w_(j+h), j + h >= m, with x_j, j < m
            cross = theta[h:] @ psi[: q + 1 - h]
        else:
            cross = 0.0
        for j in range(min(m, n - h)):
            band[h, j] = gamma[h] if j + h < m else cross
    return band


def arma_innovations(
    x: np.ndarray, ar: Sequence[float], ma: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Standardized one-step prediction errors of a zero-mean ARMA series and the log of
    their variances (in units of the innovation variance).

    Parameters
    ----------
    x
        The series, either a vector or a matrix whose columns are filtered alike.
    ar
        The AR coefficients; they have to describe a stationary process.
    ma
        The MA coefficients.

    Returns
    -------
    eta
        Prediction errors divided by their standard deviations (same shape as x).
    log_f
        Log prediction error variance of every time step.
    """
    x = np.asarray(x, dtype=float)
    ar = np.asarray(ar, dtype=float)
    ma = np.asarray(ma, dtype=float)
    n, p = len(x), len(ar)
    m = max(p, len(ma))
    if m == 0:
        return x.copy(), np.zeros(n)
    w = x.copy()
    for i, phi in enumerate(ar, start=1):
        w[m:] -= phi * x[m - i : n - i]
    cb = cholesky_banded(_covariance_band(ar, ma, n), lower=True, check_finite=False)
    eta = solve_banded((m, 0), cb, w, check_finite=False)
    return eta, 2.0 * np.log(cb[0])


def regression_loglik(
    z: np.ndarray,
    X: np.ndarray,
    ar: Sequence[float],
    ma: Sequence[float],
    n_cond: int = 0,
) -> Tuple[float, float, int, np.ndarray]:
    """
    Exact Gaussian log-likelihood of z = X beta + u with zero-mean ARMA errors u. The
    regression coefficients (generalized least squares) and the innovation variance are
    concentrated out. The first 'n_cond' observations are left out of the likelihood
    (i.e. the likelihood is conditional on them).

    Parameters
    ----------
    z
        The observed series.
    X
        Regressor matrix with one row per observation; it may have zero columns.
    ar, ma
        The ARMA coefficients.
    n_cond
        Number of leading observations the likelihood is conditioned on.

    Returns
    -------
    loglik
        The concentrated log-likelihood (+inf for a perfect fit).
    sigma2
        The maximum likelihood estimate of the innovation variance.
    n_obs
        The number of observations the likelihood is made of.
    coef
        The regression coefficients (one per column of X).
    """
    z = np.asarray(z, dtype=float)
    if not is_stationary(ar):
        raise ValueError(f"The AR coefficients {list(ar)} are not stationary")
    if not 0 <= n_cond < len(z):
        raise ValueError(
            f"Cannot condition on {n_cond} of {len(z)} observations; at least one "
            f"observation has to remain"
        )
    X = np.asarray(X, dtype=float).reshape(len(z), -1)
    try:
        eta, log_f = arma_innovations(np.column_stack([z, X]), ar, ma)
    except np.linalg.LinAlgError as e:
        raise ValueError(f"Singular ARMA covariance for {list(ar)}, {list(ma)}") from e
    eta, log_f = eta[n_cond:], log_f[n_cond:]
    n_obs = len(z) - n_cond

    if X.shape[1] > 0:
        coef = np.linalg.lstsq(eta[:, 1:], eta[:, 0], rcond=None)[0]
        resid = eta[:, 0] - eta[:, 1:] @ coef
    else:
        coef, resid = np.empty(0), eta[:, 0]
    sigma2 = float(resid @ resid) / n_obs
    if sigma2 <= 0.0:
        return np.inf, 0.0, n_obs, coef
    loglik = -0.5 * n_obs * (np.log(2.0 * np.pi * sigma2) + 1.0) - 0.5 * np.sum(log_f)
    return float(loglik), sigma2, n_obs, coef


def exact_loglik(
    x: Sequence[float], ar: Sequence[float], ma: Sequence[float], n_cond: int = 0
) -> Tuple[float, float, int]:
    """
    Exact Gaussian log-likelihood of a zero-mean ARMA series with the innovation
    variance concentrated out; see regression_loglik.

    Returns
    -------
    loglik, sigma2, n_obs
        The concentrated log-likelihood, the innovation variance estimate and the
        number of observations the likelihood is made of.
    """
    x = np.asarray(x, dtype=float)
    loglik, sigma2, n_obs, _ = regression_loglik(
        x, np.empty((len(x), 0)), ar, ma, n_cond
    )
    return loglik, sigma2, n_obs
