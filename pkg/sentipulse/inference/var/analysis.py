# standard library imports
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

# third party imports
import numpy as np
from scipy.stats import f as f_distribution
from loguru import logger

# local imports
from sentipulse.inference.var.model import VarFit, lagged_regressors
from sentipulse.inference.var.model import as_data_matrix, check_labels


@dataclass(frozen=True)
class GrangerResult:
    """
    Outcome of an F-test of whether the lags of 'cause' improve the prediction of
    'effect' beyond the lags of all other variables.
    """

    cause: str
    effect: str
    f_stat: float
    p_value: float
    restricted_rss: float
    unrestricted_rss: float
    df: Tuple[int, int]

    def rejects(self, level: float = 0.05) -> bool:
        """True if 'no Granger causality' is rejected at the given level."""
        return self.p_value < level


def _rss(Y: np.ndarray, X: np.ndarray) -> float:
    coef = np.linalg.lstsq(X, Y, rcond=None)[0]
    residuals = Y - X @ coef
    return float(residuals @ residuals)


def granger_causality(
    data: Union[Sequence, np.ndarray],
    labels: Sequence[str],
    cause: str,
    effect: str,
    p: int,
) -> GrangerResult:
    """
    Granger causality F-test within a VAR(p) of all given variables. The unrestricted
    model regresses 'effect' on a constant and p lags of every variable, the restricted
    one leaves out the lags of 'cause'.

    Parameters
    ----------
    data
        The n x k data matrix.
    labels
        Names of the k columns.
    cause
        Label of the potentially causing variable.
    effect
        Label of the affected variable.
    p
        Number of lags.

    Returns
    -------
        The test result with F ~ F(p, n - p - (1 + k p)) under the null hypothesis.
    """
    data = as_data_matrix(data)
    n, k = data.shape
    labels = check_labels(labels, k)
    for label in (cause, effect):
        if label not in labels:
            raise ValueError(f"Unknown variable '{label}', known are {labels}")
    if cause == effect:
        raise ValueError(f"Cause and effect must differ, both are '{cause}'")
    if int(p) != p or p < 1:
        raise ValueError(f"The number of lags must be a positive int, found {p}")
    df_num, df_den = p, n - p - (1 + k * p)
    if df_den <= 0 or n - p <= 0:
        raise ValueError(
            f"Degenerate degrees of freedom ({df_num}, {df_den}) for {n} observations "
            f"of {k} variables at lag {p}"
        )

    Y, X = lagged_regressors(data, p)
    y = Y[:, labels.index(effect)]
    i_cause = labels.index(cause)
    cause_columns = [1 + lag * k + i_cause for lag in range(p)]
    restricted = np.delete(X, cause_columns, axis=1)
    rss_u = _rss(y, X)
    rss_r = max(_rss(y, restricted), rss_u)

    if rss_u > 0.0:
        f_stat = ((rss_r - rss_u) / df_num) / (rss_u / df_den)
        p_value = float(f_distribution.sf(f_stat, df_num, df_den))
    elif rss_r > 0.0:
        f_stat, p_value = np.inf, 0.0
    else:
        f_stat, p_value = 0.0, 1.0
    logger.debug(
        f"Granger test {cause} -> {effect} (p = {p}): F = {f_stat:.4f}, "
        f"p-value = {p_value:.4g}"
    )
    return GrangerResult(
        cause=cause,
        effect=effect,
        f_stat=float(f_stat),
        p_value=p_value,
        restricted_rss=rss_r,
        unrestricted_rss=rss_u,
        df=(df_num, df_den),
    )


def granger_matrix(
    data: Union[Sequence, np.ndarray], labels: Sequence[str], p: int
) -> List[GrangerResult]:
    """Runs granger_causality for every ordered pair of distinct variables."""
    return [
        granger_causality(data, labels, cause, effect, p)
        for effect in labels
        for cause in labels
        if cause != effect
    ]


@dataclass(frozen=True, eq=False)
class IrfResult:
    """
    Non-orthogonalized impulse responses. responses[h][r, s] is the response of
    variable r, h steps after a unit shock in variable s.
    """

    labels: Tuple[str, ...]
    responses: np.ndarray

    @property
    def horizon(self) -> int:
        return self.responses.shape[0] - 1

    def response(self, effect: str, shock: str) -> np.ndarray:
        """The responses of 'effect' to a unit shock in 'shock' for h = 0, ..., H."""
        return self.responses[:, self.labels.index(effect), self.labels.index(shock)]


def impulse_response(fit: VarFit, horizon: int) -> IrfResult:
    """
    Computes Psi_0 = I and Psi_h = A_1 Psi_(h-1) + ... + A_p Psi_(h-p) (terms with
    h - i < 0 left out) for h = 1, ..., horizon.
    """
    if int(horizon) != horizon or horizon < 0:
        raise ValueError(f"The IRF horizon must be a non-negative int: {horizon}")
    responses = np.zeros((horizon + 1, fit.k, fit.k))
    responses[0] = np.eye(fit.k)
    for h in range(1, horizon + 1):
        for i in range(1, min(h, fit.p) + 1):
            responses[h] += fit.A[i - 1] @ responses[h - i]
    return IrfResult(fit.labels, responses)
