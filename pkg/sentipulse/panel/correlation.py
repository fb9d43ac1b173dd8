# standard library imports
from typing import Sequence, Union

# third party imports
import numpy as np
from loguru import logger

# local imports
from sentipulse.definition.panel import Panel, CorrelationMatrix, PANEL_COLUMNS


class UndefinedCorrelationError(ValueError):
    """Raised when a variable of a Pearson correlation has zero variance."""


def pearson(
    x: Union[Sequence[float], np.ndarray], y: Union[Sequence[float], np.ndarray]
) -> float:
    """
    Computes the sample Pearson product-moment correlation coefficient of two equally
    long numeric sequences.

    Parameters
    ----------
    x
        First sequence.
    y
        Second sequence, same length as x.

    Returns
    -------
    r
        The coefficient, clipped to [-1, 1].
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(
            f"Pearson correlation needs two equally long 1D sequences, found shapes "
            f"{x.shape} and {y.shape}"
        )
    if len(x) < 2:
        raise ValueError(f"Pearson correlation needs at least 2 values, found {len(x)}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError(
            "The correlation with a constant sequence is undefined"
        )
    dx = x - np.mean(x)
    dy = y - np.mean(y)
    r = np.sum(dx * dy) / np.sqrt(np.sum(dx * dx) * np.sum(dy * dy))
    return float(np.clip(r, -1.0, 1.0))


def correlation_matrix(
    panel: Panel, columns: Sequence[str] = PANEL_COLUMNS
) -> CorrelationMatrix:
    """
    Computes the pairwise Pearson coefficients of a panel's columns (open price and the
    five sentiment categories by default). Pairs whose coefficient is undefined are set
    to NaN and their reason is recorded in the result's 'failures'.

    Parameters
    ----------
    panel
        The panel; it needs at least two rows.
    columns
        The panel columns to correlate.

    Returns
    -------
        The symmetric correlation matrix with a unit diagonal.
    """
    if len(panel) < 2:
        raise ValueError(
            f"A correlation matrix needs at least 2 panel rows, the panel of "
            f"'{panel.company}' has {len(panel)}"
        )
    labels = tuple(columns)
    data = panel.matrix(labels)
    k = len(labels)
    values = np.eye(k)
    failures = {}
    for i in range(k):
        for j in range(i + 1, k):
            try:
                r = pearson(data[:, i], data[:, j])
            except UndefinedCorrelationError as error:
                r = np.nan
                failures[(labels[i], labels[j])] = str(error)
            values[i, j] = values[j, i] = r
    if failures:
        logger.warning(
            f"Correlation of '{panel.company}': {len(failures)} undefined pair(s)"
        )
    return CorrelationMatrix(labels, values, failures)
