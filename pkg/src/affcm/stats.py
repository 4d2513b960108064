"""Friedman test and Nemenyi critical difference for multi-algorithm comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _st

from .core import ConfigurationError

# Studentized range quantiles divided by sqrt(2), infinite degrees of freedom,
# indexed by the number of compared algorithms K = 2..20. K <= 10 follows the
# published Nemenyi table; larger K were computed from the studentized range.
Q_ALPHA = {
    0.05: (1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
           3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544),
    0.10: (1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920,
           2.978, 3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319),
}


@dataclass
class FriedmanResult:
    ranks: np.ndarray
    mean_ranks: np.ndarray
    statistic: float
    p_value: float
    alpha: float

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha


def friedman_ranks(scores, higher_is_better: bool = False, alpha: float = 0.05) -> FriedmanResult:
    """Rank K algorithms on N datasets (rank 1 = best, ties averaged).

    The statistic is ``12N / (K(K+1)) * (sum_j R_j^2 - K(K+1)^2 / 4)`` with
    ``R_j`` the mean ranks, referred to chi-square with K-1 degrees of freedom.
    """
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] < 2 or s.shape[1] < 2:
        raise ConfigurationError("need a score table with at least 2 datasets and 2 algorithms")
    if not np.isfinite(s).all():
        raise ConfigurationError("scores must be finite")
    n, k = s.shape
    ranks = _st.rankdata(-s if higher_is_better else s, axis=1, method="average")
    mean_ranks = ranks.mean(axis=0)
    chi2 = 12.0 * n / (k * (k + 1)) * (np.sum(mean_ranks**2) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(float(chi2), 0.0)
    p = float(_st.chi2.sf(chi2, k - 1))
    return FriedmanResult(ranks, mean_ranks, chi2, p, alpha)


def nemenyi_cd(k: int, n: int, alpha: float = 0.05) -> float:
    """``q_alpha * sqrt(K(K+1) / (6N))``."""
    table = Q_ALPHA.get(round(alpha, 10))
    if table is None:
        raise ConfigurationError(f"alpha must be one of {sorted(Q_ALPHA)}")
    if not 2 <= k <= len(table) + 1:
        raise ConfigurationError(f"K must be in [2, {len(table) + 1}]")
    if n < 1:
        raise ConfigurationError("N must be >= 1")
    return table[k - 2] * math.sqrt(k * (k + 1) / (6.0 * n))
