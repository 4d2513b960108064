"""Objectives and clustering validity indices.

Internal indices (PC, DBI, XB) take memberships / partitions and centers;
external scores (F*, ARI, NMI) compare a hard partition with ground-truth
labels, skipping rows labelled -1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import NOISE_LABEL, CentroidSet, ConfigurationError, Dataset, MembershipMatrix

logger = logging.getLogger(__name__)


class DegenerateIndexError(ArithmeticError):
    """An index is undefined, e.g. two centers coincide."""


@dataclass
class HardPartition:
    assign: np.ndarray
    c: int

    def __post_init__(self):
        self.assign = np.asarray(self.assign, dtype=np.int64)
        if self.assign.ndim != 1:
            raise ConfigurationError("assignment must be a vector")
        if self.assign.size and (self.assign.min() < 0 or self.assign.max() >= self.c):
            raise ConfigurationError(f"assignments must lie in [0, {self.c})")


def _samples(data):
    return data.samples if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)


def _centers(centers):
    return centers.centers if isinstance(centers, CentroidSet) else np.asarray(centers, dtype=np.float64)


def _grades(memberships):
    if isinstance(memberships, MembershipMatrix):
        return memberships.grades
    return np.asarray(memberships, dtype=np.float64)


def hard_partition(data, centers) -> HardPartition:
    V = _centers(centers)
    _, nearest = _kernels.distances_numpy(_samples(data), V)
    return HardPartition(nearest, V.shape[0])


def _sq_dist(X, V):
    d, _ = _kernels.distances_numpy(X, V)
    return d**2


def fuzzy_objective(data, memberships, centers, m: float) -> float:
    """``sum_ij u_ij^m ||x_j - v_i||^2``."""
    u = _grades(memberships)
    return float(((u**m) * _sq_dist(_samples(data), _centers(centers))).sum())


def hard_objective(data, partition: HardPartition, centers) -> float:
    X, V = _samples(data), _centers(centers)
    diff = X - V[partition.assign]
    return float((diff * diff).sum())


def pc(memberships) -> float:
    """Partition coefficient, mean over samples of the squared grades."""
    u = _grades(memberships)
    return float((u * u).sum() / u.shape[1])


def _min_center_gap(V) -> float:
    c = V.shape[0]
    gaps = ((V[:, None, :] - V[None, :, :]) ** 2).sum(axis=2)
    gaps[np.arange(c), np.arange(c)] = np.inf
    return float(gaps.min())


def dbi(data, partition: HardPartition, centers) -> float:
    """Davies-Bouldin with mean squared scatter over squared center distance.

    An empty cluster contributes zero scatter but still counts as a rival.
    """
    X, V = _samples(data), _centers(centers)
    c = V.shape[0]
    scatter = np.zeros(c)
    for i in range(c):
        members = X[partition.assign == i]
        if len(members) == 0:
            logger.warning("cluster %d is empty; its scatter is taken as 0", i)
            continue
        scatter[i] = ((members - V[i]) ** 2).sum(axis=1).mean()
    sep = ((V[:, None, :] - V[None, :, :]) ** 2).sum(axis=2)
    off = ~np.eye(c, dtype=bool)
    if (sep[off] == 0.0).any():
        raise DegenerateIndexError("DBI undefined: two centers coincide")
    ratio = (scatter[:, None] + scatter[None, :]) / np.where(off, sep, 1.0)
    ratio[~off] = -np.inf
    return float(ratio.max(axis=0).mean())


def xb(data, memberships, centers, m: float) -> float:
    X, V = _samples(data), _centers(centers)
    gap = _min_center_gap(V)
    if gap == 0.0:
        raise DegenerateIndexError("XB undefined: two centers coincide")
    return fuzzy_objective(X, memberships, V, m) / (X.shape[0] * gap)


# ----------------------------------------------------------------------------
# external scores


def contingency(labels, assign) -> np.ndarray:
    """Class-by-cluster count table over the rows that carry a real label."""
    labels = np.asarray(labels, dtype=np.int64)
    assign = np.asarray(assign, dtype=np.int64)
    if labels.shape != assign.shape:
        raise ConfigurationError("labels and partition differ in length")
    keep = labels != NOISE_LABEL
    _, li = np.unique(labels[keep], return_inverse=True)
    _, ai = np.unique(assign[keep], return_inverse=True)
    table = np.zeros((li.max(initial=-1) + 1, ai.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(table, (li, ai), 1)
    return table


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1.0) / 2.0


def ari(table: np.ndarray) -> float:
    n = table.sum()
    total = _comb2(n)
    if total == 0:
        return 1.0
    index = _comb2(table).sum()
    a = _comb2(table.sum(axis=1)).sum()
    b = _comb2(table.sum(axis=0)).sum()
    expected = a * b / total
    best = (a + b) / 2.0
    if best == expected:
        # both partitions trivial in the same way (one block or all singletons)
        return 1.0
    return float((index - expected) / (best - expected))


def _entropy(counts, n):
    pr = counts[counts > 0] / n
    return float(-(pr * np.log(pr)).sum())


def nmi(table: np.ndarray, average: str = "arithmetic") -> float:
    n = table.sum()
    if n == 0:
        return 1.0
    rows, cols = table.sum(axis=1), table.sum(axis=0)
    h_class, h_clust = _entropy(rows, n), _entropy(cols, n)
    nz = table > 0
    outer = np.outer(rows, cols)[nz]
    mi = float((table[nz] / n * np.log(n * table[nz] / outer)).sum())
    if average == "arithmetic":
        norm = (h_class + h_clust) / 2.0
    elif average == "geometric":
        norm = np.sqrt(h_class * h_clust)
    elif average == "max":
        norm = max(h_class, h_clust)
    elif average == "min":
        norm = min(h_class, h_clust)
    else:
        raise ValueError(f"unknown NMI normalization {average!r}")
    if h_class == 0.0 and h_clust == 0.0:
        return 1.0
    if norm == 0.0:
        return 0.0
    return float(max(mi, 0.0) / norm)


def f_star(table: np.ndarray) -> float:
    """Class-size weighted best-match F1 over clusters."""
    n = table.sum()
    if n == 0:
        return 1.0
    rows, cols = table.sum(axis=1), table.sum(axis=0)
    f1 = 2.0 * table / (rows[:, None] + cols[None, :])
    return float((rows / n * f1.max(axis=1)).sum())


def external_scores(partition, labels, nmi_average: str = "arithmetic") -> dict:
    assign = partition.assign if isinstance(partition, HardPartition) else partition
    table = contingency(labels, assign)
    return {"fStar": f_star(table), "ari": ari(table), "nmi": nmi(table, nmi_average)}


def evaluate(data: Dataset, centers, memberships, m: float) -> dict:
    """All indices for one finished run; undefined internal indices become ``None``."""
    V = _centers(centers)
    part = hard_partition(data, V)
    out = {"pc": pc(memberships)}
    for name, fn in (("dbi", lambda: dbi(data, part, V)), ("xb", lambda: xb(data, memberships, V, m))):
        try:
            out[name] = fn()
        except DegenerateIndexError as exc:
            logger.warning("%s", exc)
            out[name] = None
    out["jFuzzy"] = fuzzy_objective(data, memberships, V, m)
    out["jHard"] = hard_objective(data, part, V)
    if data.labels is not None and (data.labels != NOISE_LABEL).any():
        out.update(external_scores(part, data.labels))
    return out
