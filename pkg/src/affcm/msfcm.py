"""Membership-scaling FCM: global-bound sample filter plus M_j / beta_j rescaling."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import Dataset, DistanceTable, MembershipMatrix, RunConfig, RunTrace
from .engine import ScaleResult, run_engine


def lemma1_filter(distances: DistanceTable, displacements) -> np.ndarray:
    """Boolean mask of samples whose nearest center cannot change after one update.

    Sample j passes when ``D2_j - max(delta) >= D1_j + delta[nearest_j]``.
    """
    delta = np.asarray(displacements, dtype=np.float64)
    return _kernels.lemma1_mask(distances.dist, distances.nearest, delta)


def nearest_scale_target(distances: DistanceTable, m: float) -> np.ndarray:
    """``M_j = 1 / (1 + (c-1) (D1_j / Dc_j)^(2/(m-1)))`` for every sample."""
    d = distances.dist
    c = d.shape[0]
    d1 = d.min(axis=0)
    dc = d.max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dc > 0.0, d1 / dc, 1.0)
    return 1.0 / (1.0 + (c - 1) * ratio ** (2.0 / (m - 1.0)))


def msfcm_scale(memberships: MembershipMatrix, distances: DistanceTable, q, m: float) -> MembershipMatrix:
    """Raise the nearest grade of every sample in ``q`` to ``M_j``; shrink the rest by ``beta_j``.

    Columns whose nearest grade is already 1 are left alone.
    """
    q = np.asarray(q, dtype=bool)
    out = _kernels.msfcm_scale(memberships.grades, distances.dist, q, distances.nearest, m)
    return MembershipMatrix(out)


def _scale_step(u, d, nearest, delta, m):
    q = _kernels.lemma1_mask(d, nearest, delta)
    w = _kernels.msfcm_scale(u, d, q, nearest, m)
    nq = int(q.sum())
    return ScaleResult(w, nq, nq * (d.shape[0] - 1), q=q)


def run_msfcm(data: Dataset, cfg: RunConfig, **kwargs) -> RunTrace:
    return run_engine(data, cfg, _scale_step, algorithm="msfcm", **kwargs)
