"""Plain fuzzy c-means: the reference engine."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import CentroidSet, ConfigurationError, Dataset, DistanceTable, MembershipMatrix, RunConfig, RunTrace, weighted_centers
from .engine import run_engine


def update_memberships(distances: DistanceTable, m: float) -> MembershipMatrix:
    """Standard FCM grades ``u_ij = 1 / sum_k (d_ij / d_kj)^(2/(m-1))``.

    A sample sitting exactly on a center gets grade 1 for the first such
    center and 0 elsewhere.
    """
    if not m > 1.0:
        raise ConfigurationError("fuzzifier m must be > 1")
    return MembershipMatrix(_kernels.memberships(np.asarray(distances.dist, dtype=np.float64), m))


def update_centers(data: Dataset, memberships: MembershipMatrix, m: float) -> CentroidSet:
    u = memberships.grades
    if u.shape[1] != data.n:
        raise ConfigurationError(f"memberships cover {u.shape[1]} samples, dataset has {data.n}")
    return CentroidSet(weighted_centers(data.samples, u, m))


def run_fcm(data: Dataset, cfg: RunConfig, **kwargs) -> RunTrace:
    """Run FCM from ``initialize_centers`` (or ``init_centers=``) until the centers settle.

    Extra keyword arguments go to :func:`affcm.engine.run_engine`
    (``init_centers``, ``observer``, ``timing``).
    """
    return run_engine(data, cfg, None, algorithm="fcm", **kwargs)
