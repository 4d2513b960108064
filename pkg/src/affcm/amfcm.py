"""Accelerated FCM: per-center affinity filtering with membership renormalization.

Each iteration runs a tentative FCM center update to measure how far every
center would move (``delta``). A center i is ruled out for sample j when

    d_ij - delta_i >= d_{I*_j, j} + delta_{I*_j}

i.e. its best possible distance after the move still cannot beat the worst
possible distance of the current nearest center I*_j. Ruled-out grades are
zeroed and the surviving grades of the column renormalized; the real center
update then uses those scaled grades.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import AffinitySets, Dataset, DistanceTable, MembershipMatrix, RunConfig, RunTrace
from .engine import ScaleResult, run_engine


def lemma2_filter(distances: DistanceTable, displacements) -> AffinitySets:
    delta = np.asarray(displacements, dtype=np.float64)
    mask = _kernels.lemma2_mask(distances.dist, distances.nearest, delta)
    return AffinitySets(mask, distances.nearest)


def amfcm_scale(
    memberships: MembershipMatrix,
    distances: DistanceTable,
    affinity: AffinitySets,
    m: float,
    form: str = "renormalized",
) -> MembershipMatrix:
    """Zero the non-affinity grades and rescale the rest of each column.

    ``form="renormalized"`` divides the FCM grades by the surviving column
    mass. ``form="truncated"`` re-evaluates the FCM formula with the sum
    restricted to the surviving centers. The two agree to rounding.
    """
    mask = affinity.mask
    if form == "renormalized":
        return MembershipMatrix(_kernels.amfcm_scale(memberships.grades, mask))
    if form == "truncated":
        return MembershipMatrix(truncated_memberships(distances.dist, mask, m))
    raise ValueError(f"unknown form {form!r}")


def truncated_memberships(d: np.ndarray, mask: np.ndarray, m: float) -> np.ndarray:
    expo = 2.0 / (m - 1.0)
    c, n = d.shape
    out = np.zeros((c, n))
    for j in range(n):
        keep = np.flatnonzero(~mask[:, j])
        dk = d[keep, j]
        zero = np.flatnonzero(dk == 0.0)
        if zero.size:
            out[keep[zero[0]], j] = 1.0
            continue
        ratios = (dk[:, None] / dk[None, :]) ** expo
        out[keep, j] = 1.0 / ratios.sum(axis=1)
    return out


def alpha_factors(memberships: MembershipMatrix, affinity: AffinitySets) -> np.ndarray:
    """Per-sample amplification ``1 / (1 - sum of filtered grades)``; 1 where nothing is filtered."""
    removed = np.where(affinity.mask, memberships.grades, 0.0).sum(axis=0)
    if (removed >= 1.0).any():
        bad = np.flatnonzero(removed >= 1.0)
        raise FloatingPointError(f"filtered membership mass reached 1 for samples {bad.tolist()}")
    return 1.0 / (1.0 - removed)


def _scale_step(u, d, nearest, delta, m):
    mask = _kernels.lemma2_mask(d, nearest, delta)
    w = _kernels.amfcm_scale(u, mask)
    sizes = mask.sum(axis=0)
    return ScaleResult(w, int((sizes > 0).sum()), int(sizes.sum()), mask=mask)


def run_amfcm(data: Dataset, cfg: RunConfig, **kwargs) -> RunTrace:
    """Run the accelerated engine.

    Keyword arguments are forwarded to :func:`affcm.engine.run_engine`;
    ``delta_hook`` rewrites the measured displacements before filtering and
    exists for tests that need to force the filter on or off.
    """
    return run_engine(data, cfg, _scale_step, algorithm="amfcm", **kwargs)

