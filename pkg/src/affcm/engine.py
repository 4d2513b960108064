"""Alternating-optimization loop shared by the FCM, MSFCM and AMFCM engines.

One iteration, starting from centers V:

    d       <- distances(X, V)
    U       <- standard FCM memberships from d
    V_bar   <- weighted means under U            (the plain FCM update)
    W       <- scale(U, d, |V_bar - V|)          (identity for FCM)
    V_next  <- weighted means under W

and the loop stops once ``||V_next - V||_F < epsilon`` or ``max_iter`` updates
have been made. Plain FCM skips the scale step, so ``V_next = V_bar``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .core import (
    CentroidSet,
    ConfigurationError,
    Dataset,
    IterationRecord,
    RunConfig,
    RunTrace,
    initialize_centers,
    weighted_centers,
)

STAGE_B_RATE = 0.5


@dataclass
class ScaleResult:
    weights: np.ndarray
    filtered_samples: int
    filtered_center_pairs: int
    mask: Optional[np.ndarray] = None
    q: Optional[np.ndarray] = None


@dataclass
class IterationState:
    """Everything one iteration saw; handed to ``observer`` callbacks."""

    t: int
    centers: np.ndarray
    distances: np.ndarray
    nearest: np.ndarray
    memberships: np.ndarray
    tentative_centers: np.ndarray
    displacements: Optional[np.ndarray]
    scaled: np.ndarray
    new_centers: np.ndarray
    mask: Optional[np.ndarray] = None
    q: Optional[np.ndarray] = None


ScaleFn = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float], ScaleResult]


def run_engine(
    data: Dataset,
    cfg: RunConfig,
    scale: Optional[ScaleFn],
    *,
    algorithm: str,
    init_centers: Optional[np.ndarray] = None,
    observer: Optional[Callable[[IterationState], None]] = None,
    delta_hook: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    timing: bool = True,
) -> RunTrace:
    X = data.samples
    m = cfg.m
    if init_centers is None:
        V = initialize_centers(data, cfg).centers
    else:
        V = CentroidSet(init_centers).centers.copy()
        if V.shape != (cfg.n_clusters, data.p):
            raise ConfigurationError(
                f"initial centers have shape {V.shape}, expected {(cfg.n_clusters, data.p)}"
            )
    trace = RunTrace(algorithm=algorithm, config=cfg, initial_centers=V.copy(), n_samples=data.n)

    d, nearest = _kernels.distances(X, V)
    stage = "A"
    W = None
    for t in range(1, cfg.max_iter + 1):
        start = time.perf_counter_ns() if timing else 0
        U = _kernels.memberships(d, m)
        V_bar = weighted_centers(X, U, m)
        delta = None
        res = None
        if scale is None:
            W, V_next = U, V_bar
            n_filtered = n_pairs = 0
        else:
            delta = np.sqrt(((V_bar - V) ** 2).sum(axis=1))
            if delta_hook is not None:
                delta = np.asarray(delta_hook(delta), dtype=np.float64)
            res = scale(U, d, nearest, delta, m)
            W = res.weights
            V_next = weighted_centers(X, W, m)
            n_filtered, n_pairs = res.filtered_samples, res.filtered_center_pairs
        drift = float(np.sqrt(((V_next - V) ** 2).sum()))
        d_next, nearest_next = _kernels.distances(X, V_next)
        nanos = time.perf_counter_ns() - start if timing else 0

        j_fuzzy = float(((W**m) * d_next**2).sum())
        j_hard = float((d_next[nearest_next, np.arange(data.n)] ** 2).sum())
        if stage == "A" and n_filtered / data.n >= STAGE_B_RATE:
            stage = "B"
        trace.records.append(
            IterationRecord(t, j_fuzzy, j_hard, drift, int(n_filtered), int(n_pairs), int(nanos), stage)
        )
        if observer is not None:
            observer(
                IterationState(
                    t=t,
                    centers=V,
                    distances=d,
                    nearest=nearest,
                    memberships=U,
                    tentative_centers=V_bar,
                    displacements=delta,
                    scaled=W,
                    new_centers=V_next,
                    mask=None if res is None else res.mask,
                    q=None if res is None else res.q,
                )
            )
        V, d, nearest = V_next, d_next, nearest_next
        trace.iterations = t
        if drift < cfg.epsilon:
            trace.converged = True
            break

    trace.centers = V
    trace.memberships = W
    return trace
