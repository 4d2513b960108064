"""Domain types, the distance kernel entry point and center initialization."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from . import _kernels
from .rng import SplitMix64

logger = logging.getLogger(__name__)

InitMethod = Literal["distinct-sample-draw", "random-membership"]
Algorithm = Literal["fcm", "msfcm", "amfcm"]

INIT_METHODS = ("distinct-sample-draw", "random-membership")
ALGORITHMS = ("fcm", "msfcm", "amfcm")
NOISE_LABEL = -1
EMPTY_CLUSTER_EPS = 1e-300


class ConfigurationError(ValueError):
    """Invalid input data, shapes or run parameters."""


def _finite_matrix(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ConfigurationError(f"{name} must be a 2-d array, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ConfigurationError(f"{name} contains NaN or Inf")
    return arr


@dataclass
class Dataset:
    """Sample matrix (n, p) with optional integer labels.

    Label ``-1`` marks noise / unlabeled rows; those rows are ignored by the
    external scores.
    """

    samples: np.ndarray
    labels: Optional[np.ndarray] = None
    ids: Optional[list] = None

    def __post_init__(self):
        self.samples = _finite_matrix(self.samples, "samples")
        n, p = self.samples.shape
        if n < 1 or p < 1:
            raise ConfigurationError("dataset needs at least one sample and one feature")
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (n,):
                raise ConfigurationError(f"labels must have length {n}")
            if not np.issubdtype(labels.dtype, np.integer):
                if not np.all(np.equal(np.mod(labels, 1), 0)):
                    raise ConfigurationError("labels must be integers")
            labels = labels.astype(np.int64)
            if (labels < NOISE_LABEL).any():
                raise ConfigurationError("labels must be >= 0 (or -1 for noise)")
            self.labels = labels
        if self.ids is not None and len(self.ids) != n:
            raise ConfigurationError(f"ids must have length {n}")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def p(self) -> int:
        return self.samples.shape[1]


@dataclass
class CentroidSet:
    centers: np.ndarray
    displacements: Optional[np.ndarray] = None

    def __post_init__(self):
        self.centers = _finite_matrix(self.centers, "centers")
        c = self.centers.shape[0]
        if c < 2:
            raise ConfigurationError("need at least two centers")
        if self.displacements is None:
            self.displacements = np.zeros(c)
        else:
            disp = np.asarray(self.displacements, dtype=np.float64)
            if disp.shape != (c,) or not np.isfinite(disp).all() or (disp < 0).any():
                raise ConfigurationError("displacements must be c finite non-negative values")
            self.displacements = disp

    @property
    def c(self) -> int:
        return self.centers.shape[0]


@dataclass
class MembershipMatrix:
    grades: np.ndarray
    tol: float = 1e-12

    def __post_init__(self):
        g = _finite_matrix(self.grades, "grades")
        if (g < 0.0).any() or (g > 1.0).any():
            raise ConfigurationError("membership grades must lie in [0, 1]")
        err = np.abs(g.sum(axis=0) - 1.0).max(initial=0.0)
        if err > self.tol:
            raise ConfigurationError(f"membership columns must sum to 1 (max error {err:.3g})")
        self.grades = g


@dataclass
class DistanceTable:
    dist: np.ndarray
    nearest: np.ndarray
    sorted_per_column: Optional[np.ndarray] = None

    def sorted(self) -> np.ndarray:
        """Per-column center order by ascending distance; ties keep index order."""
        if self.sorted_per_column is None:
            self.sorted_per_column = np.argsort(self.dist, axis=0, kind="stable")
        return self.sorted_per_column

    def ordered(self, k: int) -> np.ndarray:
        """The k-th smallest distance of every sample (1-based, D_j^(k))."""
        order = self.sorted()
        return self.dist[order[k - 1], np.arange(self.dist.shape[1])]


@dataclass
class AffinitySets:
    """Non-affinity centers per sample, stored as a (c, n) boolean mask."""

    mask: np.ndarray
    nearest: np.ndarray

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        self.nearest = np.asarray(self.nearest, dtype=np.int64)
        if self.mask[self.nearest, np.arange(self.mask.shape[1])].any():
            raise ConfigurationError("a nearest center cannot be a non-affinity center")

    @classmethod
    def from_sets(cls, sets, nearest, c: int) -> "AffinitySets":
        mask = np.zeros((c, len(sets)), dtype=bool)
        for j, s in enumerate(sets):
            mask[list(s), j] = True
        return cls(mask, np.asarray(nearest))

    @property
    def sizes(self) -> np.ndarray:
        return self.mask.sum(axis=0)

    def sets(self) -> list[np.ndarray]:
        return [np.flatnonzero(col) for col in self.mask.T]


@dataclass(frozen=True)
class RunConfig:
    n_clusters: int
    m: float = 2.0
    epsilon: float = 1e-6
    max_iter: int = 1000
    seed: int = 0
    init: str = "distinct-sample-draw"
    algorithm: str = "amfcm"

    def __post_init__(self):
        if self.n_clusters < 2:
            raise ConfigurationError("n_clusters must be >= 2")
        if not self.m > 1.0:
            raise ConfigurationError("fuzzifier m must be > 1")
        if not self.epsilon > 0.0:
            raise ConfigurationError("epsilon must be > 0")
        if self.max_iter < 1:
            raise ConfigurationError("max_iter must be >= 1")
        if self.init not in INIT_METHODS:
            raise ConfigurationError(f"unknown init method {self.init!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}")


@dataclass
class IterationRecord:
    t: int
    fuzzy_objective: float
    hard_objective: float
    drift: float
    filtered_samples: int
    filtered_center_pairs: int
    nanos: int
    stage: str = "A"


@dataclass
class RunTrace:
    algorithm: str
    config: RunConfig
    records: list[IterationRecord] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    centers: Optional[np.ndarray] = None
    memberships: Optional[np.ndarray] = None
    initial_centers: Optional[np.ndarray] = None
    n_samples: int = 0
    metrics: Optional[dict] = None

    @property
    def filter_rate(self) -> list[tuple[int, float]]:
        n = max(self.n_samples, 1)
        return [(r.t, r.filtered_samples / n) for r in self.records]

    @property
    def stage_counts(self) -> tuple[int, int]:
        b = sum(r.stage == "B" for r in self.records)
        return len(self.records) - b, b

    @property
    def wall_time(self) -> float:
        return sum(r.nanos for r in self.records) * 1e-9


def compute_distances(data: Dataset, centers: CentroidSet) -> DistanceTable:
    if data.p != centers.centers.shape[1]:
        raise ConfigurationError(
            f"dimension mismatch: samples have p={data.p}, centers p={centers.centers.shape[1]}"
        )
    d, nearest = _kernels.distances(data.samples, centers.centers)
    return DistanceTable(d, np.asarray(nearest, dtype=np.int64))


def weighted_centers(X: np.ndarray, weights: np.ndarray, m: float) -> np.ndarray:
    """Membership-weighted means ``sum_j w_ij^m x_j / sum_j w_ij^m``.

    A center whose total weight falls below 1e-300 is re-seeded at the sample
    farthest from its nearest surviving center.
    """
    wm = weights**m
    denom = wm.sum(axis=1)
    V = np.empty((weights.shape[0], X.shape[1]))
    alive = denom >= EMPTY_CLUSTER_EPS
    V[alive] = (wm[alive] @ X) / denom[alive, None]
    for i in np.flatnonzero(~alive):
        if alive.any():
            d, _ = _kernels.distances_numpy(X, V[alive])
            far = int(np.argmax(d.min(axis=0)))
        else:
            far = 0
        logger.warning("center %d lost all membership mass; re-seeding at sample %d", i, far)
        V[i] = X[far]
        alive[i] = True
    return V


def initialize_centers(data: Dataset, cfg: RunConfig) -> CentroidSet:
    c = cfg.n_clusters
    gen = SplitMix64(cfg.seed)
    if cfg.init == "distinct-sample-draw":
        if c > data.n:
            raise ConfigurationError(f"cannot draw {c} distinct samples from n={data.n}")
        idx = gen.sample_without_replacement(data.n, c)
        return CentroidSet(data.samples[idx].copy())
    u0 = random_membership(c, data.n, gen)
    return CentroidSet(weighted_centers(data.samples, u0, cfg.m))


def random_membership(c: int, n: int, gen: SplitMix64) -> np.ndarray:
    """Column-stochastic (c, n) matrix from uniform draws, filled column by column."""
    u = np.array([[gen.uniform() for _ in range(c)] for _ in range(n)]).T
    # (0, 1] keeps every column sum strictly positive
    u = 1.0 - u
    return u / u.sum(axis=0)
