"""Seeded Gaussian-mixture datasets, including the D1 / D2 presets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import NOISE_LABEL, ConfigurationError, Dataset
from .rng import SplitMix64


@dataclass
class Component:
    mean: list[float]
    variances: list[float]
    count: int

    def __post_init__(self):
        self.mean = [float(x) for x in self.mean]
        cov = np.asarray(self.variances, dtype=np.float64)
        if cov.ndim == 2:
            if cov.shape[0] != cov.shape[1] or np.count_nonzero(cov - np.diag(np.diag(cov))):
                raise ConfigurationError("only diagonal covariances are supported")
            cov = np.diag(cov)
        if cov.shape != (len(self.mean),):
            raise ConfigurationError("covariance dimension does not match the mean")
        if not np.all(np.isfinite(cov)) or (cov <= 0).any():
            raise ConfigurationError("variances must be positive")
        self.variances = cov.tolist()
        if int(self.count) != self.count or self.count < 0:
            raise ConfigurationError("component count must be a non-negative integer")
        self.count = int(self.count)

    @classmethod
    def from_dict(cls, d: dict) -> "Component":
        try:
            return cls(d["mean"], d["covariance"], d["count"])
        except KeyError as exc:
            raise ConfigurationError(f"component is missing {exc}") from None


D1_COMPONENTS = [
    Component([10.0, 10.0], [0.3, 0.3], 200),
    Component([13.0, 10.0], [0.8, 0.8], 200),
    Component([11.0, 4.0], [1.2, 1.2], 200),
]
D2_NOISE_COUNT = 60


def _draw(components, gen: SplitMix64):
    rows, labels = [], []
    for k, comp in enumerate(components):
        sd = [math.sqrt(v) for v in comp.variances]
        for _ in range(comp.count):
            rows.append([mu + s * gen.normal() for mu, s in zip(comp.mean, sd)])
            labels.append(k)
    return rows, labels


def generate_gaussian_mixture(components, seed: int) -> Dataset:
    """Sample every component in order, row by row, coordinate by coordinate.

    ``components`` holds :class:`Component` objects or dicts with ``mean``,
    ``covariance`` (variances or a diagonal matrix) and ``count``. Labels are
    the component indices.
    """
    comps = [c if isinstance(c, Component) else Component.from_dict(c) for c in components]
    if not comps:
        raise ConfigurationError("mixture needs at least one component")
    p = len(comps[0].mean)
    if any(len(c.mean) != p for c in comps):
        raise ConfigurationError("all components must share one dimension")
    rows, labels = _draw(comps, SplitMix64(seed))
    if not rows:
        raise ConfigurationError("mixture produced no samples")
    return Dataset(np.array(rows), np.array(labels, dtype=np.int64))


def load_mixture_spec(path) -> tuple[list[Component], int]:
    """Read ``{"seed": S, "components": [...]}`` from JSON."""
    with open(path) as fh:
        spec = json.load(fh)
    if not isinstance(spec, dict) or "components" not in spec:
        raise ConfigurationError("mixture spec must be an object with a 'components' list")
    return [Component.from_dict(c) for c in spec["components"]], int(spec.get("seed", 0))


def preset_d1(seed: int) -> Dataset:
    return generate_gaussian_mixture(D1_COMPONENTS, seed)


def preset_d2(seed: int) -> Dataset:
    """D1 followed by 60 uniform points in the box spanned by the three D1 means.

    The extra points carry label -1 and are drawn from the same stream right
    after the D1 rows, so the first 600 rows equal ``preset_d1(seed)``.
    """
    gen = SplitMix64(seed)
    rows, labels = _draw(D1_COMPONENTS, gen)
    means = np.array([c.mean for c in D1_COMPONENTS])
    lo, hi = means.min(axis=0), means.max(axis=0)
    for _ in range(D2_NOISE_COUNT):
        rows.append([a + (b - a) * gen.uniform() for a, b in zip(lo, hi)])
        labels.append(NOISE_LABEL)
    return Dataset(np.array(rows), np.array(labels, dtype=np.int64))


PRESETS = {"d1": preset_d1, "d2": preset_d2}
