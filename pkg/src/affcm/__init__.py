"""Fuzzy c-means with triangle-inequality affinity filtering."""

from ._kernels import BACKEND
from .amfcm import alpha_factors, amfcm_scale, lemma2_filter, run_amfcm
from .core import (
    AffinitySets,
    CentroidSet,
    ConfigurationError,
    Dataset,
    DistanceTable,
    IterationRecord,
    MembershipMatrix,
    RunConfig,
    RunTrace,
    compute_distances,
    initialize_centers,
)
from .fcm import run_fcm, update_centers, update_memberships
from .msfcm import lemma1_filter, msfcm_scale, run_msfcm

ENGINES = {"fcm": run_fcm, "msfcm": run_msfcm, "amfcm": run_amfcm}


def run(data, cfg, **kwargs):
    """Dispatch on ``cfg.algorithm``."""
    return ENGINES[cfg.algorithm](data, cfg, **kwargs)


__version__ = "0.1.0"
