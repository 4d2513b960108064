import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import centers_loop, dist_loop
from affcm import (
    AffinitySets,
    CentroidSet,
    ConfigurationError,
    Dataset,
    MembershipMatrix,
    RunConfig,
    compute_distances,
    initialize_centers,
)
from affcm.core import random_membership
from affcm.rng import SplitMix64


def test_distance_identity_case():
    t = compute_distances(Dataset([[0.0]]), CentroidSet([[0.0], [3.0]]))
    np.testing.assert_array_equal(t.dist, [[0.0], [3.0]])
    assert t.nearest.tolist() == [0]


def test_distance_345():
    t = compute_distances(Dataset([[3.0, 4.0]]), CentroidSet([[0.0, 0.0], [9.0, 9.0]]))
    assert t.dist[0, 0] == 5.0


def test_distances_match_scalar_loop():
    rng = np.random.default_rng(1)
    X, V = rng.normal(size=(5, 2)), rng.normal(size=(3, 2))
    t = compute_distances(Dataset(X), CentroidSet(V))
    np.testing.assert_allclose(t.dist, dist_loop(X, V), rtol=0, atol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        compute_distances(Dataset(np.zeros((3, 2))), CentroidSet(np.zeros((2, 3))))


def test_sample_on_center_has_zero_distance():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(6, 3))
    V = np.vstack([rng.normal(size=(1, 3)), X[4:5]])
    t = compute_distances(Dataset(X), CentroidSet(V))
    assert t.dist[1, 4] == 0.0


def test_nearest_tie_breaks_to_smallest_index():
    t = compute_distances(Dataset([[0.0, 0.0]]), CentroidSet([[2.0, 0.0], [-2.0, 0.0], [0.0, 2.0]]))
    assert t.nearest.tolist() == [0]
    t = compute_distances(Dataset([[0.0, 0.0]]), CentroidSet([[5.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]))
    assert t.nearest.tolist() == [1]


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_types_reject_non_finite(bad):
    with pytest.raises(ConfigurationError):
        Dataset([[0.0, bad]])
    with pytest.raises(ConfigurationError):
        CentroidSet([[0.0, 0.0], [bad, 1.0]])
    with pytest.raises(ConfigurationError):
        MembershipMatrix([[bad], [0.5]])


def test_type_invariants():
    with pytest.raises(ConfigurationError):
        CentroidSet([[0.0, 1.0]])
    with pytest.raises(ConfigurationError):
        CentroidSet([[0.0], [1.0]], displacements=[-1.0, 0.0])
    with pytest.raises(ConfigurationError):
        MembershipMatrix([[0.6], [0.6]])
    with pytest.raises(ConfigurationError):
        Dataset([[1.0], [2.0]], labels=[0, -2])
    with pytest.raises(ConfigurationError):
        AffinitySets(np.array([[True], [False]]), np.array([0]))
    MembershipMatrix([[0.6], [0.6]], tol=0.5)


def test_distance_table_sorted_columns():
    rng = np.random.default_rng(4)
    t = compute_distances(Dataset(rng.normal(size=(7, 2))), CentroidSet(rng.normal(size=(4, 2))))
    order = t.sorted()
    for j in range(7):
        assert sorted(order[:, j]) == [0, 1, 2, 3]
        assert np.all(np.diff(t.dist[order[:, j], j]) >= 0)
    np.testing.assert_array_equal(t.ordered(1), t.dist.min(axis=0))
    np.testing.assert_array_equal(t.ordered(4), t.dist.max(axis=0))


def test_affinity_sets_round_trip():
    a = AffinitySets.from_sets([[1, 2], [], [0]], [0, 1, 2], 3)
    assert [s.tolist() for s in a.sets()] == [[1, 2], [], [0]]
    assert a.sizes.tolist() == [2, 0, 1]


def test_run_config_validation():
    for kw in ({"m": 1.0}, {"epsilon": 0.0}, {"max_iter": 0}, {"init": "kmeans++"}, {"algorithm": "x"}):
        with pytest.raises(ConfigurationError):
            RunConfig(3, **kw)
    with pytest.raises(ConfigurationError):
        RunConfig(1)


def test_distinct_draw_exhausts_small_dataset():
    X = np.array([[0.0], [1.0], [2.0]])
    V = initialize_centers(Dataset(X), RunConfig(3, seed=8)).centers
    assert sorted(V[:, 0].tolist()) == [0.0, 1.0, 2.0]


def test_distinct_draw_too_many_clusters():
    with pytest.raises(ConfigurationError):
        initialize_centers(Dataset(np.zeros((2, 1))), RunConfig(3))


@pytest.mark.parametrize("init", ["distinct-sample-draw", "random-membership"])
def test_initialization_is_deterministic(init):
    X = np.random.default_rng(0).normal(size=(30, 2))
    a = initialize_centers(Dataset(X), RunConfig(4, seed=42, init=init)).centers
    b = initialize_centers(Dataset(X), RunConfig(4, seed=42, init=init)).centers
    assert a.tobytes() == b.tobytes()


def test_random_membership_centers_match_hand_evaluation():
    X = np.array([[0.0, 1.0], [2.0, 0.0], [4.0, 4.0], [1.0, 3.0]])
    V = initialize_centers(Dataset(X), RunConfig(2, seed=17, init="random-membership")).centers
    u0 = random_membership(2, 4, SplitMix64(17))
    np.testing.assert_allclose(u0.sum(axis=0), 1.0, atol=1e-15)
    np.testing.assert_allclose(V, centers_loop(X, u0, 2.0), rtol=0, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 3)), elements=st.floats(-50, 50)),
    arrays(np.float64, st.tuples(st.integers(2, 5), st.just(3)), elements=st.floats(-50, 50)),
)
def test_nearest_is_argmin(X, V):
    V = V[:, : X.shape[1]]
    t = compute_distances(Dataset(X), CentroidSet(V))
    cols = np.arange(X.shape[0])
    np.testing.assert_array_equal(t.dist[t.nearest, cols], t.dist.min(axis=0))
    assert (t.dist >= 0).all()
