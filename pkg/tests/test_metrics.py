import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import ari_pairs, dbi_loop, dist_loop, fstar_direct, memberships_loop, nmi_direct, pc_loop, xb_loop
from affcm import metrics
from affcm.core import Dataset
from affcm.metrics import (
    DegenerateIndexError,
    HardPartition,
    ari,
    contingency,
    dbi,
    external_scores,
    f_star,
    fuzzy_objective,
    hard_objective,
    hard_partition,
    nmi,
    pc,
    xb,
)


def test_fuzzy_objective_small_cases():
    assert fuzzy_objective([[1.0, 2.0]], [[1.0], [0.0]], [[1.0, 2.0], [5.0, 5.0]], 2.0) == 0.0
    assert fuzzy_objective([[2.0, 0.0]], [[1.0], [0.0]], [[0.0, 0.0], [9.0, 9.0]], 2.0) == 4.0


def test_objectives_match_loop_and_one_hot():
    rng = np.random.default_rng(0)
    X, V = rng.normal(size=(25, 3)), rng.normal(size=(4, 3))
    d = dist_loop(X, V)
    u = memberships_loop(d, 2.5)
    ref = sum(u[i, j] ** 2.5 * d[i, j] ** 2 for i in range(4) for j in range(25))
    assert fuzzy_objective(X, u, V, 2.5) == pytest.approx(ref, rel=1e-12)
    part = hard_partition(X, V)
    onehot = np.eye(4)[:, part.assign]
    assert hard_objective(X, part, V) == pytest.approx(fuzzy_objective(X, onehot, V, 2.0), rel=1e-14)


def test_pc_examples():
    assert pc(np.eye(3)[:, [0, 1, 2, 1]]) == 1.0
    assert pc(np.full((4, 7), 0.25)) == pytest.approx(0.25)
    assert pc([[0.8], [0.2]]) == pytest.approx(0.68)


def test_dbi_examples():
    V = np.array([[0.0, 0.0], [2.0, 0.0]])
    assert dbi(V, HardPartition([0, 1], 2), V) == 0.0
    X = np.array([[0.0, 1.0], [0.0, -1.0], [4.0, 1.0], [4.0, -1.0]])
    # scatter 1 each, squared gap 16
    assert dbi(X, HardPartition([0, 0, 1, 1], 2), [[0.0, 0.0], [4.0, 0.0]]) == pytest.approx(0.125)
    with pytest.raises(DegenerateIndexError):
        dbi(X, HardPartition([0, 0, 1, 1], 2), [[1.0, 1.0], [1.0, 1.0]])


def test_dbi_empty_cluster_still_rival(caplog):
    X = np.array([[0.0], [1.0]])
    V = np.array([[0.5], [10.0]])
    with caplog.at_level("WARNING"):
        val = dbi(X, HardPartition([0, 0], 2), V)
    assert val == pytest.approx((0.25 / 9.5 ** 2 + 0.25 / 9.5 ** 2) / 2)
    assert "empty" in caplog.text


def test_xb_examples():
    V = np.array([[0.0], [3.0]])
    assert xb(V, np.eye(2), V, 2.0) == 0.0
    X = np.array([[0.0], [1.0], [3.0]])
    u = np.array([[1.0, 0.8, 0.0], [0.0, 0.2, 1.0]])
    assert xb(X, u, V, 2.0) == pytest.approx(0.8 / 27.0, abs=1e-15)
    with pytest.raises(DegenerateIndexError):
        xb(X, u, [[1.0], [1.0]], 2.0)


def test_internal_indices_match_loops():
    rng = np.random.default_rng(3)
    for _ in range(40):
        c, n, p = int(rng.integers(2, 5)), int(rng.integers(5, 30)), int(rng.integers(1, 4))
        X, V = rng.normal(size=(n, p)), rng.normal(size=(c, p))
        m = float(rng.uniform(1.5, 3.0))
        u = memberships_loop(dist_loop(X, V), m)
        part = hard_partition(X, V)
        assert abs(pc(u) - pc_loop(u)) < 1e-10
        assert abs(dbi(X, part, V) - dbi_loop(X, part.assign, V)) < 1e-10
        assert abs(xb(X, u, V, m) - xb_loop(X, u, V, m)) < 1e-10


def test_identity_and_one_cluster():
    lab = np.array([0, 0, 1, 1, 2, 2])
    for relabel in (lab, (lab + 1) % 3):
        s = external_scores(relabel, lab)
        assert s == pytest.approx({"fStar": 1.0, "ari": 1.0, "nmi": 1.0})
    assert ari(contingency([0, 0, 1, 1], [0, 0, 0, 0])) == 0.0


def test_six_sample_table_against_pair_oracle():
    lab = [0, 0, 0, 1, 1, 1]
    asg = [0, 0, 1, 0, 1, 1]
    t = contingency(lab, asg)
    np.testing.assert_array_equal(t, [[2, 1], [1, 2]])
    assert abs(ari(t) - ari_pairs(lab, asg)) < 1e-12
    assert abs(nmi(t) - nmi_direct(lab, asg)) < 1e-12
    assert abs(f_star(t) - fstar_direct(lab, asg)) < 1e-12
    assert f_star(t) == pytest.approx(2 / 3)


def test_noise_rows_ignored():
    s = external_scores([0, 0, 1, 1, 0], [0, 0, 1, 1, -1])
    assert s["ari"] == 1.0 and s["nmi"] == 1.0


def test_nmi_normalizations():
    t = contingency([0, 0, 1, 1, 2, 2], [0, 0, 1, 1, 1, 1])
    vals = {a: nmi(t, a) for a in ("arithmetic", "geometric", "max", "min")}
    assert vals["max"] <= vals["geometric"] <= vals["min"]
    assert vals["min"] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        nmi(t, "harmonic")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=2, max_size=30), st.randoms())
def test_invariance_and_bounds(pairs, rnd):
    lab = np.array([a for a, _ in pairs])
    asg = np.array([b for _, b in pairs])
    base = external_scores(asg, lab)
    order = list(range(len(pairs)))
    rnd.shuffle(order)
    perm = {k: v for k, v in zip(range(4), rnd.sample(range(4), 4))}
    moved = external_scores(np.array([perm[b] for b in asg[order]]), lab[order])
    for k in base:
        assert moved[k] == pytest.approx(base[k], abs=1e-12)
    assert base["ari"] <= 1.0 + 1e-12
    assert -1e-12 <= base["nmi"] <= 1.0 + 1e-12


def test_pc_bounds():
    rng = np.random.default_rng(1)
    for _ in range(50):
        c = int(rng.integers(2, 6))
        u = rng.dirichlet(np.ones(c), size=20).T
        assert 1.0 / c - 1e-12 <= pc(u) <= 1.0


def test_evaluate_keys_and_degenerate():
    X = np.array([[0.0], [1.0], [5.0], [6.0]])
    data = Dataset(X, np.array([0, 0, 1, 1]))
    V = np.array([[0.5], [5.5]])
    u = memberships_loop(dist_loop(X, V), 2.0)
    out = metrics.evaluate(data, V, u, 2.0)
    assert set(out) == {"pc", "dbi", "xb", "jFuzzy", "jHard", "fStar", "ari", "nmi"}
    assert out["ari"] == 1.0
    out = metrics.evaluate(Dataset(X), [[1.0], [1.0]], np.full((2, 4), 0.5), 2.0)
    assert out["dbi"] is None and out["xb"] is None and "ari" not in out
