import numpy as np
import pytest

from affcm import ConfigurationError, Dataset, RunConfig, run_amfcm
from affcm.io import dumps, read_csv, trace_from_dict, trace_to_dict, write_csv


def test_csv_round_trip(tmp_path):
    d = Dataset(np.array([[0.1, 2.0], [1e-17, -3.5]]), np.array([1, -1]))
    path = tmp_path / "d.csv"
    write_csv(d, path)
    assert path.read_text().splitlines()[0] == "x0,x1,label"
    back = read_csv(path)
    np.testing.assert_array_equal(back.samples, d.samples)
    np.testing.assert_array_equal(back.labels, d.labels)


def test_header_modes(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("1,2\n3,4\n")
    assert read_csv(path).n == 2
    assert read_csv(path, "no").n == 2
    assert read_csv(path, "yes").n == 1
    path.write_text("a,b\n1,2\n")
    d = read_csv(path)
    assert d.n == 1 and d.labels is None
    with pytest.raises(ConfigurationError):
        read_csv(path, "no")
    with pytest.raises(ConfigurationError):
        read_csv(path, "maybe")


@pytest.mark.parametrize(
    "text",
    ["x,y\n1,abc\n", "x,y\n1,2\n3\n", "", "x,label\n1,0.5\n", "x,y\n1,nan\n"],
)
def test_bad_files(tmp_path, text):
    path = tmp_path / "d.csv"
    path.write_text(text)
    with pytest.raises(ConfigurationError):
        read_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        read_csv(tmp_path / "nope.csv")


def test_trace_round_trip():
    X = np.random.default_rng(0).normal(size=(30, 2)) * 3
    tr = run_amfcm(Dataset(X), RunConfig(3, seed=2))
    tr.metrics = {"pc": 0.5, "dbi": None}
    d = trace_to_dict(tr, with_memberships=True)
    back = trace_from_dict(d)
    assert trace_to_dict(back, with_memberships=True) == d
    assert back.config == tr.config
    assert back.records == tr.records
    np.testing.assert_array_equal(back.centers, tr.centers)
    np.testing.assert_array_equal(back.memberships, tr.memberships)
    assert d["perIteration"][0].keys() >= {"t", "jFuzzy", "jHard", "drift", "filteredSamples", "filteredCenterPairs", "nanos"}


def test_dumps_floats_round_trip():
    import json

    vals = [0.1, 1 / 3, 1e-300, 2.0**60 + 1.0]
    assert json.loads(dumps(vals)) == vals
    assert json.loads(dumps([np.inf, np.float64(2.5)])) == [None, 2.5]
