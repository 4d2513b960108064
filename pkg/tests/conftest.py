import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from affcm import _kernels  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def random_instance(rng, c=None, p=None, n=None):
    """Gaussian blobs around random means; small enough for brute-force checks."""
    c = int(rng.integers(2, 7)) if c is None else c
    p = int(rng.integers(1, 5)) if p is None else p
    n = int(rng.integers(c, 51)) if n is None else n
    means = rng.uniform(0.0, 10.0, (c, p))
    lab = rng.integers(0, c, n)
    X = means[lab] + rng.normal(0.0, rng.uniform(0.3, 2.0), (n, p))
    return X, c


def random_suite(count=1000, seed=20240601, **kw):
    rng = np.random.default_rng(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


@pytest.fixture(params=["numpy", "numba"])
def kernels(request):
    return _kernels.NUMPY_KERNELS if request.param == "numpy" else _kernels.NUMBA_KERNELS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
