"""Compare the numba kernels with their numpy fallbacks.

Kernel timings run in-process against both kernel tables. End-to-end engine
timings start a subprocess per backend so that ``AFFCM_DISABLE_NUMBA`` takes
effect at import time.

    python3 benchmarks/bench_kernels.py --n 20000 --c 8 --p 4
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from affcm import _kernels

ENGINE_SNIPPET = """
import json, sys, time
from affcm import BACKEND, ENGINES, RunConfig
from affcm.datagen import preset_d2
data = preset_d2(0)
out = {"backend": BACKEND}
for name, run in ENGINES.items():
    run(data, RunConfig(3, seed=0))  # warm-up / JIT
    t0 = time.perf_counter()
    for s in range(int(sys.argv[1])):
        run(data, RunConfig(3, seed=s))
    out[name] = (time.perf_counter() - t0) / int(sys.argv[1])
print(json.dumps(out))
"""


def kernel_inputs(n, c, p, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p)) * 3
    V = X[rng.choice(n, c, replace=False)]
    d, near = _kernels.distances_numpy(X, V)
    u = _kernels.memberships_numpy(d, 2.0)
    delta = rng.uniform(0, 0.05, c)
    mask = _kernels.lemma2_mask_numpy(d, near, delta)
    q = _kernels.lemma1_mask_numpy(d, near, delta)
    return {
        "distances": (X, V),
        "memberships": (d, 2.0),
        "lemma1_mask": (d, near, delta),
        "lemma2_mask": (d, near, delta),
        "msfcm_scale": (u, d, q, near, 2.0),
        "amfcm_scale": (u, mask),
    }


def time_kernels(args):
    inputs = kernel_inputs(args.n, args.c, args.p, args.seed)
    rows = []
    for name, call_args in inputs.items():
        row = {"kernel": name}
        for label, table in (("numpy", _kernels.NUMPY_KERNELS), ("numba", _kernels.NUMBA_KERNELS)):
            fn = table[name]
            fn(*call_args)  # compile
            row[label] = min(timeit.repeat(lambda: fn(*call_args), number=args.number, repeat=args.repeat)) / args.number
        row["speedup"] = row["numpy"] / row["numba"]
        rows.append(row)
    return rows


def time_engines(runs):
    res = {}
    for backend, flag in (("numpy", "1"), ("numba", "0")):
        env = dict(os.environ, AFFCM_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", ENGINE_SNIPPET, str(runs)], env=env,
                             capture_output=True, text=True, check=True)
        res[backend] = json.loads(out.stdout)
    return res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--c", type=int, default=8)
    ap.add_argument("--p", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--number", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--engine-runs", type=int, default=5, help="runs per engine on the D2 preset (0 skips)")
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)

    rows = time_kernels(args)
    print(f"kernels, n={args.n} c={args.c} p={args.p} (seconds per call)")
    print(f"{'kernel':<14}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for r in rows:
        print(f"{r['kernel']:<14}{r['numpy']:>12.2e}{r['numba']:>12.2e}{r['speedup']:>9.1f}x")
    result = {"kernels": rows}
    if args.engine_runs > 0:
        eng = time_engines(args.engine_runs)
        result["engines"] = eng
        print("\nengines on D2, c=3 (seconds per run)")
        for name in ("fcm", "msfcm", "amfcm"):
            a, b = eng["numpy"][name], eng["numba"][name]
            print(f"{name:<14}{a:>12.2e}{b:>12.2e}{a / b:>9.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
