"""Time the compiled and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--nodes 20000] [--degree 6] [--repeat 7]

Also times one full ``sample`` call per backend, since the kernel is only
part of the work per parameter value.
"""

import argparse
import os
import statistics
import subprocess
import sys
import timeit

import numpy as np

from kslope.kernels import BACKENDS


def kernel_inputs(nodes, degree, seed=0):
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=(degree + 1, degree + 1)) + 1j * rng.normal(size=(degree + 1, degree + 1))
    logw = rng.normal(size=degree + 1)
    r = np.exp(rng.uniform(np.log(1e-4), 0.0, size=nodes))
    z = r * np.exp(2j * np.pi * rng.uniform(size=nodes))
    return coeffs, logw, z


def time_kernels(nodes, degree, repeat):
    args = kernel_inputs(nodes, degree)
    ref = None
    rows = []
    for name, fn in sorted(BACKENDS.items()):
        lse, grad = fn(*args, want_grad=True)
        if ref is None:
            ref = (lse, grad)
        err = max(np.max(np.abs(lse - ref[0])), np.max(np.abs(grad - ref[1])) / max(1.0, np.max(np.abs(ref[1]))))
        times = timeit.repeat(lambda: fn(*args, want_grad=True), number=1, repeat=repeat)
        rows.append((name, statistics.median(times), err))
    return rows


SAMPLE_SNIPPET = """
import time
from kslope import kernels
from kslope.predictor import DegenerationConfig
from kslope.quadrature import sample
cfg = DegenerationConfig(2, [[1], [0, 1, 1], [0, 0, 1]], [2, -1, -1])
sample(cfg, [0.1])
t0 = time.perf_counter()
sample(cfg, [0.1, 0.01, 0.001])
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def time_sample():
    rows = []
    for pure in ("0", "1"):
        env = dict(os.environ, KSLOPE_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", SAMPLE_SNIPPET], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        rows.append((backend, float(seconds)))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=20000)
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args(argv)

    if "cython" not in BACKENDS:
        print("compiled extension not built; only the numpy backend is available")
    print(f"weighted_log_norm, {args.nodes} nodes, degree {args.degree}, median of {args.repeat}")
    rows = time_kernels(args.nodes, args.degree, args.repeat)
    base = dict((n, t) for n, t, _ in rows).get("python")
    for name, t, err in rows:
        print(f"  {name:8s} {1e3 * t:9.2f} ms  speedup {base / t:5.2f}x  max deviation {err:.1e}")
    print("sample() on a non-radial config at t = 0.1, 0.01, 0.001")
    for backend, seconds in time_sample():
        print(f"  {backend:8s} {seconds:9.3f} s")


if __name__ == "__main__":
    main()
