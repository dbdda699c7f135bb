"""Benchmark: compiled kernel core vs the pure-Python twin.

Runs each workload in a subprocess with RELUPROP_BACKEND forced, so both
backends are measured from a cold import in an otherwise identical
process. Usage:

    python benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

_WORKER = r"""
import json
import time

import numpy as np

import reluprop as rp
from reluprop import kernels


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


results = {"backend": kernels.BACKEND}

u = ((np.random.default_rng(0).integers(1, 2**53, size=10**7) * 2.0) + 1.0) * 2.0**-54
results["ndtri_1e7"] = timeit(lambda: kernels.ndtri_array(u))

grid = np.linspace(-4.0, 4.0, 60)
rhos = np.linspace(-0.95, 0.95, 21)


def bvn_grid():
    for rho in rhos:
        for x in grid:
            for y in grid:
                kernels.bvn_cdf(float(x), float(y), float(rho))


results["bvn_cdf_75600"] = timeit(bvn_grid)

model = rp.gen_model(2, 12, seed=42).to_model()
dist = rp.gen_dist(2, seed=7).to_dist()
cfg = rp.McConfig(n_samples=10**6, seed=1)
results["mc_run_1e6"] = timeit(lambda: rp.mc_output_moments(dist, model, cfg))

print(json.dumps(results))
"""


def run(backend):
    env = dict(os.environ, RELUPROP_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", _WORKER], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    rows = []
    for backend in ("compiled", "pure"):
        try:
            rows.append(run(backend))
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: unavailable ({exc.stderr.strip().splitlines()[-1]})")
    if not rows:
        return
    keys = [k for k in rows[0] if k != "backend"]
    header = f"{'workload':<16}" + "".join(f"{row['backend']:>12}" for row in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for key in keys:
        line = f"{key:<16}" + "".join(f"{row[key]:>11.3f}s" for row in rows)
        if len(rows) == 2:
            line += f"{rows[1][key] / rows[0][key]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
