#!/usr/bin/env python3
"""Time the hot kernels on the compiled (numba) and pure-python paths.

The path is fixed at import time by BARRIER1D_DISABLE_NUMBA, so each side
runs in its own subprocess and this driver just compares the medians.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
from barrier1d import _kernels
from barrier1d.oracle import solve_exact
from barrier1d.potential import Potential, Segment, Constant, Linear
from barrier1d.riccati import integrate_complex
from barrier1d.spectra import WellSystem, bound_levels_shooting

_kernels.warm_up()   # JIT cost paid here, not inside the timings

rng = np.random.default_rng(0)
pots = []
for _ in range(40):
    segs = tuple(Segment(float(rng.uniform(0.3, 1.2)),
                         Constant(float(rng.uniform(-0.5, 1.4))))
                 for _ in range(6))
    pots.append(Potential(segs))
ramp = Potential((Segment(2.0, Linear(0.1, 0.6)),))
ws = WellSystem(((4.0, 3.0), (3.0, 2.5), (5.0, 2.0)), (1.2, 1.5), outer="finite")

def timeit(fn, n):
    t0 = time.perf_counter()
    for _ in range(n):
        fn()
    return (time.perf_counter() - t0) / n

res = {
    "transfer_product  (40 pots x 64 energies)": timeit(
        lambda: [solve_exact(p, float(e)).D
                 for p in pots[:8] for e in np.linspace(0.3, 2.0, 64)], 3),
    "riccati_complex   (ramp, rtol 1e-10)": timeit(
        lambda: integrate_complex(ramp, 0.9), 40),
    "riccati_complex   (40 random slabs)": timeit(
        lambda: [integrate_complex(p, 0.8) for p in pots], 2),
    "shooting levels   (3-well system)": timeit(
        lambda: bound_levels_shooting(ws, 600), 2),
}
print(json.dumps({"numba": _kernels.NUMBA_ENABLED, "timings": res}))
"""


def run_side(disable: bool, repeat: int):
    env = dict(os.environ)
    env["BARRIER1D_DISABLE_NUMBA"] = "1" if disable else "0"
    rows = []
    for _ in range(repeat):
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                             capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))
    keys = rows[0]["timings"].keys()
    return {k: statistics.median(r["timings"][k] for r in rows) for k in keys}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit = run_side(False, args.repeat)
    pure = run_side(True, args.repeat)
    width = max(len(k) for k in jit)
    print(f"{'kernel workload':<{width}}   numba [ms]   numpy [ms]   speedup")
    for k in jit:
        print(f"{k:<{width}}   {jit[k] * 1e3:10.3f}   {pure[k] * 1e3:10.3f}   "
              f"{pure[k] / jit[k]:6.1f}x")


if __name__ == "__main__":
    main()
