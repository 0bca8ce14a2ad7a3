"""Time the numeric kernels with numba and with the pure-Python fallback.

Each mode runs in its own interpreter because the JIT switch is read at
import time.  Usage::

    python benchmarks/bench_kernels.py [--repeats 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys
import time


def _workloads():
    import numpy as np

    from netstab import kernels
    from netstab.fixtures import load_p11
    from netstab.oracle import monte_carlo_mdim

    rng = np.random.default_rng(0)
    m = rng.normal(size=(40, 40))
    sym = m + m.T

    dense = rng.random((300, 320)) < 0.02
    indptr = np.concatenate([[0], np.cumsum(dense.sum(axis=1))]).astype(np.int64)
    indices = np.nonzero(dense)[1].astype(np.int64)
    active = np.ones(300, dtype=np.bool_)

    k = 26
    adj = np.zeros(k, dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            if rng.random() < 0.2:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    allowed = np.int64((1 << k) - 1)
    p11 = load_p11()

    return {
        "jacobi_eigh 40x40": lambda: kernels.jacobi_eigh(sym.copy(), 1e-12, 100),
        "hopcroft_karp 300x320": lambda: kernels.hopcroft_karp(indptr, indices, 320, active),
        "independent_set 26 vertices": lambda: kernels.max_independent_bitmask(adj, allowed),
        "monte_carlo P11 x50": lambda: monte_carlo_mdim(p11, 50, 0),
    }


def worker(repeats: int) -> dict:
    from netstab._jit import USING_NUMBA

    out = {"numba": USING_NUMBA, "timings": {}}
    for name, fn in _workloads().items():
        fn()  # warm-up, includes compilation
        runs = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            runs.append(time.perf_counter() - t0)
        out["timings"][name] = statistics.median(runs)
    return out


def run_mode(disable: bool, repeats: int) -> dict:
    env = dict(os.environ, NETSTAB_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, __file__, "--worker", "--repeats", str(repeats)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--json", help="also write the raw timings here")
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.worker:
        print(json.dumps(worker(args.repeats)))
        return 0

    jit = run_mode(False, args.repeats)
    py = run_mode(True, args.repeats)
    if not jit["numba"]:
        print("warning: numba unavailable, both columns use the Python fallback", file=sys.stderr)
    print(f"{'kernel':<30}{'numba [ms]':>12}{'python [ms]':>14}{'speedup':>10}")
    for name, t_jit in jit["timings"].items():
        t_py = py["timings"][name]
        print(f"{name:<30}{t_jit * 1e3:>12.3f}{t_py * 1e3:>14.3f}{t_py / t_jit:>9.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba": jit, "python": py}, fh, indent=2, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
