"""Timing comparison of the compiled and pure-Python eigensolver backends.

Usage:  python3 benchmarks/bench_eigen.py [sizes...]

The script times full symmetric eigensolves at each size with the active
backend, then re-runs itself in a subprocess with RANDBLOCK_FORCE_PY=1 to
time the fallback, and prints both with the speedup ratio.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np

DEFAULT_SIZES = (50, 100, 200, 402)


def time_backend(sizes):
    from randblock.eigen import backend_name, eigvalsh

    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        m = rng.standard_normal((n, n))
        m = m + m.T
        reps = max(1, 200 // n)
        eigvalsh(m)  # warm up
        t0 = time.perf_counter()
        for _ in range(reps):
            eigvalsh(m)
        rows.append((n, (time.perf_counter() - t0) / reps))
    return backend_name(), rows


def main():
    sizes = tuple(int(a) for a in sys.argv[1:]) or DEFAULT_SIZES
    if os.environ.get("BENCH_CHILD") == "1":
        name, rows = time_backend(sizes)
        print(json.dumps({"backend": name, "rows": rows}))
        return

    name, rows = time_backend(sizes)
    env = dict(os.environ, RANDBLOCK_FORCE_PY="1", BENCH_CHILD="1")
    out = subprocess.run([sys.executable, __file__, *map(str, sizes)],
                         env=env, capture_output=True, text=True, check=True)
    child = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'n':>6} {name:>12} {child['backend']:>12} {'speedup':>9}")
    for (n, t_active), (_, t_py) in zip(rows, child["rows"]):
        print(f"{n:>6} {t_active * 1e3:>10.2f}ms {t_py * 1e3:>10.2f}ms "
              f"{t_py / t_active:>8.1f}x")


if __name__ == "__main__":
    main()
