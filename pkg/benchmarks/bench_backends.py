"""Time the numba and numpy kernel backends on the same workloads.

Run with ``python3 benchmarks/bench_backends.py``. Each workload is run
once untimed (so JIT compilation is excluded) and then timed as the best of
``--repeat`` runs.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from idpsim.interferometer import SOURCE, calibrated_config, ideal_config, prepare
from idpsim.kernels import load_backend


def _align_inputs(cfg, n):
    return np.array([prepare(SOURCE, cfg.prepared_for(a)).as_array() for a in np.linspace(0, 45, n)])


def workloads(n_align: int, n_grid: int):
    ideal, cal = ideal_config(), calibrated_config()
    E_ideal, E_cal = _align_inputs(ideal, n_align), _align_inputs(cal, n_align)
    thetas = np.arange(100_000) * 180.0 / 100_000
    t = np.radians(22.5)
    p, m = np.array([np.cos(t), np.sin(t)]), np.array([np.cos(t), -np.sin(t)])
    u, w = np.array([np.sin(t), np.cos(t)]), np.array([np.sin(t), -np.cos(t)])
    c = np.sin(2 * t) ** 2
    weights = np.linspace(0, 1, n_grid)
    return {
        f"align {n_align} angles (ideal)": lambda b: b.align_batch(E_ideal, *ideal.kernel_args()),
        f"align {n_align} angles (calibrated)": lambda b: b.align_batch(E_cal, *cal.kernel_args()),
        "projective grid 1e5": lambda b: b.von_neumann_errors(thetas, p, m, 0.5, 0.5),
        f"zero-error grid {n_grid}^2": lambda b: b.idp_grid_min(weights, u, w, c, c, 0.5, 0.5, 1e-10),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--align", type=int, default=1024, help="angles per alignment batch")
    ap.add_argument("--grid", type=int, default=2000, help="zero-error grid points per axis")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = {name: load_backend(name) for name in ("numpy", "numba")}
    print(f"{'workload':<34}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for label, fn in workloads(args.align, args.grid).items():
        t = {}
        for name, b in backends.items():
            fn(b)
            t[name] = best_of(lambda: fn(b), args.repeat)
        print(f"{label:<34}{t['numpy']:>10.3f}{t['numba']:>10.3f}{t['numpy'] / t['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
