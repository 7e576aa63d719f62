#!/usr/bin/env python3
"""Time the numba kernels against the numpy/scipy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

The selected path honors FFGAS_NUMBA; both implementations are imported
explicitly here so a single run compares them side by side.
"""
import time

import numpy as np

import ffgas.kernels as K
from ffgas import Grid, Trajectory, soft_half_width


def timeit(fn, *args, repeat=3):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_hermite():
    xi = np.linspace(-160.0, 160.0, 8193)
    n = 5000
    rows = []
    if K.NUMBA_ENABLED:
        K.hermite_psi(xi[:16], 4)  # compile
        t, a = timeit(K.hermite_psi, xi, n)
        rows.append(("hermite_psi(n=5000, 8193 pts)", "numba", t, a))
    t, b = timeit(K.hermite_psi_numpy, xi, n)
    rows.append(("hermite_psi(n=5000, 8193 pts)", "numpy", t, b))
    if len(rows) == 2:
        assert np.max(np.abs(rows[0][3] - rows[1][3])) < 1e-12
    return rows


def bench_cn():
    traj = Trajectory(L0=1.0, v_bar=1.0, T_FF=1.0)
    g = Grid.symmetric(soft_half_width(2.0, 3), 2048)
    nsteps = 10_000
    dt = traj.T_FF / nsteps
    tmid = (np.arange(nsteps) + 0.5) * dt
    km = traj.kinematics(tmid)
    qcoef = 0.5 * (1.0 / np.asarray(km.L) ** 4
                   - np.asarray(km.Lddot) / np.asarray(km.L))
    wall = np.full(nsteps, np.inf)
    psi0 = np.exp(-0.5 * g.x**2).astype(np.complex128)
    psi0 /= g.norm(psi0)
    rows = []
    if K.NUMBA_ENABLED:
        K.cn_sweep(psi0, g.x, dt, 1.0, 1.0, qcoef[:2], wall[:2], 1e8)  # compile
        t, a = timeit(K.cn_sweep, psi0, g.x, dt, 1.0, 1.0, qcoef, wall, 1e8)
        rows.append(("cn_sweep(1e4 steps, 2048 pts)", "numba", t, a))
    t, b = timeit(K.cn_sweep_numpy, psi0, g.x, dt, 1.0, 1.0, qcoef, wall, 1e8)
    rows.append(("cn_sweep(1e4 steps, 2048 pts)", "numpy+scipy", t, b))
    if len(rows) == 2:
        assert np.max(np.abs(rows[0][3] - rows[1][3])) < 1e-10
    return rows


def main():
    print(f"numba enabled: {K.NUMBA_ENABLED}")
    rows = bench_hermite() + bench_cn()
    width = max(len(r[0]) for r in rows)
    for name, path, t, _ in rows:
        print(f"{name:<{width}}  {path:<12} {t * 1e3:9.1f} ms")
    pairs = {}
    for name, path, t, _ in rows:
        pairs.setdefault(name, {})[path] = t
    for name, d in pairs.items():
        if len(d) == 2:
            numba_t = d["numba"]
            other = [v for k, v in d.items() if k != "numba"][0]
            print(f"{name:<{width}}  speedup    {other / numba_t:9.1f}x")


if __name__ == "__main__":
    main()
