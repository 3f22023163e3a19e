#!/usr/bin/env python3
"""Benchmark the IIR cascade kernel: numba njit vs pure-Python fallback.

The cascade is the toolkit's only sequential hot loop; everything else is
FFT-bound numpy. scipy.signal.sosfilt is timed alongside as the external
reference implementation.

Run:  python benchmarks/bench_filter.py
Set SSVEP_DISABLE_NUMBA=1 to confirm the package falls back cleanly.
"""

import time

import numpy as np
from scipy import signal

from ssvep import _accel
from ssvep.filters import default_bandpass


def timeit(fn, *args, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    coeffs = default_bandpass(250.0)
    sections = np.ascontiguousarray(coeffs.sections)
    sos = np.hstack([sections[:, :3], np.ones((sections.shape[0], 1)), sections[:, 3:]])

    kernels = [("python fallback", lambda x: _accel.sosfilt_python(sections, x.copy()))]
    if _accel.USING_NUMBA:
        _accel.run_sosfilt(sections, np.zeros(16))  # compile outside the timing loop
        kernels.append(("numba njit", lambda x: _accel.sosfilt(sections, x.copy())))
    kernels.append(("scipy.sosfilt", lambda x: signal.sosfilt(sos, x)))

    sizes = [1_000, 10_000, 100_000, 1_000_000]
    rng = np.random.default_rng(0)
    print(f"numba active: {_accel.USING_NUMBA}")
    print(f"{'n':>10} " + " ".join(f"{name:>16}" for name, _ in kernels) + "   speedup")
    for n in sizes:
        x = rng.standard_normal(n)
        times = [timeit(fn, x) for _, fn in kernels]
        ratio = times[0] / times[1] if len(times) > 1 else 1.0
        cells = " ".join(f"{t * 1e3:>13.2f} ms" for t in times)
        print(f"{n:>10} {cells}   {ratio:6.1f}x")

    # sanity: all paths agree on the same input
    x = rng.standard_normal(10_000)
    outs = [fn(x) for _, fn in kernels]
    for name_fn, out in zip(kernels[1:], outs[1:]):
        assert np.allclose(outs[0], out, rtol=1e-12, atol=1e-12), name_fn[0]
    print("all backends agree (rtol 1e-12)")


if __name__ == "__main__":
    main()
