"""Hot numeric kernels, numba-compiled when available.

The IIR cascade is the only truly sequential inner loop in the toolkit (every
other stage is FFT/vector work that numpy already handles), so it is the
one kernel that carries an ``@njit`` build. Set ``SSVEP_DISABLE_NUMBA=1``
to force the plain-Python/numpy fallback; both paths run the same source,
so results are bit-identical either way.
"""

import os

import numpy as np


def _sosfilt_impl(sections, x):
    # Direct-form transposed-II biquad cascade, zero initial conditions.
    # sections is (n_sections, 5): b0, b1, b2, a1, a2 with a0 == 1.
    y = x.copy()
    n = y.shape[0]
    for s in range(sections.shape[0]):
        b0 = sections[s, 0]
        b1 = sections[s, 1]
        b2 = sections[s, 2]
        a1 = sections[s, 3]
        a2 = sections[s, 4]
        z1 = 0.0
        z2 = 0.0
        for i in range(n):
            xi = y[i]
            yi = b0 * xi + z1
            z1 = b1 * xi - a1 * yi + z2
            z2 = b2 * xi - a2 * yi
            y[i] = yi
    return y


def _want_numba() -> bool:
    flag = os.environ.get("SSVEP_DISABLE_NUMBA", "").strip().lower()
    if flag in ("1", "true", "yes", "on"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


if _want_numba():
    from numba import njit

    sosfilt = njit(cache=True)(_sosfilt_impl)
    USING_NUMBA = True
else:
    sosfilt = _sosfilt_impl
    USING_NUMBA = False

# Kept importable for tests/benchmarks regardless of the active backend.
sosfilt_python = _sosfilt_impl


def run_sosfilt(sections, x) -> np.ndarray:
    """Apply the cascade to ``x`` through the selected backend."""
    sections = np.ascontiguousarray(sections, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    return sosfilt(sections, x)
