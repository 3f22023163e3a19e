"""Elliptic IIR bandpass design, verification, and application.

Coefficient synthesis is delegated to ``scipy.signal.ellip``. Everything
around it (the exact degree-equation feasibility check, the achieved
stop-edge geometry, frequency-response evaluation, and the filtering
kernels) is implemented here so the designed cascade can be verified
against independent oracles.

``order`` is the analog lowpass prototype order (the scipy/MATLAB
``ellip(N, ...)`` convention): a bandpass of prototype order N has N
biquad sections and 2N poles. Even orders keep the cascade in
complex-conjugate biquads and are required.

A hard fact about this filter family worth knowing up front: with pass
band 6-14 Hz and stop edges 5-15 Hz at 250 Hz sampling, reaching 40 dB
attenuation needs prototype order 6 (a 12-pole bandpass). Lower orders
cannot meet it, whatever the design tool; ``design_elliptic_bandpass``
refuses such requests unless ``allow_order_limited=True``, in which case
it anchors the passband, keeps the requested stopband depth, and records
where that depth is actually reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal
from scipy.optimize import brentq
from scipy.special import ellipk, ellipkm1

from ._accel import run_sosfilt
from .errors import (
    FrequencyOutOfRange,
    InfeasibleSpec,
    InvalidBandEdges,
    SeriesTooShort,
    SsvepError,
)

POLE_RADIUS_LIMIT = 1.0 - 1e-9


@dataclass(frozen=True)
class FilterDesign:
    """Design request plus the geometry the cascade actually achieves."""

    order: int
    passband_hz: tuple[float, float]
    stopband_hz: tuple[float, float]
    passband_ripple_db: float
    stopband_atten_db: float
    sample_rate: float
    # Frequencies where the response first reaches stopband_atten_db on
    # each side, and the minimum prototype order that would have honored
    # the requested stop edges.
    achieved_stopband_hz: tuple[float, float] = (0.0, 0.0)
    min_order_for_spec: int = 0


@dataclass(frozen=True)
class FilterCoefficients:
    """Cascaded biquads, one row per section: b0, b1, b2, a1, a2 (a0 = 1)."""

    sections: np.ndarray
    design: FilterDesign

    def __post_init__(self):
        sections = np.atleast_2d(np.asarray(self.sections, dtype=np.float64))
        if sections.shape[1] != 5:
            raise SsvepError("sections must be (n, 5): b0,b1,b2,a1,a2")
        object.__setattr__(self, "sections", sections)

    @property
    def n_sections(self) -> int:
        return self.sections.shape[0]

    def pole_radii(self) -> np.ndarray:
        radii = []
        for b0, b1, b2, a1, a2 in self.sections:
            radii.append(np.max(np.abs(np.roots([1.0, a1, a2]))))
        return np.asarray(radii)

    def is_stable(self) -> bool:
        return bool(np.all(self.pole_radii() < POLE_RADIUS_LIMIT))


def _warp(f_hz: float, fs: float) -> float:
    # Bilinear prewarp to the analog axis (rad/s).
    return 2.0 * fs * math.tan(math.pi * f_hz / fs)


def _unwarp(w: float, fs: float) -> float:
    return fs / math.pi * math.atan(w / (2.0 * fs))


def _k_ratio(k: float) -> float:
    # K(k) / K'(k), monotone increasing on (0, 1).
    m = k * k
    return ellipk(m) / ellipkm1(m)


def _prototype_stop_ratio(pass_lo, pass_hi, f_hz, fs) -> float:
    """Map a digital stop frequency to the lowpass-prototype axis."""
    wp1, wp2 = _warp(pass_lo, fs), _warp(pass_hi, fs)
    w = _warp(f_hz, fs)
    w0sq = wp1 * wp2
    bw = wp2 - wp1
    return abs(w * w - w0sq) / (bw * w)


def min_prototype_order(pass_lo, pass_hi, stop_lo, stop_hi, ripple_db, atten_db, fs) -> int:
    """Exact elliptic degree equation: smallest prototype order meeting the spec."""
    omega_s = min(
        _prototype_stop_ratio(pass_lo, pass_hi, stop_lo, fs),
        _prototype_stop_ratio(pass_lo, pass_hi, stop_hi, fs),
    )
    k = 1.0 / omega_s
    eps_p = math.sqrt(10.0 ** (ripple_db / 10.0) - 1.0)
    eps_s = math.sqrt(10.0 ** (atten_db / 10.0) - 1.0)
    k1 = eps_p / eps_s
    n = _k_ratio(k) / _k_ratio(k1)
    # Guard the = case against round-off before taking the ceiling.
    return int(math.ceil(n - 1e-9))


def _natural_stop_edges(order, pass_lo, pass_hi, ripple_db, atten_db, fs):
    """Digital frequencies where a prototype-order-``order`` design reaches atten_db."""
    eps_p = math.sqrt(10.0 ** (ripple_db / 10.0) - 1.0)
    eps_s = math.sqrt(10.0 ** (atten_db / 10.0) - 1.0)
    k1 = eps_p / eps_s
    target = order * _k_ratio(k1)
    k = brentq(lambda kk: _k_ratio(kk) - target, 1e-12, 1.0 - 1e-12, xtol=1e-15)
    omega_s = 1.0 / k
    wp1, wp2 = _warp(pass_lo, fs), _warp(pass_hi, fs)
    w0sq = wp1 * wp2
    bw = (wp2 - wp1) * omega_s
    w_hi = (bw + math.sqrt(bw * bw + 4.0 * w0sq)) / 2.0
    w_lo = w0sq / w_hi
    return _unwarp(w_lo, fs), _unwarp(w_hi, fs)


def achievable_atten_db(order, pass_lo, pass_hi, stop_lo, stop_hi, ripple_db, fs) -> float:
    """Best stopband attenuation this order can place at the requested edges."""
    omega_s = min(
        _prototype_stop_ratio(pass_lo, pass_hi, stop_lo, fs),
        _prototype_stop_ratio(pass_lo, pass_hi, stop_hi, fs),
    )
    k = 1.0 / omega_s
    target = _k_ratio(k) / order
    k1 = brentq(lambda kk: _k_ratio(kk) - target, 1e-15, 1.0 - 1e-12, xtol=1e-18)
    eps_p = math.sqrt(10.0 ** (ripple_db / 10.0) - 1.0)
    eps_s = eps_p / k1
    return 10.0 * math.log10(1.0 + eps_s * eps_s)


def design_elliptic_bandpass(
    order: int,
    pass_lo: float,
    pass_hi: float,
    stop_lo: float,
    stop_hi: float,
    ripple_db: float = 1.0,
    atten_db: float = 40.0,
    fs: float = 250.0,
    *,
    allow_order_limited: bool = False,
) -> FilterCoefficients:
    """Design an elliptic bandpass meeting the five-parameter band spec.

    Parameters
    ----------
    order : int
        Prototype order; the bandpass cascade has ``order`` sections.
        Must be even and >= 2.
    pass_lo, pass_hi : float
        Passband edges (Hz) held to within ``ripple_db`` of unity.
    stop_lo, stop_hi : float
        Frequencies by which ``atten_db`` must be reached.
    allow_order_limited : bool
        When the degree equation says ``order`` cannot honor the stop
        edges, design anyway: the passband and stopband depth are kept
        and the achieved stop edges land wherever the order allows
        (recorded in ``design.achieved_stopband_hz``). Without it such
        requests raise :class:`InfeasibleSpec`.
    """
    if order < 2 or order % 2:
        raise SsvepError(f"order must be even and >= 2, got {order}")
    if not (0.0 < stop_lo < pass_lo < pass_hi < stop_hi < fs / 2.0):
        raise InvalidBandEdges(
            f"need 0 < stop_lo < pass_lo < pass_hi < stop_hi < fs/2, got "
            f"stop=({stop_lo}, {stop_hi}) pass=({pass_lo}, {pass_hi}) fs={fs}"
        )
    if ripple_db <= 0 or atten_db <= ripple_db:
        raise SsvepError("need 0 < ripple_db < atten_db")

    min_order = min_prototype_order(pass_lo, pass_hi, stop_lo, stop_hi, ripple_db, atten_db, fs)
    if order < min_order and not allow_order_limited:
        best = achievable_atten_db(order, pass_lo, pass_hi, stop_lo, stop_hi, ripple_db, fs)
        raise InfeasibleSpec(
            f"order {order} cannot reach {atten_db:g} dB by {stop_lo:g}/{stop_hi:g} Hz "
            f"(needs order {min_order}; order {order} tops out near {best:.1f} dB there). "
            f"Raise the order, relax the spec, or pass allow_order_limited=True."
        )

    sos = signal.ellip(
        order, ripple_db, atten_db, [pass_lo, pass_hi], btype="bandpass", output="sos", fs=fs
    )
    sections = np.column_stack([sos[:, 0], sos[:, 1], sos[:, 2], sos[:, 4], sos[:, 5]])
    design = FilterDesign(
        order=order,
        passband_hz=(pass_lo, pass_hi),
        stopband_hz=(stop_lo, stop_hi),
        passband_ripple_db=ripple_db,
        stopband_atten_db=atten_db,
        sample_rate=fs,
        achieved_stopband_hz=_natural_stop_edges(order, pass_lo, pass_hi, ripple_db, atten_db, fs),
        min_order_for_spec=min_order,
    )
    coeffs = FilterCoefficients(sections=sections, design=design)
    if not coeffs.is_stable():
        raise SsvepError("designed cascade is not stable; spec too extreme")
    return coeffs


def identity_filter(fs: float = 250.0) -> FilterCoefficients:
    """Single pass-through section, mainly useful in tests."""
    design = FilterDesign(
        order=0, passband_hz=(0.0, fs / 2), stopband_hz=(0.0, fs / 2),
        passband_ripple_db=0.0, stopband_atten_db=0.0, sample_rate=fs,
    )
    return FilterCoefficients(sections=np.array([[1.0, 0.0, 0.0, 0.0, 0.0]]), design=design)


def frequency_response(coeffs: FilterCoefficients, freqs) -> np.ndarray:
    """Complex cascade gain at each frequency.

    Evaluates the product over sections of B(z)/A(z) at z = exp(j*2*pi*f/fs)
    directly; this is the oracle the designed coefficients are verified
    against, so it deliberately shares no code with the design path.
    """
    freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
    fs = coeffs.design.sample_rate
    if np.any(freqs < 0) or np.any(freqs > fs / 2.0):
        raise FrequencyOutOfRange(f"frequencies must lie in [0, {fs / 2:g}]")
    zinv = np.exp(-2j * np.pi * freqs / fs)
    h = np.ones_like(zinv)
    for b0, b1, b2, a1, a2 in coeffs.sections:
        h *= (b0 + b1 * zinv + b2 * zinv**2) / (1.0 + a1 * zinv + a2 * zinv**2)
    return h


def apply_filter(coeffs: FilterCoefficients, x) -> np.ndarray:
    """Causal filtering (transposed direct-form II, zero initial state)."""
    x = np.asarray(x, dtype=np.float64)
    return run_sosfilt(coeffs.sections, x)


def apply_filter_zero_phase(coeffs: FilterCoefficients, x) -> np.ndarray:
    """Forward-backward filtering: forward pass, reverse, second pass, reverse.

    Squares the magnitude response and cancels the phase; intended for
    offline use only. Requires len(x) > 3 * (2 * n_sections).
    """
    x = np.asarray(x, dtype=np.float64)
    min_len = 3 * (2 * coeffs.n_sections)
    if x.shape[0] <= min_len:
        raise SeriesTooShort(
            f"zero-phase filtering needs more than {min_len} samples, got {x.shape[0]}"
        )
    y = run_sosfilt(coeffs.sections, x)
    y = run_sosfilt(coeffs.sections, y[::-1].copy())
    return y[::-1].copy()


def sections_csv(coeffs: FilterCoefficients) -> str:
    """Coefficient dump for external verification."""
    lines = ["section,b0,b1,b2,a1,a2"]
    for i, row in enumerate(coeffs.sections):
        lines.append(str(i) + "," + ",".join(format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def default_bandpass(fs: float = 250.0) -> FilterCoefficients:
    """The default 6-14 Hz analysis bandpass (order-limited; see module docs)."""
    from . import defaults

    return design_elliptic_bandpass(
        defaults.FILTER_ORDER,
        *defaults.PASSBAND_HZ,
        *defaults.STOPBAND_HZ,
        ripple_db=defaults.PASSBAND_RIPPLE_DB,
        atten_db=defaults.STOPBAND_ATTEN_DB,
        fs=fs,
        allow_order_limited=True,
    )


def display_bandpass(fs: float = 250.0) -> FilterCoefficients:
    """Narrow 6-8 Hz filter used for waveform figures."""
    from . import defaults

    return design_elliptic_bandpass(
        defaults.FILTER_ORDER,
        *defaults.DISPLAY_PASSBAND_HZ,
        *defaults.DISPLAY_STOPBAND_HZ,
        ripple_db=defaults.PASSBAND_RIPPLE_DB,
        atten_db=defaults.STOPBAND_ATTEN_DB,
        fs=fs,
        allow_order_limited=True,
    )
