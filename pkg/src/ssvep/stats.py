"""Normalization, Pearson correlation, and box-plot statistics.

``pearson_r`` reports the standard t-based two-sided p-value;
``permutation_p`` is the independent Monte-Carlo check of that p-value,
kept deliberately separate from the analytic path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from . import defaults, spectral
from .errors import ConstantSeries, LengthMismatch
from .io import EAR_ROLE, OCCIPITAL_ROLE, SessionManifest, load_trial
from .filters import apply_filter, default_bandpass


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    p_two_sided: float


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    outliers: tuple[float, ...]


def normalize_unit_interval(x) -> np.ndarray:
    """Affine rescale onto [0, 1]: (x - min) / (max - min)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 2:
        raise ValueError(f"need at least 2 values, got {x.size}")
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        raise ConstantSeries("series has zero range; cannot normalize")
    return (x - lo) / (hi - lo)


def pearson_r(x, y) -> CorrelationResult:
    """Sample Pearson correlation with a two-sided t-test p-value.

    p comes from t = r * sqrt((n-2) / (1-r^2)) on n-2 degrees of
    freedom, evaluated through the regularized incomplete beta function.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch(f"lengths differ: {x.shape} vs {y.shape}")
    n = x.size
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    xd = x - x.mean()
    yd = y - y.mean()
    sx = np.sqrt(np.dot(xd, xd))
    sy = np.sqrt(np.dot(yd, yd))
    if sx == 0.0 or sy == 0.0:
        raise ConstantSeries("correlation undefined for a constant series")
    r = float(np.dot(xd, yd) / (sx * sy))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        df = n - 2
        t_sq = r * r * df / (1.0 - r * r)
        p = float(betainc(df / 2.0, 0.5, df / (df + t_sq)))
    return CorrelationResult(r=r, n=n, p_two_sided=p)


def permutation_p(x, y, iters: int = 10_000, seed: int = 0) -> float:
    """Two-sided permutation p-value for the Pearson correlation.

    Counts permutations of y with |r| at least the observed |r|, with
    the usual +1 smoothing: (hits + 1) / (iters + 1).
    """
    if iters < 1000:
        raise ValueError(f"iters must be >= 1000, got {iters}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    observed = pearson_r(x, y).r
    n = x.size
    rng = np.random.default_rng(seed)

    xd = x - x.mean()
    xd /= np.sqrt(np.dot(xd, xd))
    yd = y - y.mean()
    yd /= np.sqrt(np.dot(yd, yd))

    hits = 0
    chunk = max(1, min(iters, 4_000_000 // max(n, 1)))
    done = 0
    while done < iters:
        m = min(chunk, iters - done)
        # m random permutations of yd, as rows
        order = np.argsort(rng.random((m, n)), axis=1)
        r_perm = yd[order] @ xd
        hits += int(np.count_nonzero(np.abs(r_perm) >= abs(observed) - 1e-12))
        done += m
    return (hits + 1.0) / (iters + 1.0)


def box_stats(values) -> BoxStats:
    """Five-number summary with 1.5 * IQR outliers.

    Quartiles use linear interpolation between closest ranks (the
    numpy default, type-7).
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size < 1:
        raise ValueError("need at least one value")
    q1, med, q3 = (float(q) for q in np.quantile(v, [0.25, 0.5, 0.75]))
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    outliers = tuple(float(o) for o in np.sort(v[(v < lo_fence) | (v > hi_fence)]))
    return BoxStats(min=float(v.min()), q1=q1, median=med, q3=q3,
                    max=float(v.max()), outliers=outliers)


def amplitude_dataset(session: SessionManifest, *, fs: float = defaults.SAMPLE_RATE_HZ,
                      seg_s: float = defaults.SEGMENT_S,
                      band: tuple[float, float] = defaults.ANALYSIS_BAND_HZ) -> dict:
    """Paired per-segment maximum FFT amplitudes, occipital average vs ear.

    For every trial, both role series are bandpass filtered, cut into
    segments, and each segment contributes its maximum FFT amplitude.
    Values are normalized to [0, 1] per participant and role across that
    participant's full dataset, then pooled per stimulus frequency.

    Returns {stimulus_hz: (occ_values, ear_values)} with matching order.
    """
    if not session.trials:
        return {}
    filt = default_bandpass(fs=fs)
    # (participant, role) -> list of (stimulus_hz, values per segment)
    raw: dict = {}
    for entry in session.trials:
        trial = load_trial(session, entry, sample_rate=fs)
        occ_ids = session.occipital_ids(trial)
        ear_id = session.ear_id(trial)
        occ = np.mean([apply_filter(filt, trial.channel(c)) for c in occ_ids], axis=0)
        ear = apply_filter(filt, trial.channel(ear_id))
        for role, x in ((OCCIPITAL_ROLE, occ), (EAR_ROLE, ear)):
            amps = spectral.segment_max_amplitudes(x, fs, seg_s=seg_s, band=band)
            raw.setdefault((entry.spec.participant, role), []).append(
                (entry.spec.stimulus_hz, amps)
            )

    # Normalize per participant+role over everything that participant produced.
    normalized: dict = {}
    for key, items in raw.items():
        flat = np.concatenate([a for _, a in items])
        norm = normalize_unit_interval(flat)
        offset = 0
        for f_hz, amps in items:
            normalized.setdefault(key, []).append((f_hz, norm[offset : offset + amps.size]))
            offset += amps.size

    def values_for(participant, role, f_hz):
        vals = []
        for f, arr in normalized.get((participant, role), []):
            if f == f_hz:
                vals.extend(arr.tolist())
        return vals

    out: dict = {}
    participants = sorted({p for p, _ in normalized})
    for f_hz in session.stimulus_set:
        occ_vals, ear_vals = [], []
        for p in participants:
            occ_vals.extend(values_for(p, OCCIPITAL_ROLE, f_hz))
            ear_vals.extend(values_for(p, EAR_ROLE, f_hz))
        out[f_hz] = (np.asarray(occ_vals), np.asarray(ear_vals))
    return out
