"""Segmentation, FFT magnitudes, SNR, -3 dB bandwidth, and spectrograms.

The SNR of a stimulus frequency is the ratio of its FFT magnitude to the
mean FFT magnitude of the other stimulus frequencies, in dB:

    snr = 20 * log10(mag[target] / mean(mag[others]))

Whole-trial spectra (zero padded for a sub-0.01 Hz grid) carry the
peak/SNR/bandwidth metrics; 1 s segments feed the amplitude
distributions used by the correlation reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import defaults
from .errors import (
    BadPadLength,
    EmptyBand,
    NoPeak,
    SeriesTooShort,
    UnknownTarget,
    WindowTooShort,
    ZeroDenominator,
)
from .filters import FilterCoefficients, apply_filter, default_bandpass
from .io import EAR_ROLE, OCCIPITAL_ROLE, Recording, round_half_away


@dataclass(frozen=True)
class SegmentSpectrum:
    """One-sided magnitude spectrum of a single analysis segment."""

    freqs: np.ndarray
    magnitudes: np.ndarray
    segment_index: int = 0
    source_channel: str = ""

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.float64)
        mags = np.asarray(self.magnitudes, dtype=np.float64)
        if freqs.shape != mags.shape or freqs.ndim != 1:
            raise ValueError("freqs and magnitudes must be 1-D and equal length")
        if freqs.size >= 2 and np.any(np.diff(freqs) <= 0):
            raise ValueError("freqs must be strictly ascending")
        if np.any(mags < 0):
            raise ValueError("magnitudes must be nonnegative")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "magnitudes", mags)

    @property
    def df(self) -> float:
        return float(self.freqs[1] - self.freqs[0])

    def nearest_bin(self, f_hz: float) -> int:
        return int(np.argmin(np.abs(self.freqs - f_hz)))


@dataclass(frozen=True)
class SsvepMetrics:
    peak_hz: float
    snr_db: float
    bandwidth_hz: float
    stimulus_hz: float
    bandwidth_clipped: bool = False


@dataclass(frozen=True)
class SpectrogramGrid:
    times: np.ndarray
    freqs: np.ndarray
    power: np.ndarray
    window_s: float
    overlap_fraction: float

    def __post_init__(self):
        if self.power.shape != (len(self.times), len(self.freqs)):
            raise ValueError("power must be (n_times, n_freqs)")


@dataclass(frozen=True)
class Bandwidth3dB:
    width_hz: float
    lo_hz: float
    hi_hz: float
    clipped: bool


def segment_series(x, fs: float, seg_s: float = 1.0) -> list[np.ndarray]:
    """Cut into consecutive non-overlapping segments; remainder discarded."""
    x = np.asarray(x, dtype=np.float64)
    if seg_s <= 0:
        raise ValueError("seg_s must be positive")
    seg_len = round_half_away(seg_s * fs)
    if x.shape[0] < seg_len:
        raise SeriesTooShort(f"need at least {seg_len} samples, got {x.shape[0]}")
    n_seg = x.shape[0] // seg_len
    return [x[i * seg_len : (i + 1) * seg_len] for i in range(n_seg)]


def default_pad(n: int, factor: int = defaults.PAD_FACTOR) -> int:
    """Next power of two at or above factor * n."""
    return 1 << int(np.ceil(np.log2(max(factor * n, 1))))


def dft_magnitude(segment, fs: float, pad_to: int | None = None,
                  segment_index: int = 0, source_channel: str = "") -> SegmentSpectrum:
    """One-sided magnitude spectrum of the zero-padded segment.

    Magnitudes are raw |DFT| values (a unit cosine on a bin gives N/2),
    on a grid spaced fs / pad_to.
    """
    segment = np.asarray(segment, dtype=np.float64)
    n = segment.shape[0]
    if pad_to is None:
        pad_to = default_pad(n)
    if pad_to < n:
        raise BadPadLength(f"pad_to={pad_to} is smaller than the segment ({n})")
    mags = np.abs(np.fft.rfft(segment, n=pad_to))
    freqs = np.fft.rfftfreq(pad_to, d=1.0 / fs)
    return SegmentSpectrum(freqs=freqs, magnitudes=mags,
                           segment_index=segment_index, source_channel=source_channel)


def peak_frequency(spec: SegmentSpectrum, band_lo: float, band_hi: float) -> float:
    """Frequency of the largest magnitude in the band, quadratically refined.

    The refinement fits a parabola through the peak bin and its grid
    neighbours; ties break toward the lower frequency.
    """
    mask = (spec.freqs >= band_lo) & (spec.freqs <= band_hi)
    idx = np.nonzero(mask)[0]
    if idx.size < 3:
        raise EmptyBand(f"band [{band_lo}, {band_hi}] Hz covers {idx.size} bins, need >= 3")
    mags = spec.magnitudes
    k = idx[int(np.argmax(mags[idx]))]
    if k == 0 or k == len(mags) - 1:
        return float(spec.freqs[k])
    denom = mags[k - 1] - 2.0 * mags[k] + mags[k + 1]
    if denom == 0.0:
        return float(spec.freqs[k])
    delta = 0.5 * (mags[k - 1] - mags[k + 1]) / denom
    delta = float(np.clip(delta, -0.5, 0.5))
    return float(spec.freqs[k] + delta * spec.df)


def snr_db(mags_at_stimuli: dict, target: float) -> float:
    """Target magnitude over the mean of the other stimulus magnitudes, in dB."""
    if target not in mags_at_stimuli:
        raise UnknownTarget(f"target {target} Hz not in {sorted(mags_at_stimuli)}")
    if len(mags_at_stimuli) < 2:
        raise ValueError("need at least two stimulus magnitudes")
    others = [v for f, v in mags_at_stimuli.items() if f != target]
    ref = float(np.mean(others))
    if ref <= 0.0:
        raise ZeroDenominator("mean reference magnitude is zero")
    return float(20.0 * np.log10(mags_at_stimuli[target] / ref))


def bandwidth_3db(spec: SegmentSpectrum, peak_hz: float) -> Bandwidth3dB:
    """Width around the peak where power stays above half its maximum.

    Each half-power crossing is located by linear interpolation between
    the straddling bins; a side that never drops below half power within
    the grid is clamped to the grid edge and flagged as clipped.
    """
    k = spec.nearest_bin(peak_hz)
    power = spec.magnitudes**2
    p_peak = power[k]
    if p_peak <= 0.0:
        raise NoPeak(f"no power at/near {peak_hz} Hz")
    half = 0.5 * p_peak

    def cross(start, step):
        i = start
        while 0 <= i + step < len(power):
            j = i + step
            if power[j] < half:
                # interpolate between bins i (>= half) and j (< half)
                frac = (power[i] - half) / (power[i] - power[j])
                return float(spec.freqs[i] + frac * (spec.freqs[j] - spec.freqs[i])), False
            i = j
        return float(spec.freqs[i]), True

    lo_hz, clip_lo = cross(k, -1)
    hi_hz, clip_hi = cross(k, +1)
    return Bandwidth3dB(width_hz=hi_hz - lo_hz, lo_hz=lo_hz, hi_hz=hi_hz,
                        clipped=clip_lo or clip_hi)


def spectrogram(x, fs: float, window_s: float = defaults.SPECTROGRAM_WINDOW_S,
                overlap: float = defaults.SPECTROGRAM_OVERLAP,
                band_lo: float = defaults.SPECTROGRAM_BAND_HZ[0],
                band_hi: float = defaults.SPECTROGRAM_BAND_HZ[1]) -> SpectrogramGrid:
    """Hann-windowed short-time power spectra restricted to a band."""
    x = np.asarray(x, dtype=np.float64)
    win = round_half_away(window_s * fs)
    if win < 8:
        raise WindowTooShort(f"window of {win} samples is below the 8-sample minimum")
    if not (0.0 <= overlap < 1.0):
        raise ValueError("overlap must be in [0, 1)")
    hop = max(round_half_away(win * (1.0 - overlap)), 1)
    if x.shape[0] < win:
        raise SeriesTooShort(f"need at least {win} samples, got {x.shape[0]}")
    taper = np.hanning(win)
    freqs = np.fft.rfftfreq(win, d=1.0 / fs)
    keep = (freqs >= band_lo) & (freqs <= band_hi)
    starts = np.arange(0, x.shape[0] - win + 1, hop)
    power = np.empty((starts.size, int(keep.sum())))
    for r, s in enumerate(starts):
        spec = np.fft.rfft(x[s : s + win] * taper)
        power[r] = np.abs(spec[keep]) ** 2
    times = (starts + win / 2.0) / fs
    return SpectrogramGrid(times=times, freqs=freqs[keep], power=power,
                           window_s=window_s, overlap_fraction=overlap)


def stimulus_magnitudes(spec: SegmentSpectrum, stimulus_set, *, local_peak: bool = False,
                        search_hz: float = 0.5) -> dict:
    """FFT magnitude per stimulus frequency.

    By default reads the nearest grid bin to each nominal frequency;
    with ``local_peak`` the maximum within +/- ``search_hz`` is used.
    """
    out = {}
    for f in stimulus_set:
        if local_peak:
            mask = (spec.freqs >= f - search_hz) & (spec.freqs <= f + search_hz)
            if not mask.any():
                raise EmptyBand(f"no bins within {search_hz} Hz of {f} Hz")
            out[f] = float(spec.magnitudes[mask].max())
        else:
            out[f] = float(spec.magnitudes[spec.nearest_bin(f)])
    return out


def trial_metrics(trial: Recording, roles: dict, stimulus_set, stimulus_hz: float,
                  *, filt: FilterCoefficients | None = None,
                  band: tuple[float, float] = defaults.ANALYSIS_BAND_HZ,
                  local_peak: bool = False) -> dict[str, SsvepMetrics]:
    """Peak/SNR/bandwidth for the occipital average and the ear channel.

    The full chain: bandpass filter each channel, average the occipital
    pair, take the whole-trial padded spectrum, then read the metrics
    from it.
    """
    if filt is None:
        filt = default_bandpass(fs=trial.sample_rate)
    occ_ids = [c for c in trial.channel_ids if roles.get(c) == OCCIPITAL_ROLE]
    ear_ids = [c for c in trial.channel_ids if roles.get(c) == EAR_ROLE]
    if not occ_ids or len(ear_ids) != 1:
        raise ValueError(f"need >=1 occipital and exactly 1 ear channel, got roles for {trial.channel_ids}")

    filtered = {c: apply_filter(filt, trial.channel(c)) for c in occ_ids + ear_ids}
    series = {
        OCCIPITAL_ROLE: np.mean([filtered[c] for c in occ_ids], axis=0),
        EAR_ROLE: filtered[ear_ids[0]],
    }
    out = {}
    for role, x in series.items():
        spec = dft_magnitude(x, trial.sample_rate, source_channel=role)
        peak = peak_frequency(spec, band[0], band[1])
        mags = stimulus_magnitudes(spec, stimulus_set, local_peak=local_peak)
        snr = snr_db(mags, stimulus_hz)
        bw = bandwidth_3db(spec, peak)
        out[role] = SsvepMetrics(peak_hz=peak, snr_db=snr, bandwidth_hz=bw.width_hz,
                                 stimulus_hz=stimulus_hz, bandwidth_clipped=bw.clipped)
    return out


def segment_max_amplitudes(x, fs: float, seg_s: float = defaults.SEGMENT_S,
                           band: tuple[float, float] | None = None) -> np.ndarray:
    """Per-segment maximum FFT amplitude, optionally within a band."""
    maxima = []
    for i, seg in enumerate(segment_series(x, fs, seg_s)):
        spec = dft_magnitude(seg, fs, segment_index=i)
        mags = spec.magnitudes
        if band is not None:
            mask = (spec.freqs >= band[0]) & (spec.freqs <= band[1])
            mags = mags[mask]
        maxima.append(float(mags.max()))
    return np.asarray(maxima)
