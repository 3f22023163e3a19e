"""Stimulus-frequency classification, offline and over a sample stream.

Each candidate frequency is scored with the same magnitude-ratio SNR the
analysis pipeline reports (target bin over the mean of the other
candidates); the window is classified as the top-scoring candidate, or
abstains when the margin over the runner-up falls below a threshold.

Streaming just replays the offline computation window by window, so the
two paths produce identical decisions on identical samples.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import defaults
from .errors import WindowTooShort
from .filters import FilterCoefficients, apply_filter, default_bandpass
from .io import Recording, round_half_away
from .spectral import dft_magnitude, snr_db, stimulus_magnitudes


@dataclass(frozen=True)
class Decision:
    window_start_s: float
    chosen_hz: float | None
    scores: dict[float, float]
    confidence_db: float


def classify_window(x, fs: float, stimulus_set=defaults.STIMULUS_SET_HZ,
                    min_margin_db: float = defaults.DETECTOR_MARGIN_DB,
                    *, filt: FilterCoefficients | None = None,
                    window_start_s: float = 0.0) -> Decision:
    """Score one window and pick the stimulus frequency, if any.

    Ties break toward the lower frequency; the decision abstains
    (``chosen_hz=None``) when best-minus-second-best < ``min_margin_db``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] < round_half_away(1.0 * fs):
        raise WindowTooShort(f"window must be at least 1 s ({fs:g} samples), got {x.shape[0]}")
    stimulus_set = tuple(sorted(float(f) for f in stimulus_set))
    if len(stimulus_set) < 2:
        raise ValueError("need at least two candidate frequencies")
    if filt is None:
        filt = default_bandpass(fs=fs)
    filtered = apply_filter(filt, x)
    spec = dft_magnitude(filtered, fs)
    mags = stimulus_magnitudes(spec, stimulus_set)
    scores = {f: snr_db(mags, f) for f in stimulus_set}

    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    best_hz, best = ordered[0]
    margin = best - ordered[1][1]
    chosen = best_hz if margin >= min_margin_db else None
    return Decision(window_start_s=window_start_s, chosen_hz=chosen,
                    scores=scores, confidence_db=margin)


def replay_stream(rec: Recording, channel: str, realtime: bool = False):
    """Yield one channel's samples in order; optionally paced at 1/fs."""
    series = rec.channel(channel)
    dt = 1.0 / rec.sample_rate
    for v in series:
        if realtime:
            time.sleep(dt)
        yield float(v)


def stream_detect(source, fs: float, window_s: float = defaults.DETECTOR_WINDOW_S,
                  hop_s: float = defaults.DETECTOR_HOP_S,
                  stimulus_set=defaults.STIMULUS_SET_HZ,
                  min_margin_db: float = defaults.DETECTOR_MARGIN_DB,
                  *, filt: FilterCoefficients | None = None):
    """Drive ``classify_window`` over a live sample stream.

    Yields one Decision per hop once the first full window has been
    buffered, and simply stops when the stream ends. Decisions are
    bit-identical to running classify_window offline over the same
    window positions.
    """
    win = round_half_away(window_s * fs)
    hop = round_half_away(hop_s * fs)
    if hop < 1 or hop > win:
        raise ValueError("need 0 < hop_s <= window_s")
    if filt is None:
        filt = default_bandpass(fs=fs)
    buf: list[float] = []
    base = 0  # absolute sample index of buf[0]
    next_start = 0
    for sample in source:
        buf.append(sample)
        while base + len(buf) >= next_start + win:
            lo = next_start - base
            window = np.asarray(buf[lo : lo + win])
            yield classify_window(window, fs, stimulus_set, min_margin_db,
                                  filt=filt, window_start_s=next_start / fs)
            next_start += hop
            if next_start > base:
                del buf[: next_start - base]
                base = next_start


def offline_decisions(rec: Recording, channel: str = defaults.DETECTOR_CHANNEL,
                      window_s: float = defaults.DETECTOR_WINDOW_S,
                      hop_s: float = defaults.DETECTOR_HOP_S,
                      stimulus_set=defaults.STIMULUS_SET_HZ,
                      min_margin_db: float = defaults.DETECTOR_MARGIN_DB,
                      *, filt: FilterCoefficients | None = None) -> list[Decision]:
    """Windowed classification of a recorded channel (the offline twin)."""
    x = rec.channel(channel)
    fs = rec.sample_rate
    win = round_half_away(window_s * fs)
    hop = round_half_away(hop_s * fs)
    if hop < 1 or hop > win:
        raise ValueError("need 0 < hop_s <= window_s")
    if filt is None:
        filt = default_bandpass(fs=fs)
    out = []
    for start in range(0, x.shape[0] - win + 1, hop):
        out.append(classify_window(x[start : start + win], fs, stimulus_set,
                                   min_margin_db, filt=filt, window_start_s=start / fs))
    return out
