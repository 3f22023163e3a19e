"""Session-level result tables and plot datasets.

Everything here returns plain rows/arrays; CSV/SVG serialization lives
in the CLI and svgplot so these functions stay easy to test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import defaults, spectral, stats
from .errors import MissingAnalysis
from .filters import apply_filter, display_bandpass
from .io import EAR_ROLE, OCCIPITAL_ROLE, SessionManifest, load_trial


@dataclass(frozen=True)
class MetricsRow:
    participant: str
    stimulus_hz: float
    role: str
    peak_hz: float
    snr_db: float
    bandwidth_hz: float
    n_trials: int


@dataclass(frozen=True)
class CorrelationRow:
    stimulus_hz: float
    r: float
    p: float
    n: int


def analyze_session(session: SessionManifest, *, fs: float = defaults.SAMPLE_RATE_HZ,
                    local_peak: bool = False) -> list[MetricsRow]:
    """Per-(participant, frequency, role) metrics, averaged over trials."""
    groups: dict = {}
    for entry in session.trials:
        trial = load_trial(session, entry, sample_rate=fs)
        per_role = spectral.trial_metrics(
            trial, session.channel_roles, session.stimulus_set,
            entry.spec.stimulus_hz, local_peak=local_peak,
        )
        for role, m in per_role.items():
            key = (entry.spec.participant, entry.spec.stimulus_hz, role)
            groups.setdefault(key, []).append(m)

    rows = []
    role_order = {OCCIPITAL_ROLE: 0, EAR_ROLE: 1}
    for (participant, f_hz, role) in sorted(groups, key=lambda k: (k[0], k[1], role_order[k[2]])):
        ms = groups[(participant, f_hz, role)]
        rows.append(MetricsRow(
            participant=participant,
            stimulus_hz=f_hz,
            role=role,
            peak_hz=float(np.mean([m.peak_hz for m in ms])),
            snr_db=float(np.mean([m.snr_db for m in ms])),
            bandwidth_hz=float(np.mean([m.bandwidth_hz for m in ms])),
            n_trials=len(ms),
        ))
    return rows


def correlate_session(session: SessionManifest, *, fs: float = defaults.SAMPLE_RATE_HZ) -> list[CorrelationRow]:
    """Occipital-vs-ear Pearson correlation per stimulus frequency."""
    dataset = stats.amplitude_dataset(session, fs=fs)
    rows = []
    for f_hz in sorted(dataset):
        occ, ear = dataset[f_hz]
        res = stats.pearson_r(occ, ear)
        rows.append(CorrelationRow(stimulus_hz=f_hz, r=res.r, p=res.p_two_sided, n=res.n))
    return rows


def boxplot_dataset(session: SessionManifest, *, fs: float = defaults.SAMPLE_RATE_HZ) -> list[tuple]:
    """(stimulus_hz, role, BoxStats) triples over the normalized amplitudes."""
    dataset = stats.amplitude_dataset(session, fs=fs)
    if not dataset:
        raise MissingAnalysis("session produced no amplitude data")
    out = []
    for f_hz in sorted(dataset):
        occ, ear = dataset[f_hz]
        out.append((f_hz, OCCIPITAL_ROLE, stats.box_stats(occ)))
        out.append((f_hz, EAR_ROLE, stats.box_stats(ear)))
    return out


def scatter_dataset(session: SessionManifest, *, fs: float = defaults.SAMPLE_RATE_HZ,
                    stimulus_hz: float | None = None) -> list[tuple]:
    """(stimulus_hz, occ_amp, ear_amp) rows, optionally for one frequency."""
    dataset = stats.amplitude_dataset(session, fs=fs)
    if not dataset:
        raise MissingAnalysis("session produced no amplitude data")
    rows = []
    for f_hz in sorted(dataset):
        if stimulus_hz is not None and f_hz != stimulus_hz:
            continue
        occ, ear = dataset[f_hz]
        rows.extend((f_hz, float(o), float(e)) for o, e in zip(occ, ear))
    if not rows:
        raise MissingAnalysis(f"no amplitude pairs for {stimulus_hz} Hz")
    return rows


def waveform_dataset(session: SessionManifest, trial_id: str, *,
                     fs: float = defaults.SAMPLE_RATE_HZ,
                     start_s: float = 0.0, duration_s: float = 1.0) -> tuple:
    """One-second filtered excerpt of every channel of a trial.

    Uses the narrow display bandpass so the cyclic structure is visible.
    Returns (t, {channel_id: series}).
    """
    entry = session.trial(trial_id)
    trial = load_trial(session, entry, sample_rate=fs)
    filt = display_bandpass(fs=fs)
    i0 = int(round(start_s * fs))
    i1 = i0 + int(round(duration_s * fs))
    if i1 > trial.duration_samples:
        raise MissingAnalysis(
            f"excerpt [{start_s}, {start_s + duration_s}] s outside trial of {trial.duration_s:g} s"
        )
    t = np.arange(i0, i1) / fs
    series = {c: apply_filter(filt, trial.channel(c))[i0:i1] for c in trial.channel_ids}
    return t, series


def spectrogram_dataset(session: SessionManifest, trial_id: str, *,
                        fs: float = defaults.SAMPLE_RATE_HZ,
                        channel: str | None = None,
                        band: tuple[float, float] = defaults.SPECTROGRAM_BAND_HZ,
                        window_s: float = defaults.SPECTROGRAM_WINDOW_S,
                        overlap: float = defaults.SPECTROGRAM_OVERLAP) -> spectral.SpectrogramGrid:
    """Wide-band spectrogram of a trial channel (occipital average by default)."""
    entry = session.trial(trial_id)
    trial = load_trial(session, entry, sample_rate=fs)
    if channel is None:
        occ = session.occipital_ids(trial)
        x = np.mean([trial.channel(c) for c in occ], axis=0)
    else:
        x = trial.channel(channel)
    return spectral.spectrogram(x, fs, window_s=window_s, overlap=overlap,
                                band_lo=band[0], band_hi=band[1])
