"""Deterministic synthetic SSVEP sessions.

The evoked response is modeled as a sinusoid at the flicker frequency
plus optional harmonics riding on 1/f background noise. The occipital
channels and the ear channel share the same deterministic signal (the
ear copy attenuated), each with an independent noise draw, so their
segment amplitudes co-vary the way simultaneously recorded channels do.

Everything is a pure function of its configuration, seed included:
identical configs give bit-identical output on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import defaults
from .errors import AliasingConfig, InvalidDuty, TooFewSamples
from .io import Recording, TrialSpec, write_manifest, write_recording


@dataclass(frozen=True)
class SynthConfig:
    stimulus_hz: float = 7.0
    duration_s: float = defaults.TRIAL_DURATION_S
    fs: float = defaults.SAMPLE_RATE_HZ
    fundamental_uV: float = defaults.SYNTH_FUNDAMENTAL_UV
    harmonic_gains: tuple[float, ...] = defaults.SYNTH_HARMONIC_GAINS
    noise_uV: float = defaults.SYNTH_NOISE_UV
    ear_attenuation: float = defaults.SYNTH_EAR_ATTENUATION
    phase_rad: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.noise_uV < 0:
            raise ValueError("noise_uV must be >= 0")
        if not (0.0 < self.ear_attenuation <= 1.0):
            raise ValueError("ear_attenuation must be in (0, 1]")
        top = self.stimulus_hz * (1 + len(self.harmonic_gains))
        if top >= self.fs / 2.0:
            raise AliasingConfig(
                f"highest harmonic at {top:g} Hz reaches Nyquist ({self.fs / 2:g} Hz)"
            )


def flicker_waveform(f: float, duty: float, fs: float, duration_s: float) -> np.ndarray:
    """Binary stimulus waveform: on while frac(t * f) < duty."""
    if not (0.0 < duty < 1.0):
        raise InvalidDuty(f"duty must be in (0, 1), got {duty}")
    if f >= fs / 2.0:
        raise AliasingConfig(f"flicker at {f} Hz needs fs > {2 * f} Hz")
    n = int(round(duration_s * fs))
    t = np.arange(n) / fs
    return (np.mod(t * f, 1.0) < duty).astype(np.float64)


def pink_noise(n: int, fs: float, rms: float, seed: int) -> np.ndarray:
    """1/f-shaped noise scaled to the requested RMS.

    Seeded white Gaussian noise is shaped in the frequency domain with
    amplitude 1/sqrt(max(f, 1 Hz)), giving power density proportional to
    1/f above 1 Hz with a plateau below, then rescaled exactly to ``rms``.
    """
    if n < 16:
        raise TooFewSamples(f"need n >= 16, got {n}")
    if rms < 0:
        raise ValueError("rms must be >= 0")
    if rms == 0.0:
        return np.zeros(n)
    rng = np.random.default_rng(seed)
    white = rng.standard_normal(n)
    spectrum = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    spectrum /= np.sqrt(np.maximum(freqs, 1.0))
    y = np.fft.irfft(spectrum, n=n)
    return y * (rms / np.sqrt(np.mean(y**2)))


def _deterministic_component(cfg: SynthConfig) -> np.ndarray:
    n = int(round(cfg.duration_s * cfg.fs))
    t = np.arange(n) / cfg.fs
    x = np.sin(2.0 * np.pi * cfg.stimulus_hz * t + cfg.phase_rad)
    for i, gain in enumerate(cfg.harmonic_gains):
        k = i + 2
        x = x + gain * np.sin(2.0 * np.pi * k * cfg.stimulus_hz * t + cfg.phase_rad)
    return cfg.fundamental_uV * x


def generate_trial(cfg: SynthConfig) -> Recording:
    """Three-channel (o1, o2, ear) recording for one trial.

    Noise seeds for the three channels are spawned from ``cfg.seed`` via
    numpy's SeedSequence, so a config maps to exactly one Recording.
    """
    signal = _deterministic_component(cfg)
    n = signal.shape[0]
    noise_seeds = np.random.SeedSequence(cfg.seed).generate_state(3)
    if cfg.noise_uV > 0:
        noises = [pink_noise(n, cfg.fs, cfg.noise_uV, int(s)) for s in noise_seeds]
    else:
        noises = [np.zeros(n)] * 3
    data = np.vstack([
        signal + noises[0],
        signal + noises[1],
        cfg.ear_attenuation * signal + noises[2],
    ])
    return Recording(sample_rate=cfg.fs, channel_ids=("o1", "o2", "ear"), data=data)


def generate_session(
    stimulus_set=defaults.STIMULUS_SET_HZ,
    trials_per_freq: int = defaults.TRIALS_PER_FREQUENCY,
    participants: int = defaults.PARTICIPANTS,
    base_cfg: SynthConfig | None = None,
    seed: int = defaults.DEFAULT_SEED,
    out_dir="session",
    trial_gain_range: tuple[float, float] = defaults.SYNTH_TRIAL_GAIN_RANGE,
) -> Path:
    """Write a full on-disk session and return the manifest path.

    Layout: one recording CSV per trial plus ``manifest.csv``. Per-trial
    seeds and amplitude gains are drawn from a generator seeded with the
    session seed in a fixed (participant, frequency, trial) order; the
    gain scales the shared signal component, giving trials the
    between-trial amplitude variation real sessions show.
    """
    if trials_per_freq < 1 or participants < 1:
        raise ValueError("counts must be >= 1")
    base = base_cfg if base_cfg is not None else SynthConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    entries = []
    for p in range(1, participants + 1):
        for f_hz in stimulus_set:
            for t in range(1, trials_per_freq + 1):
                trial_seed = int(rng.integers(0, 2**31 - 1))
                gain = float(rng.uniform(*trial_gain_range))
                cfg = replace(base, stimulus_hz=float(f_hz), seed=trial_seed,
                              fundamental_uV=base.fundamental_uV * gain)
                rec = generate_trial(cfg)
                name = f"p{p}_f{f_hz:g}_t{t}.csv"
                write_recording(rec, out_dir / name)
                spec = TrialSpec(
                    trial_id=f"p{p}_f{f_hz:g}_t{t}",
                    participant=f"p{p}",
                    stimulus_hz=float(f_hz),
                    start_s=0.0,
                    duration_s=base.duration_s,
                )
                entries.append((spec, name))
    manifest_path = out_dir / "manifest.csv"
    write_manifest(entries, manifest_path)
    return manifest_path
