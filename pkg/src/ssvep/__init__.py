"""SSVEP signal-analysis toolkit.

Elliptic bandpass filtering, FFT-based peak/SNR/bandwidth metrics,
spectrograms, occipital-vs-ear correlation reports, a deterministic
synthetic session generator, and an offline/streaming stimulus-frequency
detector, all behind the ``ssvep`` CLI.
"""

from . import defaults
from .detector import Decision, classify_window, offline_decisions, replay_stream, stream_detect
from .errors import SsvepError
from .filters import (
    FilterCoefficients,
    apply_filter,
    apply_filter_zero_phase,
    design_elliptic_bandpass,
    frequency_response,
    default_bandpass,
)
from .io import Recording, SessionManifest, TrialSpec, load_manifest, load_recording, slice_trial
from .spectral import (
    SegmentSpectrum,
    SsvepMetrics,
    bandwidth_3db,
    dft_magnitude,
    peak_frequency,
    segment_series,
    snr_db,
    spectrogram,
    trial_metrics,
)
from .stats import BoxStats, CorrelationResult, box_stats, normalize_unit_interval, pearson_r, permutation_p
from .synth import SynthConfig, flicker_waveform, generate_session, generate_trial, pink_noise

__version__ = "0.1.0"
