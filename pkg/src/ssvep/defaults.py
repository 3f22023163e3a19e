"""Default processing parameters.

These mirror the acquisition and analysis setup the toolkit reproduces:
250 Hz sampling, a 6-14 Hz elliptic bandpass with 5/15 Hz stop edges,
30 s trials cut into 1 s segments, and the 7/9/11/13 Hz stimulus set.
Everything here is overridable from the CLI.
"""

SAMPLE_RATE_HZ = 250.0

STIMULUS_SET_HZ = (7.0, 9.0, 11.0, 13.0)
FLICKER_DUTY = 0.5

FILTER_ORDER = 4
PASSBAND_HZ = (6.0, 14.0)
STOPBAND_HZ = (5.0, 15.0)
PASSBAND_RIPPLE_DB = 1.0
STOPBAND_ATTEN_DB = 40.0

# Narrowband display filter used for waveform figures.
DISPLAY_PASSBAND_HZ = (6.0, 8.0)
DISPLAY_STOPBAND_HZ = (5.0, 9.0)

TRIAL_DURATION_S = 30.0
SEGMENT_S = 1.0
TRIALS_PER_FREQUENCY = 5
PARTICIPANTS = 5

# Spectra are zero padded to the next power of two at or above this
# multiple of the segment length (sub-0.01 Hz grid for 30 s trials).
PAD_FACTOR = 8

ANALYSIS_BAND_HZ = PASSBAND_HZ

SPECTROGRAM_BAND_HZ = (5.0, 40.0)
SPECTROGRAM_WINDOW_S = 1.0
SPECTROGRAM_OVERLAP = 0.5

DETECTOR_WINDOW_S = 2.0
DETECTOR_HOP_S = 1.0
DETECTOR_MARGIN_DB = 1.0
DETECTOR_CHANNEL = "ear"

SYNTH_FUNDAMENTAL_UV = 4.0
SYNTH_NOISE_UV = 2.0
SYNTH_HARMONIC_GAINS = (0.3,)
SYNTH_EAR_ATTENUATION = 0.8
# Per-trial amplitude gain range in generated sessions; shared between
# occipital and ear channels, which is what makes their segment
# amplitudes co-vary the way simultaneous recordings do.
SYNTH_TRIAL_GAIN_RANGE = (0.8, 1.2)

SEED_ENV_VAR = "SSVEP_SEED"
DEFAULT_SEED = 42
