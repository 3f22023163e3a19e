"""Exception types raised by the toolkit.

Everything derives from :class:`SsvepError` so callers (and the CLI) can
catch data/processing failures in one place without swallowing genuine
programming errors.
"""


class SsvepError(Exception):
    """Base class for all toolkit errors."""


# --- recording / session files -------------------------------------------

class MalformedHeader(SsvepError):
    """Recording CSV header is missing, empty, or has bad column names."""

    def __init__(self, message, line=1):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RaggedRow(SsvepError):
    """A data row has the wrong number of columns."""

    def __init__(self, line, expected, got):
        super().__init__(f"line {line}: expected {expected} columns, got {got}")
        self.line = line


class NonNumericSample(SsvepError):
    """A data cell could not be parsed as a number."""

    def __init__(self, line, cell):
        super().__init__(f"line {line}: non-numeric sample {cell!r}")
        self.line = line


class WindowOutOfRange(SsvepError):
    """Requested trial window does not lie inside the recording."""


class UnknownChannel(SsvepError):
    """Channel id not present in the recording."""


# --- filter design / application ------------------------------------------

class InvalidBandEdges(SsvepError):
    """Band edges are not strictly ordered within (0, fs/2)."""


class InfeasibleSpec(SsvepError):
    """Requested order is too low for the attenuation/transition spec."""


class FrequencyOutOfRange(SsvepError):
    """Frequency outside [0, fs/2]."""


class SeriesTooShort(SsvepError):
    """Input series shorter than the operation requires."""


# --- spectral analysis -----------------------------------------------------

class BadPadLength(SsvepError):
    """FFT pad length smaller than the segment."""


class EmptyBand(SsvepError):
    """Frequency band covers fewer than the required number of bins."""


class ZeroDenominator(SsvepError):
    """SNR reference magnitudes average to zero."""


class UnknownTarget(SsvepError):
    """SNR target frequency missing from the magnitude mapping."""


class NoPeak(SsvepError):
    """No usable spectral peak at/near the requested frequency."""


class WindowTooShort(SsvepError):
    """Analysis window shorter than the operation requires."""


# --- statistics ------------------------------------------------------------

class ConstantSeries(SsvepError):
    """Series has zero range/variance where variation is required."""


class LengthMismatch(SsvepError):
    """Paired series have different lengths."""


# --- synthesis -------------------------------------------------------------

class InvalidDuty(SsvepError):
    """Duty cycle outside (0, 1)."""


class AliasingConfig(SsvepError):
    """Configured harmonics would exceed the Nyquist frequency."""


class TooFewSamples(SsvepError):
    """Noise generator needs a longer output."""


# --- reporting -------------------------------------------------------------

class MissingAnalysis(SsvepError):
    """Plot emission requested before/without the backing analysis data."""
