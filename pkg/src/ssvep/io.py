"""Session data model and on-disk CSV formats.

A recording is a plain CSV: one header row naming the channels as
``<id>_uV``, then one row per sample (LF line endings, ``.`` decimals).
A session manifest is a second CSV listing trials:
``trial_id,participant,stimulus_hz,file,start_s,duration_s`` with file
paths resolved relative to the manifest location.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    MalformedHeader,
    NonNumericSample,
    RaggedRow,
    SsvepError,
    UnknownChannel,
    WindowOutOfRange,
)

HEADER_SUFFIX = "_uV"

OCCIPITAL_ROLE = "occipital"
EAR_ROLE = "ear"

# Channel ids mapped onto analysis roles. Recordings name their own
# channels; anything starting with "o" is treated as an occipital site,
# "ear" as the in-ear electrode.
DEFAULT_CHANNEL_ROLES = {"o1": OCCIPITAL_ROLE, "o2": OCCIPITAL_ROLE, "ear": EAR_ROLE}


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


@dataclass(frozen=True)
class Recording:
    """Multichannel sample series in microvolts.

    ``data`` is (n_channels, n_samples); ``channel_ids`` gives the column
    order of the source file. Instances are treated as immutable.
    """

    sample_rate: float
    channel_ids: tuple[str, ...]
    data: np.ndarray

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise SsvepError(f"sample_rate must be positive, got {self.sample_rate}")
        if len(set(self.channel_ids)) != len(self.channel_ids):
            raise SsvepError(f"duplicate channel ids: {self.channel_ids}")
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] != len(self.channel_ids):
            raise SsvepError("data must be (n_channels, n_samples)")
        object.__setattr__(self, "data", data)

    @property
    def duration_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.duration_samples / self.sample_rate

    def channel(self, channel_id: str) -> np.ndarray:
        if channel_id not in self.channel_ids:
            raise UnknownChannel(f"no channel {channel_id!r}; have {self.channel_ids}")
        return self.data[self.channel_ids.index(channel_id)]


@dataclass(frozen=True)
class TrialSpec:
    """One stimulus presentation window within a recording."""

    trial_id: str
    participant: str
    stimulus_hz: float
    start_s: float
    duration_s: float

    def __post_init__(self):
        if self.duration_s <= 0:
            raise SsvepError(f"trial {self.trial_id}: duration_s must be > 0")
        if self.start_s < 0:
            raise SsvepError(f"trial {self.trial_id}: start_s must be >= 0")


@dataclass(frozen=True)
class TrialEntry:
    """Manifest row: a TrialSpec plus the recording it points into."""

    spec: TrialSpec
    path: Path


@dataclass(frozen=True)
class SessionManifest:
    stimulus_set: tuple[float, ...]
    trials: tuple[TrialEntry, ...]
    channel_roles: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_CHANNEL_ROLES))

    def trial(self, trial_id: str) -> TrialEntry:
        for entry in self.trials:
            if entry.spec.trial_id == trial_id:
                return entry
        raise SsvepError(f"no trial {trial_id!r} in manifest")

    def occipital_ids(self, rec: Recording) -> list[str]:
        return [c for c in rec.channel_ids if self.channel_roles.get(c) == OCCIPITAL_ROLE]

    def ear_id(self, rec: Recording) -> str:
        ears = [c for c in rec.channel_ids if self.channel_roles.get(c) == EAR_ROLE]
        if len(ears) != 1:
            raise SsvepError(f"expected exactly one ear-role channel, found {ears}")
        return ears[0]


def load_recording(path, sample_rate: float = 250.0) -> Recording:
    """Read a recording CSV.

    Raises :class:`MalformedHeader`, :class:`RaggedRow` or
    :class:`NonNumericSample` with the offending 1-based line number.
    """
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise MalformedHeader("missing header row", line=1)

    ids = []
    for cell in lines[0].split(","):
        cell = cell.strip()
        if not cell.endswith(HEADER_SUFFIX) or len(cell) == len(HEADER_SUFFIX):
            raise MalformedHeader(
                f"column {cell!r} does not match '<id>{HEADER_SUFFIX}'", line=1
            )
        ids.append(cell[: -len(HEADER_SUFFIX)])
    if len(set(ids)) != len(ids):
        raise MalformedHeader(f"duplicate channel ids in {ids}", line=1)

    n_chan = len(ids)
    rows = np.empty((max(len(lines) - 1, 0), n_chan), dtype=np.float64)
    for i, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != n_chan:
            raise RaggedRow(line=i, expected=n_chan, got=len(cells))
        for j, cell in enumerate(cells):
            try:
                rows[i - 2, j] = float(cell)
            except ValueError:
                raise NonNumericSample(line=i, cell=cell.strip()) from None
    return Recording(sample_rate=sample_rate, channel_ids=tuple(ids), data=rows.T)


def write_recording(rec: Recording, path) -> None:
    """Write a recording CSV with 9-significant-digit samples."""
    path = Path(path)
    header = ",".join(f"{c}{HEADER_SUFFIX}" for c in rec.channel_ids)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rec.data.T:
            fh.write(",".join(format(v, ".9g") for v in row) + "\n")


def slice_trial(rec: Recording, spec: TrialSpec) -> Recording:
    """Cut the trial window out of a recording.

    Sample counts come from seconds via round-half-away-from-zero, so a
    30 s window at 250 Hz is always exactly 7500 samples.
    """
    start = round_half_away(spec.start_s * rec.sample_rate)
    count = round_half_away(spec.duration_s * rec.sample_rate)
    if start < 0 or start + count > rec.duration_samples:
        raise WindowOutOfRange(
            f"trial {spec.trial_id}: window [{spec.start_s}, "
            f"{spec.start_s + spec.duration_s}] s outside recording of "
            f"{rec.duration_s:g} s"
        )
    return Recording(
        sample_rate=rec.sample_rate,
        channel_ids=rec.channel_ids,
        data=rec.data[:, start : start + count],
    )


def average_channels(rec: Recording, ids) -> np.ndarray:
    """Element-wise mean of the named channels.

    Channels are summed in recording order, so the result is exactly
    independent of the order ids are given in.
    """
    ids = list(ids)
    if not ids:
        raise UnknownChannel("no channel ids given")
    for c in ids:
        if c not in rec.channel_ids:
            raise UnknownChannel(f"no channel {c!r}; have {rec.channel_ids}")
    rows = [rec.channel(c) for c in sorted(ids, key=rec.channel_ids.index)]
    return np.mean(rows, axis=0)


MANIFEST_COLUMNS = ["trial_id", "participant", "stimulus_hz", "file", "start_s", "duration_s"]


def load_manifest(path, channel_roles: dict[str, str] | None = None) -> SessionManifest:
    """Read a session manifest CSV; file paths resolve next to it."""
    path = Path(path)
    base = path.parent
    trials = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != MANIFEST_COLUMNS:
            raise MalformedHeader(
                f"manifest header must be {','.join(MANIFEST_COLUMNS)}", line=1
            )
        for i, row in enumerate(reader, start=2):
            if any(row[c] is None for c in MANIFEST_COLUMNS):
                raise RaggedRow(line=i, expected=len(MANIFEST_COLUMNS), got=sum(v is not None for v in row.values()))
            try:
                spec = TrialSpec(
                    trial_id=row["trial_id"].strip(),
                    participant=row["participant"].strip(),
                    stimulus_hz=float(row["stimulus_hz"]),
                    start_s=float(row["start_s"]),
                    duration_s=float(row["duration_s"]),
                )
            except ValueError as exc:
                raise NonNumericSample(line=i, cell=str(exc)) from None
            entry = TrialEntry(spec=spec, path=base / row["file"].strip())
            if not entry.path.is_file():
                raise SsvepError(f"manifest line {i}: missing recording {entry.path}")
            trials.append(entry)
    stimulus_set = tuple(sorted({t.spec.stimulus_hz for t in trials}))
    roles = dict(DEFAULT_CHANNEL_ROLES) if channel_roles is None else dict(channel_roles)
    return SessionManifest(stimulus_set=stimulus_set, trials=tuple(trials), channel_roles=roles)


def write_manifest(entries, path) -> None:
    """Write manifest rows; ``entries`` yields (TrialSpec, relative-file)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(MANIFEST_COLUMNS) + "\n")
        for spec, relfile in entries:
            fh.write(
                f"{spec.trial_id},{spec.participant},{format(spec.stimulus_hz, '.9g')},"
                f"{relfile},{format(spec.start_s, '.9g')},{format(spec.duration_s, '.9g')}\n"
            )


def load_trial(manifest: SessionManifest, entry: TrialEntry, sample_rate: float = 250.0) -> Recording:
    """Load the trial's recording and slice its window."""
    rec = load_recording(entry.path, sample_rate=sample_rate)
    return slice_trial(rec, entry.spec)
