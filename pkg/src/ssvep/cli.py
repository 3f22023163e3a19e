"""``ssvep`` command-line tool.

Subcommands cover the full workflow: ``synth`` writes a synthetic
session, ``filter`` designs/dumps the bandpass, ``analyze`` emits the
per-trial metrics table, ``spectrogram``/``report`` emit plot data
(CSV, optional SVG), ``correlate`` the per-frequency correlation table,
and ``classify``/``stream`` run the detector offline or over a replayed
stream.

Exit codes: 0 success, 1 data/processing error, 2 usage error.
Identical arguments, inputs, and seeds give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from . import defaults, detector, filters, reports, svgplot, synth
from .errors import SsvepError
from .io import load_manifest

G = ".9g"  # float format used in every CSV we write


def _fmt(v) -> str:
    return format(float(v), G)


def _write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _env_seed() -> int:
    raw = os.environ.get(defaults.SEED_ENV_VAR, "")
    try:
        return int(raw)
    except ValueError:
        return defaults.DEFAULT_SEED


def _parse_band(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def _freq_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ssvep", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="generate a synthetic session on disk")
    sp.add_argument("--freqs", type=_freq_list, default=defaults.STIMULUS_SET_HZ,
                    metavar="HZ,HZ,...")
    sp.add_argument("--trials", type=int, default=defaults.TRIALS_PER_FREQUENCY)
    sp.add_argument("--participants", type=int, default=defaults.PARTICIPANTS)
    sp.add_argument("--duration", type=float, default=defaults.TRIAL_DURATION_S)
    sp.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)
    sp.add_argument("--amp-uv", type=float, default=defaults.SYNTH_FUNDAMENTAL_UV)
    sp.add_argument("--noise-uv", type=float, default=defaults.SYNTH_NOISE_UV)
    sp.add_argument("--ear-attenuation", type=float, default=defaults.SYNTH_EAR_ATTENUATION)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", required=True, metavar="DIR")

    fp = sub.add_parser("filter", help="design the elliptic bandpass and dump sections")
    fp.add_argument("--pass", dest="passband", type=_parse_band,
                    default=defaults.PASSBAND_HZ, metavar="LO:HI")
    fp.add_argument("--stop", dest="stopband", type=_parse_band,
                    default=defaults.STOPBAND_HZ, metavar="LO:HI")
    fp.add_argument("--order", type=int, default=defaults.FILTER_ORDER)
    fp.add_argument("--ripple-db", type=float, default=defaults.PASSBAND_RIPPLE_DB)
    fp.add_argument("--atten-db", type=float, default=defaults.STOPBAND_ATTEN_DB)
    fp.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)
    fp.add_argument("--strict-stopband", action="store_true",
                    help="refuse orders that cannot honor the stop edges")
    fp.add_argument("--zero-phase", action="store_true",
                    help="note the intended forward-backward use in the summary")
    fp.add_argument("--dump", metavar="CSV", help="write sections as CSV")

    ap = sub.add_parser("analyze", help="per-participant metrics table")
    ap.add_argument("--manifest", required=True)
    ap.add_argument("--report", required=True, metavar="CSV")
    ap.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)
    ap.add_argument("--local-peak", action="store_true",
                    help="read SNR magnitudes at local peaks instead of nominal bins")

    gp = sub.add_parser("spectrogram", help="wide-band spectrogram of one trial")
    gp.add_argument("--manifest", required=True)
    gp.add_argument("--trial", required=True)
    gp.add_argument("--channel", default=None)
    gp.add_argument("--band", type=_parse_band, default=defaults.SPECTROGRAM_BAND_HZ,
                    metavar="LO:HI")
    gp.add_argument("--window", type=float, default=defaults.SPECTROGRAM_WINDOW_S)
    gp.add_argument("--overlap", type=float, default=defaults.SPECTROGRAM_OVERLAP)
    gp.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)
    gp.add_argument("--out", required=True, metavar="CSV")
    gp.add_argument("--svg", metavar="SVG")

    cp = sub.add_parser("correlate", help="occipital-vs-ear correlation table")
    cp.add_argument("--manifest", required=True)
    cp.add_argument("--out", required=True, metavar="CSV")
    cp.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)

    rp = sub.add_parser("report", help="plot-data emission (CSV + optional SVG)")
    rp.add_argument("--manifest", required=True)
    kind = rp.add_mutually_exclusive_group(required=True)
    kind.add_argument("--boxplot", metavar="CSV")
    kind.add_argument("--scatter", metavar="CSV")
    kind.add_argument("--waveform", metavar="CSV")
    rp.add_argument("--trial", help="trial id (waveform)")
    rp.add_argument("--freq", type=float, default=None, help="restrict scatter to one frequency")
    rp.add_argument("--start", type=float, default=0.0, help="waveform excerpt start (s)")
    rp.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)
    rp.add_argument("--svg", metavar="SVG")

    kp = sub.add_parser("classify", help="offline windowed classification of a trial")
    dp = sub.add_parser("stream", help="streamed classification of a trial")
    for q in (kp, dp):
        q.add_argument("--manifest", required=True)
        q.add_argument("--trial", required=True)
        q.add_argument("--channel", default=defaults.DETECTOR_CHANNEL)
        q.add_argument("--window", type=float, default=defaults.DETECTOR_WINDOW_S)
        q.add_argument("--hop", type=float, default=defaults.DETECTOR_HOP_S)
        q.add_argument("--margin-db", type=float, default=defaults.DETECTOR_MARGIN_DB)
        q.add_argument("--freqs", type=_freq_list, default=defaults.STIMULUS_SET_HZ,
                       metavar="HZ,HZ,...")
        q.add_argument("--fs", type=float, default=defaults.SAMPLE_RATE_HZ)
    dp.add_argument("--realtime", action="store_true", help="pace replay at 1/fs")

    return p


def _decision_lines(decisions, stimulus_set) -> str:
    cols = ["t_start", "chosen_hz"] + [f"score_{f:g}" for f in stimulus_set] + ["margin_db"]
    lines = [",".join(cols)]
    for d in decisions:
        chosen = "" if d.chosen_hz is None else f"{d.chosen_hz:g}"
        scores = ",".join(_fmt(d.scores[f]) for f in stimulus_set)
        lines.append(f"{_fmt(d.window_start_s)},{chosen},{scores},{_fmt(d.confidence_db)}")
    return "\n".join(lines) + "\n"


def _cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    cfg = synth.SynthConfig(duration_s=args.duration, fs=args.fs,
                            fundamental_uV=args.amp_uv, noise_uV=args.noise_uv,
                            ear_attenuation=args.ear_attenuation)
    manifest = synth.generate_session(
        stimulus_set=args.freqs, trials_per_freq=args.trials,
        participants=args.participants, base_cfg=cfg, seed=seed, out_dir=args.out,
    )
    print(f"wrote {manifest}")
    return 0


def _cmd_filter(args) -> int:
    coeffs = filters.design_elliptic_bandpass(
        args.order, *args.passband, *args.stopband,
        ripple_db=args.ripple_db, atten_db=args.atten_db, fs=args.fs,
        allow_order_limited=not args.strict_stopband,
    )
    d = coeffs.design
    print(f"elliptic bandpass: prototype order {d.order} ({coeffs.n_sections} sections), "
          f"fs {d.sample_rate:g} Hz")
    print(f"passband {d.passband_hz[0]:g}-{d.passband_hz[1]:g} Hz at "
          f"{d.passband_ripple_db:g} dB ripple")
    print(f"requested stop edges {d.stopband_hz[0]:g}/{d.stopband_hz[1]:g} Hz at "
          f"{d.stopband_atten_db:g} dB; achieved at "
          f"{d.achieved_stopband_hz[0]:.3f}/{d.achieved_stopband_hz[1]:.3f} Hz")
    if d.min_order_for_spec > d.order:
        print(f"note: honoring the requested stop edges needs prototype order "
              f"{d.min_order_for_spec}")
    if args.zero_phase:
        print("zero-phase use doubles the attenuation figures above")
    if args.dump:
        _write(args.dump, filters.sections_csv(coeffs))
        print(f"wrote {args.dump}")
    return 0


def _cmd_analyze(args) -> int:
    session = load_manifest(args.manifest)
    rows = reports.analyze_session(session, fs=args.fs, local_peak=args.local_peak)
    lines = ["participant,stimulus_hz,role,peak_hz,snr_db,bandwidth_hz,n_trials"]
    for r in rows:
        lines.append(f"{r.participant},{_fmt(r.stimulus_hz)},{r.role},"
                     f"{_fmt(r.peak_hz)},{_fmt(r.snr_db)},{_fmt(r.bandwidth_hz)},{r.n_trials}")
    _write(args.report, "\n".join(lines) + "\n")
    print(f"wrote {args.report} ({len(rows)} rows)")
    return 0


def _cmd_spectrogram(args) -> int:
    session = load_manifest(args.manifest)
    grid = reports.spectrogram_dataset(session, args.trial, fs=args.fs,
                                       channel=args.channel, band=args.band,
                                       window_s=args.window, overlap=args.overlap)
    lines = ["t_s,freq_hz,power"]
    for i, t in enumerate(grid.times):
        for j, f in enumerate(grid.freqs):
            lines.append(f"{_fmt(t)},{_fmt(f)},{_fmt(grid.power[i, j])}")
    _write(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(grid.times)}x{len(grid.freqs)} frames)")
    if args.svg:
        _write(args.svg, svgplot.spectrogram_svg(grid, title=f"Spectrogram {args.trial}"))
        print(f"wrote {args.svg}")
    return 0


def _cmd_correlate(args) -> int:
    session = load_manifest(args.manifest)
    rows = reports.correlate_session(session, fs=args.fs)
    lines = ["stimulus_hz,r,p,n"]
    for r in rows:
        lines.append(f"{_fmt(r.stimulus_hz)},{_fmt(r.r)},{_fmt(r.p)},{r.n}")
    _write(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_report(args) -> int:
    session = load_manifest(args.manifest)
    if args.boxplot:
        entries = reports.boxplot_dataset(session, fs=args.fs)
        lines = ["stimulus_hz,role,min,q1,median,q3,max,outliers"]
        for f_hz, role, b in entries:
            outl = ";".join(_fmt(o) for o in b.outliers)
            lines.append(f"{_fmt(f_hz)},{role},{_fmt(b.min)},{_fmt(b.q1)},"
                         f"{_fmt(b.median)},{_fmt(b.q3)},{_fmt(b.max)},{outl}")
        _write(args.boxplot, "\n".join(lines) + "\n")
        print(f"wrote {args.boxplot}")
        if args.svg:
            _write(args.svg, svgplot.boxplot_svg(entries))
            print(f"wrote {args.svg}")
    elif args.scatter:
        rows = reports.scatter_dataset(session, fs=args.fs, stimulus_hz=args.freq)
        lines = ["stimulus_hz,occipital_amp,ear_amp"]
        lines += [f"{_fmt(f)},{_fmt(o)},{_fmt(e)}" for f, o, e in rows]
        _write(args.scatter, "\n".join(lines) + "\n")
        print(f"wrote {args.scatter} ({len(rows)} pairs)")
        if args.svg:
            _write(args.svg, svgplot.scatter_svg(rows))
            print(f"wrote {args.svg}")
    else:
        if not args.trial:
            raise SsvepError("--waveform needs --trial")
        t, series = reports.waveform_dataset(session, args.trial, fs=args.fs,
                                             start_s=args.start)
        lines = ["t_s," + ",".join(series)]
        for i, tv in enumerate(t):
            lines.append(_fmt(tv) + "," + ",".join(_fmt(series[c][i]) for c in series))
        _write(args.waveform, "\n".join(lines) + "\n")
        print(f"wrote {args.waveform}")
        if args.svg:
            _write(args.svg, svgplot.waveform_svg(t, series,
                                                  title=f"Trial {args.trial} (6-8 Hz view)"))
            print(f"wrote {args.svg}")
    return 0


def _cmd_classify(args) -> int:
    session = load_manifest(args.manifest)
    from .io import load_trial

    trial = load_trial(session, session.trial(args.trial), sample_rate=args.fs)
    decisions = detector.offline_decisions(
        trial, channel=args.channel, window_s=args.window, hop_s=args.hop,
        stimulus_set=args.freqs, min_margin_db=args.margin_db,
    )
    sys.stdout.write(_decision_lines(decisions, tuple(sorted(args.freqs))))
    return 0


def _cmd_stream(args) -> int:
    session = load_manifest(args.manifest)
    from .io import load_trial

    trial = load_trial(session, session.trial(args.trial), sample_rate=args.fs)
    source = detector.replay_stream(trial, args.channel, realtime=args.realtime)
    decisions = detector.stream_detect(
        source, args.fs, window_s=args.window, hop_s=args.hop,
        stimulus_set=args.freqs, min_margin_db=args.margin_db,
    )
    stim = tuple(sorted(args.freqs))
    cols = ["t_start", "chosen_hz"] + [f"score_{f:g}" for f in stim] + ["margin_db"]
    sys.stdout.write(",".join(cols) + "\n")
    for d in decisions:
        sys.stdout.write(_decision_lines([d], stim).splitlines()[1] + "\n")
        sys.stdout.flush()
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "filter": _cmd_filter,
    "analyze": _cmd_analyze,
    "spectrogram": _cmd_spectrogram,
    "correlate": _cmd_correlate,
    "report": _cmd_report,
    "classify": _cmd_classify,
    "stream": _cmd_stream,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SsvepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
