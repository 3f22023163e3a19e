import pytest

from ssvep import defaults
from ssvep.cli import run


def run_ok(argv):
    code = run(argv)
    assert code == 0, f"command failed: {argv}"
    return code


@pytest.fixture(scope="module")
def session_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli_session")
    run_ok(["synth", "--trials", "1", "--participants", "2", "--duration", "5",
            "--noise-uv", "1.0", "--seed", "5", "--out", str(d)])
    return d


def test_synth_writes_manifest_and_files(session_dir):
    manifest = session_dir / "manifest.csv"
    assert manifest.exists()
    lines = manifest.read_text().strip().split("\n")
    assert lines[0] == "trial_id,participant,stimulus_hz,file,start_s,duration_s"
    assert len(lines) == 1 + 2 * 4  # 2 participants x 4 freqs x 1 trial
    assert len(list(session_dir.glob("p*_f*_t*.csv"))) == 8


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["synth", "--bogus"])
    assert exc.value.code == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_missing_file_is_data_error(tmp_path, capsys):
    code = run(["analyze", "--manifest", str(tmp_path / "nope.csv"),
                "--report", str(tmp_path / "r.csv")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_filter_summary_and_dump(tmp_path, capsys):
    dump = tmp_path / "coeffs.csv"
    run_ok(["filter", "--dump", str(dump)])
    out = capsys.readouterr().out
    assert "prototype order 4" in out
    assert "needs prototype order 6" in out
    lines = dump.read_text().strip().split("\n")
    assert lines[0] == "section,b0,b1,b2,a1,a2"
    assert len(lines) == 5


def test_filter_strict_stopband_fails(capsys):
    code = run(["filter", "--strict-stopband"])
    assert code == 1
    assert "order" in capsys.readouterr().err


def test_filter_feasible_band(capsys):
    run_ok(["filter", "--pass", "6:8", "--stop", "5:9"])
    out = capsys.readouterr().out
    assert "needs prototype order" not in out


def test_analyze_report_rows(session_dir, tmp_path):
    report = tmp_path / "table1.csv"
    run_ok(["analyze", "--manifest", str(session_dir / "manifest.csv"),
            "--report", str(report)])
    lines = report.read_text().strip().split("\n")
    assert lines[0] == "participant,stimulus_hz,role,peak_hz,snr_db,bandwidth_hz,n_trials"
    assert len(lines) == 1 + 2 * 4 * 2  # participants x freqs x roles
    cells = lines[1].split(",")
    assert cells[0] == "p1" and cells[2] in ("occipital", "ear")


def test_correlate_rows(session_dir, tmp_path):
    out = tmp_path / "table2.csv"
    run_ok(["correlate", "--manifest", str(session_dir / "manifest.csv"),
            "--out", str(out)])
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "stimulus_hz,r,p,n"
    assert len(lines) == 5
    for line in lines[1:]:
        f, r, p, n = line.split(",")
        assert float(f) in defaults.STIMULUS_SET_HZ
        assert -1.0 <= float(r) <= 1.0
        assert 0.0 <= float(p) <= 1.0
        assert int(n) == 2 * 1 * 5  # participants x trials x 5 segments of 5 s


def test_spectrogram_csv_and_svg(session_dir, tmp_path):
    out = tmp_path / "grid.csv"
    svg = tmp_path / "grid.svg"
    run_ok(["spectrogram", "--manifest", str(session_dir / "manifest.csv"),
            "--trial", "p1_f9_t1", "--band", "5:40",
            "--out", str(out), "--svg", str(svg)])
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t_s,freq_hz,power"
    t, f, p = lines[1].split(",")
    assert 5.0 <= float(f) <= 40.0
    assert svg.read_text().startswith("<svg")


def test_report_boxplot(session_dir, tmp_path):
    out = tmp_path / "box.csv"
    svg = tmp_path / "box.svg"
    run_ok(["report", "--manifest", str(session_dir / "manifest.csv"),
            "--boxplot", str(out), "--svg", str(svg)])
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "stimulus_hz,role,min,q1,median,q3,max,outliers"
    assert len(lines) == 1 + 4 * 2
    assert svg.exists()


def test_report_scatter(session_dir, tmp_path):
    out = tmp_path / "scatter.csv"
    run_ok(["report", "--manifest", str(session_dir / "manifest.csv"),
            "--scatter", str(out), "--freq", "9"])
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "stimulus_hz,occipital_amp,ear_amp"
    assert len(lines) == 1 + 2 * 1 * 5
    assert all(line.startswith("9,") for line in lines[1:])


def test_report_waveform(session_dir, tmp_path):
    out = tmp_path / "wave.csv"
    run_ok(["report", "--manifest", str(session_dir / "manifest.csv"),
            "--waveform", str(out), "--trial", "p1_f7_t1", "--start", "2.0"])
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t_s,o1,o2,ear"
    assert len(lines) == 1 + 250  # one second at 250 Hz


def test_classify_and_stream_agree(session_dir, capsys):
    args = ["--manifest", str(session_dir / "manifest.csv"),
            "--trial", "p2_f13_t1", "--window", "2", "--hop", "1"]
    run_ok(["classify"] + args)
    offline = capsys.readouterr().out
    run_ok(["stream"] + args)
    streamed = capsys.readouterr().out
    assert offline == streamed
    lines = offline.strip().split("\n")
    assert lines[0] == "t_start,chosen_hz,score_7,score_9,score_11,score_13,margin_db"
    assert len(lines) == 1 + 4  # floor((5 - 2) / 1) + 1 windows
    assert lines[1].split(",")[1] == "13"


def test_stream_abstention_empty_chosen(session_dir, capsys):
    run_ok(["stream", "--manifest", str(session_dir / "manifest.csv"),
            "--trial", "p1_f7_t1", "--margin-db", "1000"])
    out = capsys.readouterr().out
    for line in out.strip().split("\n")[1:]:
        assert line.split(",")[1] == ""


def test_ssvep_seed_env(tmp_path, monkeypatch):
    monkeypatch.setenv(defaults.SEED_ENV_VAR, "123")
    d1 = tmp_path / "a"
    d2 = tmp_path / "b"
    run_ok(["synth", "--trials", "1", "--participants", "1", "--duration", "1",
            "--freqs", "7", "--out", str(d1)])
    run_ok(["synth", "--trials", "1", "--participants", "1", "--duration", "1",
            "--freqs", "7", "--seed", "123", "--out", str(d2)])
    assert (d1 / "p1_f7_t1.csv").read_bytes() == (d2 / "p1_f7_t1.csv").read_bytes()


def test_cli_defaults_golden():
    """Zero-override invocations must carry exactly the canonical parameters."""
    from ssvep.cli import build_parser

    p = build_parser()

    a = p.parse_args(["filter"])
    assert a.order == 4
    assert a.passband == (6.0, 14.0)
    assert a.stopband == (5.0, 15.0)
    assert a.ripple_db == 1.0
    assert a.atten_db == 40.0
    assert a.fs == 250.0

    a = p.parse_args(["synth", "--out", "x"])
    assert a.freqs == (7.0, 9.0, 11.0, 13.0)
    assert a.trials == 5
    assert a.participants == 5
    assert a.duration == 30.0
    assert a.fs == 250.0

    a = p.parse_args(["spectrogram", "--manifest", "m", "--trial", "t", "--out", "o"])
    assert a.band == (5.0, 40.0)
    assert a.window == 1.0
    assert a.overlap == 0.5

    a = p.parse_args(["stream", "--manifest", "m", "--trial", "t"])
    assert a.window == 2.0
    assert a.hop == 1.0
    assert a.margin_db == 1.0
    assert a.channel == "ear"
    assert a.freqs == (7.0, 9.0, 11.0, 13.0)

    assert defaults.SAMPLE_RATE_HZ == 250.0
    assert defaults.SEGMENT_S == 1.0
    assert defaults.TRIAL_DURATION_S == 30.0
    assert defaults.ANALYSIS_BAND_HZ == (6.0, 14.0)


def test_workflow_byte_identical(tmp_path):
    outputs = []
    for name in ("run1", "run2"):
        root = tmp_path / name
        sess = root / "sess"
        run_ok(["synth", "--trials", "1", "--participants", "1", "--duration", "4",
                "--seed", "77", "--out", str(sess)])
        run_ok(["analyze", "--manifest", str(sess / "manifest.csv"),
                "--report", str(root / "t1.csv")])
        run_ok(["correlate", "--manifest", str(sess / "manifest.csv"),
                "--out", str(root / "t2.csv")])
        run_ok(["report", "--manifest", str(sess / "manifest.csv"),
                "--scatter", str(root / "sc.csv"), "--svg", str(root / "sc.svg")])
        blobs = {}
        for p in sorted(root.rglob("*")):
            if p.is_file():
                blobs[str(p.relative_to(root))] = p.read_bytes()
        outputs.append(blobs)
    assert outputs[0].keys() == outputs[1].keys()
    for key in outputs[0]:
        assert outputs[0][key] == outputs[1][key], f"{key} differs between runs"
