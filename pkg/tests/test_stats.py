import numpy as np
import pytest
from numpy.testing import assert_allclose

from ssvep import synth
from ssvep.errors import ConstantSeries, LengthMismatch
from ssvep.io import load_manifest
from ssvep.stats import (
    amplitude_dataset,
    box_stats,
    normalize_unit_interval,
    pearson_r,
    permutation_p,
)

# Documented 12-point fixture: moderate positive correlation, p well away
# from 0 and 1 so the t-based and permutation p-values can be compared
# meaningfully.
FIX_X = np.array([-1.103338, -0.725025, -0.781805, 0.266976, -0.248581, 0.126483,
                  0.843043, 0.857937, 0.475184, -0.450769, -0.754932, -0.814814])
FIX_Y = np.array([-0.959154, -0.490619, -1.262538, -0.742065, 0.090444, -1.402929,
                  0.381044, 0.872581, -0.493671, -1.16984, -1.076559, 0.013235])


# --- normalize_unit_interval -------------------------------------------------

def test_normalize_basic():
    assert_allclose(normalize_unit_interval([2.0, 4.0, 6.0]), [0.0, 0.5, 1.0])


def test_normalize_idempotent_on_unit_series():
    x = np.array([0.0, 0.25, 0.7, 1.0])
    assert_allclose(normalize_unit_interval(x), x)


def test_normalize_constant_series():
    with pytest.raises(ConstantSeries):
        normalize_unit_interval([5.0, 5.0, 5.0])


def test_normalize_attains_endpoints(rng):
    for _ in range(10):
        x = rng.standard_normal(50) * rng.uniform(0.1, 100)
        out = normalize_unit_interval(x)
        assert out.min() == 0.0
        assert out.max() == 1.0
        assert np.all((out >= 0.0) & (out <= 1.0))


# --- pearson_r ----------------------------------------------------------------

def test_pearson_perfect_correlation(rng):
    x = rng.standard_normal(30)
    res = pearson_r(x, x)
    assert res.r == pytest.approx(1.0, abs=1e-12)
    assert res.p_two_sided == 0.0

    res = pearson_r(x, -x)
    assert res.r == pytest.approx(-1.0, abs=1e-12)


def test_pearson_errors(rng):
    with pytest.raises(LengthMismatch):
        pearson_r([1.0, 2.0, 3.0], [1.0, 2.0])
    with pytest.raises(ConstantSeries):
        pearson_r([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        pearson_r([1.0, 2.0], [1.0, 2.0])


def test_pearson_fixture_against_permutation_oracle():
    res = pearson_r(FIX_X, FIX_Y)
    assert res.r == pytest.approx(0.545842149518, abs=1e-9)
    assert res.n == 12
    p_oracle = permutation_p(FIX_X, FIX_Y, iters=100_000, seed=99)
    assert abs(res.p_two_sided - p_oracle) < 0.01


def test_pearson_affine_invariance(rng):
    x = rng.standard_normal(40)
    y = rng.standard_normal(40)
    base = pearson_r(x, y).r
    for a, b in ((2.0, 3.0), (1e-4, -7.0), (123.0, 0.0)):
        assert pearson_r(a * x + b, y).r == pytest.approx(base, abs=1e-12)
        assert pearson_r(x, a * y + b).r == pytest.approx(base, abs=1e-12)


def test_pearson_p_matches_scipy(rng):
    from scipy import stats as sps

    for _ in range(10):
        n = int(rng.integers(5, 200))
        x = rng.standard_normal(n)
        y = 0.3 * x + rng.standard_normal(n)
        res = pearson_r(x, y)
        ref = sps.pearsonr(x, y)
        assert res.r == pytest.approx(ref.statistic, abs=1e-12)
        assert res.p_two_sided == pytest.approx(ref.pvalue, rel=1e-9, abs=1e-12)


# --- permutation_p --------------------------------------------------------------

def test_permutation_identical_series_tiny_p(rng):
    x = rng.standard_normal(20)
    p = permutation_p(x, x, iters=10_000, seed=5)
    assert p <= 0.001


def test_permutation_iters_precondition(rng):
    x = rng.standard_normal(10)
    with pytest.raises(ValueError):
        permutation_p(x, x, iters=10, seed=1)


def test_permutation_deterministic(rng):
    x = rng.standard_normal(25)
    y = rng.standard_normal(25)
    assert permutation_p(x, y, 2000, seed=3) == permutation_p(x, y, 2000, seed=3)


def test_permutation_p_uniform_under_null():
    # 200 independent-noise draws: p-values should look uniform
    ps = []
    for seed in range(200):
        r = np.random.default_rng(10_000 + seed)
        x = r.standard_normal(100)
        y = r.standard_normal(100)
        ps.append(permutation_p(x, y, iters=2000, seed=seed))
    ps = np.sort(ps)
    # Kolmogorov-Smirnov distance against U(0,1), alpha = 0.01
    grid = (np.arange(200) + 1) / 200.0
    ks = max(np.max(np.abs(ps - grid)), np.max(np.abs(ps - (grid - 1 / 200.0))))
    assert ks < 1.63 / np.sqrt(200)


def test_p_agreement_t_vs_permutation(rng):
    # smaller sibling of the acceptance criterion: 10 fixtures, n = 50
    for _ in range(10):
        x = rng.standard_normal(50)
        y = rng.uniform(-0.5, 0.5) * x + rng.standard_normal(50)
        p_t = pearson_r(x, y).p_two_sided
        p_perm = permutation_p(x, y, iters=20_000, seed=int(rng.integers(1 << 30)))
        assert abs(p_t - p_perm) < 0.02


# --- box_stats -------------------------------------------------------------------

def test_box_basic():
    b = box_stats([1.0, 2.0, 3.0, 4.0, 5.0])
    assert (b.q1, b.median, b.q3) == (2.0, 3.0, 4.0)
    assert (b.min, b.max) == (1.0, 5.0)
    assert b.outliers == ()


def test_box_single_value():
    b = box_stats([7.5])
    assert b.min == b.q1 == b.median == b.q3 == b.max == 7.5


def test_box_outlier_by_iqr_rule():
    # by hand: q1=2, q3=4, iqr=2, fences at -1 and 7 -> 100 is out
    b = box_stats([1.0, 2.0, 3.0, 4.0, 100.0])
    assert b.outliers == (100.0,)
    assert b.max == 100.0


def test_box_permutation_invariant(rng):
    v = rng.standard_normal(101)
    b1 = box_stats(v)
    b2 = box_stats(rng.permutation(v))
    assert b1 == b2


def test_box_ordering_invariant(rng):
    for _ in range(20):
        b = box_stats(rng.standard_normal(int(rng.integers(1, 60))))
        assert b.min <= b.q1 <= b.median <= b.q3 <= b.max


# --- amplitude_dataset ---------------------------------------------------------

def test_amplitude_dataset_counts_small(tmp_path):
    manifest = synth.generate_session(
        stimulus_set=(7.0, 9.0), trials_per_freq=1, participants=1,
        base_cfg=synth.SynthConfig(duration_s=5.0), seed=3, out_dir=tmp_path,
    )
    session = load_manifest(manifest)
    data = amplitude_dataset(session)
    assert set(data) == {7.0, 9.0}
    occ, ear = data[7.0]
    assert occ.shape == (5,)  # 5 one-second segments
    assert ear.shape == (5,)
    # normalized per participant/role: values within [0, 1]
    for f in data:
        for arr in data[f]:
            assert np.all((arr >= 0.0) & (arr <= 1.0))


def test_amplitude_dataset_empty_session():
    from ssvep.io import SessionManifest

    empty = SessionManifest(stimulus_set=(), trials=())
    assert amplitude_dataset(empty) == {}


def test_amplitude_dataset_pairs_correlate(small_session):
    data = amplitude_dataset(small_session)
    # 2 participants x 2 trials x 10 one-second segments per frequency
    for f_hz, (occ, ear) in data.items():
        assert occ.shape == ear.shape == (40,)
        assert pearson_r(occ, ear).r > 0.0
