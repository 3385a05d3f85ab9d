import numpy as np
import pytest

from stable_wavelet.depmeas import m1, m2
from stable_wavelet.errors import ConfigurationError, DiagnosticsError, ParameterError
from stable_wavelet.harness.estimator_mc import synthesize_grids
from stable_wavelet.lfsm_wavelet import (
    LfsmSpec,
    LfsmSynthesizer,
    SynthesisConfig,
    WaveletCoefGrid,
    build_wavelet,
    clt_condition,
    coef_count,
    get_kernel,
    h_decay_fit,
    h_kernel,
    read_grid_csv,
    read_path_csv,
    scale_kernel_pair,
    synth_lfsm_path,
    wavelet_coeffs_direct,
    wavelet_coeffs_pyramidal,
    write_grid_csv,
    write_path_csv,
)
from stable_wavelet.stable_core import RngStream

from conftest import BASE_SEED

HAAR = build_wavelet("haar", 1)
DB2 = build_wavelet("daubechies", 2)


# wavelets

def test_haar_moments():
    mom = HAAR.moments(1)
    assert mom[0] == 0.0
    assert mom[1] == pytest.approx(-0.25, abs=1e-15)
    assert HAAR.check_moments()["ok"]


def test_haar_moments_unchanged_under_refinement():
    np.testing.assert_allclose(build_wavelet("haar", 1, r=14).moments(3), HAAR.moments(3), atol=1e-14)


@pytest.mark.parametrize("Q", [2, 3, 4])
def test_daubechies_vanishing_moments(Q):
    w = build_wavelet("daubechies", Q)
    mom = w.moments(Q)
    assert np.all(np.abs(mom[:Q]) < 1e-12)
    assert abs(mom[Q]) > 1e-3
    assert w.support == 2 * Q - 1


def test_db2_moments_frozen():
    assert DB2.moments(2)[2] == pytest.approx(-0.21650635094610965, rel=1e-9)


@pytest.mark.parametrize("family,Q", [("coiflet", 2), ("daubechies", 0), ("daubechies", 99)])
def test_unsupported_wavelet(family, Q):
    with pytest.raises(ParameterError):
        build_wavelet(family, Q)


# the kernel h

def test_kappa_and_spec_validation():
    assert LfsmSpec(1.5, 0.7).kappa == pytest.approx(1.0 / 30.0, rel=1e-14)
    with pytest.raises(ParameterError, match=r"\(0, 1\)"):
        LfsmSpec(1.6, 1.2)
    with pytest.raises(ParameterError):
        LfsmSpec(1.0, 0.5)


def test_clt_condition_examples():
    ok = clt_condition(1.6, 0.7, 2)
    assert ok["satisfied"] and ok["rhs"] == pytest.approx(1.0 / (1.6 * 0.6))
    bad = clt_condition(1.5, 0.7, 2)
    assert not bad["satisfied"] and bad["rhs"] == pytest.approx(4.0 / 3.0)


def test_haar_h_at_kappa_zero_vanishes_for_positive_u():
    spec = LfsmSpec(1.5, 1.0 / 1.5)
    u = np.linspace(0.0, 50.0, 101)
    np.testing.assert_allclose(h_kernel(spec, HAAR, u), 0.0, atol=1e-14)


def test_haar_h_closed_form_value():
    spec = LfsmSpec(1.5, 0.2 + 1.0 / 1.5)
    val = (2.0 * 0.5 ** 1.2 - 1.0) / 1.2
    assert h_kernel(spec, HAAR, 0.0) == pytest.approx(val, rel=1e-12)
    assert h_kernel(spec, HAAR, 0.0) == pytest.approx(-0.10787453058656331, rel=1e-12)


@pytest.mark.parametrize("w", [HAAR, DB2])
def test_h_vanishes_left_of_support(w):
    spec = LfsmSpec(1.6, 0.7)
    u = np.array([-w.support - 0.5, -w.support - 3.0, -100.0])
    np.testing.assert_array_equal(h_kernel(spec, w, u), 0.0)


def test_h_quadrature_matches_haar_closed_form():
    hk = get_kernel(LfsmSpec(1.5, 0.7), HAAR)
    u = np.linspace(-2.0, 100.0, 409)
    exact = hk(u, "closed_form")
    quad = hk(u, "quadrature")
    scale = np.maximum(np.abs(exact), 1e-300)
    assert np.max(np.abs(quad - exact) / scale) <= 1e-8


@pytest.mark.parametrize("w,expected", [(HAAR, -0.9587318292274045), (DB2, -1.9285179046561622)])
def test_h_decay_fit(w, expected):
    fit = h_decay_fit(LfsmSpec(1.5, 0.7), w)
    assert abs(fit["slope"] - fit["expected"]) <= 0.1
    assert fit["slope"] == pytest.approx(expected, rel=1e-6)


def test_h_decay_fit_degenerate_branch():
    with pytest.raises(DiagnosticsError):
        h_decay_fit(LfsmSpec(1.5, 1.0 / 1.5), HAAR)


# synthesis

def test_path_starts_at_zero_and_is_deterministic():
    cfg = SynthesisConfig(N=256, seed=BASE_SEED)
    x = synth_lfsm_path(LfsmSpec(1.6, 0.7), cfg)
    assert x.size == 257 and x[0] == 0.0
    np.testing.assert_array_equal(x, synth_lfsm_path(LfsmSpec(1.6, 0.7), cfg))


def test_kappa_zero_gives_independent_increments():
    x = synth_lfsm_path(LfsmSpec(1.5, 1.0 / 1.5), SynthesisConfig(N=2 ** 14, seed=BASE_SEED))
    s = np.sign(np.diff(x))
    assert abs(np.mean(s[1:] * s[:-1])) < 5 / np.sqrt(s.size)


def test_self_similarity_of_path():
    synth = LfsmSynthesizer(LfsmSpec(1.5, 0.7), SynthesisConfig(N=2 ** 10), None, path=True,
                            coeffs=False)
    ends = np.array([synth.draw(RngStream(BASE_SEED, i))[0][[512, 1024]] for i in range(200)])
    ratio = np.median(np.abs(ends[:, 1])) / np.median(np.abs(ends[:, 0]))
    assert abs(ratio / 2 ** 0.7 - 1.0) < 0.10


def test_tail_tolerance_unmet_is_configuration_error():
    cfg = SynthesisConfig(N=64, tail_tol=1e-12, max_far_cells=10)
    with pytest.raises(ConfigurationError):
        LfsmSynthesizer(LfsmSpec(1.2, 0.2), cfg, None, path=True, coeffs=False)


def test_synthesis_config_validation():
    with pytest.raises(ConfigurationError):
        SynthesisConfig(N=64, delta=0.3)
    with pytest.raises(ConfigurationError):
        SynthesisConfig(N=64, j_max=5, delta=0.5)


def test_direct_counts_nonincreasing():
    g = wavelet_coeffs_direct(LfsmSpec(1.6, 0.7), DB2, SynthesisConfig(N=2 ** 10, seed=BASE_SEED))
    counts = [g.counts[j] for j in g.octaves]
    assert counts == [coef_count(2 ** 10, j, DB2.support) for j in g.octaves]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_within_octave_stationarity():
    g = wavelet_coeffs_direct(LfsmSpec(1.6, 0.7), DB2, SynthesisConfig(N=2 ** 14, seed=BASE_SEED))
    for j in (1, 2, 3):
        y = np.log2(np.abs(g[j]))
        h = y.size // 2
        se = np.sqrt(y[:h].var() / h + y[h:].var() / (y.size - h))
        # neighbouring coefficients are correlated, hence the wide band
        assert abs(y[:h].mean() - y[h:].mean()) < 6 * se


def test_haar_kappa_zero_coefficients_uncorrelated():
    draws, _ = synthesize_grids(LfsmSpec(1.5, 1.0 / 1.5), HAAR, (2,), 2 ** 12, 20, BASE_SEED)
    y = np.concatenate([np.log2(np.abs(g[2])) for _, g in draws]).reshape(20, -1)
    y = y - y.mean()
    lag2 = np.mean(y[:, 2:] * y[:, :-2])
    assert abs(lag2) < 5 * y.var() / np.sqrt(y.size)


# pyramidal transform

@pytest.mark.parametrize("w", [HAAR, DB2])
def test_pyramidal_kills_constants(w):
    g = wavelet_coeffs_pyramidal(np.full(1025, 3.7), w, 4)
    for j in g.octaves:
        np.testing.assert_allclose(g[j], 0.0, atol=1e-12)


def test_pyramidal_kills_ramps_for_two_moments():
    g = wavelet_coeffs_pyramidal(np.arange(1025.0) * 0.37 - 5.0, DB2, 4)
    for j in g.octaves:
        np.testing.assert_allclose(g[j], 0.0, atol=1e-9)


def test_pyramidal_too_short():
    with pytest.raises(ConfigurationError):
        wavelet_coeffs_pyramidal(np.zeros(33), DB2, 5)


# scale kernel pairs

def test_scale_pair_diagonal():
    spec = LfsmSpec(1.6, 0.7)
    p = scale_kernel_pair(spec, DB2, 1, 1, 0)
    np.testing.assert_array_equal(p.f.values, p.g.values)
    assert m2(p) == pytest.approx(p.norm_f_pow, rel=1e-14)


def test_scale_pair_haar_disjoint():
    p = scale_kernel_pair(LfsmSpec(1.5, 1.0 / 1.5), HAAR, 2, 2, 3)
    # the kernels cancel to rounding level outside their supports
    assert m2(p) <= 1e-10 * np.sqrt(p.norm_f_pow * p.norm_g_pow)


def test_scale_pair_refinement_stable():
    spec = LfsmSpec(1.6, 0.7)
    a = scale_kernel_pair(spec, DB2, 1, 2, 0, delta=1 / 16)
    b = scale_kernel_pair(spec, DB2, 1, 2, 0, delta=1 / 32, horizon=2 * 64 * 4 * 3)
    for fn in (m1, m2):
        assert fn(b) == pytest.approx(fn(a), rel=1e-3)


# io

def test_path_csv_roundtrip(tmp_path):
    x = np.array([0.0, 1.0 / 3.0, -2.5e-300, 1e300, np.pi])
    p = write_path_csv(tmp_path / "p.csv", x, {"seed": 1})
    np.testing.assert_array_equal(read_path_csv(p), x)
    assert (tmp_path / "p.json").is_file()


def test_grid_csv_roundtrip(tmp_path):
    g = WaveletCoefGrid({1: np.array([0.1, -0.2, 1 / 7]), 2: np.array([2.0])}, {"alpha": 1.6, "H": 0.7})
    p = write_grid_csv(tmp_path / "g.csv", g)
    back = read_grid_csv(p)
    assert back.octaves == [1, 2]
    np.testing.assert_array_equal(back[1], g[1])
    assert back.meta["N_j"] == {"1": 3, "2": 1}
