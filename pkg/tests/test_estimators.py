import warnings

import numpy as np
import pytest

from stable_wavelet.errors import DataError, DiagnosticsError, ParameterError, ShapeError
from stable_wavelet.estimators import (
    estimate_H_log,
    estimate_H_power,
    ols_weights,
    sigma2_total,
    sigma_jk_plugin,
    sigma_matrix,
)
from stable_wavelet.harness.estimator_mc import synthesize_grids
from stable_wavelet.lfsm_wavelet import LfsmSpec, WaveletCoefGrid, build_wavelet

from conftest import BASE_SEED


def _loglinear_grid(H, c=0.3, octaves=range(1, 6), n=16, meta=None):
    """|d_{j,k}| = 2^{(H+1/2) j + c} with alternating signs."""
    coeffs = {}
    for j in octaves:
        mag = 2.0 ** ((H + 0.5) * j + c)
        coeffs[j] = mag * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return WaveletCoefGrid(coeffs, dict(meta or {}))


# weights

def test_ols_weight_examples():
    np.testing.assert_allclose(ols_weights([1, 2, 3]).w, [-0.5, 0.0, 0.5], atol=1e-15)
    np.testing.assert_allclose(ols_weights(range(1, 6)).w, [-0.2, -0.1, 0.0, 0.1, 0.2], atol=1e-15)
    w = ols_weights(range(1, 6))
    assert np.dot(np.arange(1, 6), w.w) == pytest.approx(1.0, abs=1e-15)


def test_weighted_weights_keep_identities():
    w = ols_weights([2, 3, 4, 5], variance_hints=[0.1, 0.4, 2.0, 7.0])
    assert abs(w.w.sum()) < 1e-12
    assert abs(np.dot([2, 3, 4, 5], w.w) - 1.0) < 1e-12


def test_single_octave_rejected():
    with pytest.raises(ParameterError):
        ols_weights([3])


# point estimates

def test_log_estimator_exact_on_loglinear_grid():
    w = ols_weights(range(1, 6))
    assert estimate_H_log(_loglinear_grid(0.7), w).H_hat == pytest.approx(0.7, abs=1e-12)
    w2 = ols_weights([1, 3, 5], variance_hints=[1.0, 2.0, 5.0])
    assert estimate_H_log(_loglinear_grid(0.3), w2).H_hat == pytest.approx(0.3, abs=1e-12)


def test_power_estimator_exact_on_loglinear_grid():
    g = _loglinear_grid(0.7, meta={"alpha": 1.6})
    w = ols_weights(range(1, 6))
    for beta in (-0.5, 0.4, 0.79):
        assert estimate_H_power(g, w, beta).H_hat == pytest.approx(0.7, abs=1e-12)


def test_scale_invariance():
    rng = np.random.default_rng(BASE_SEED)
    g = WaveletCoefGrid({j: rng.standard_cauchy(64) for j in range(1, 5)}, {"alpha": 1.6})
    w = ols_weights(range(1, 5))
    h = estimate_H_log(g, w).H_hat
    hp = estimate_H_power(g, w, 0.4).H_hat
    scaled = WaveletCoefGrid({j: 7.3 * v for j, v in g.coeffs.items()}, g.meta)
    assert estimate_H_log(scaled, w).H_hat == pytest.approx(h, abs=1e-12)
    assert estimate_H_power(scaled, w, 0.4).H_hat == pytest.approx(hp, abs=1e-12)
    tilted = WaveletCoefGrid({j: 2.0 ** (0.25 * j) * v for j, v in g.coeffs.items()}, g.meta)
    assert estimate_H_log(tilted, w).H_hat == pytest.approx(h + 0.25, abs=1e-12)


def test_log_and_power_coincide_on_constant_magnitudes():
    rng = np.random.default_rng(BASE_SEED)
    g = WaveletCoefGrid({j: rng.uniform(0.5, 3.0) * rng.choice([-1.0, 1.0], 32) for j in range(1, 6)},
                        {"alpha": 1.6})
    w = ols_weights(range(1, 6))
    assert estimate_H_power(g, w, 0.4).H_hat == pytest.approx(estimate_H_log(g, w).H_hat, abs=1e-12)


def test_estimator_errors():
    w = ols_weights(range(1, 6))
    g = _loglinear_grid(0.7, meta={"alpha": 1.6})
    g.coeffs[2] = g.coeffs[2].copy()
    g.coeffs[2][3] = 0.0
    with pytest.raises(DataError):
        estimate_H_log(g, w)
    with pytest.raises(ShapeError):
        estimate_H_log(_loglinear_grid(0.7, octaves=range(1, 4)), w)
    with pytest.raises(ParameterError):
        estimate_H_power(_loglinear_grid(0.7, meta={"alpha": 1.6}), w, 0.9)
    with pytest.raises(ParameterError):
        estimate_H_power(_loglinear_grid(0.7), w, 0.4)


def test_condition_warning_recorded():
    w = ols_weights(range(1, 6))
    bad = _loglinear_grid(0.7, meta={"alpha": 1.5, "H": 0.7, "Q": 2})
    assert estimate_H_log(bad, w).warnings
    good = _loglinear_grid(0.7, meta={"alpha": 1.6, "H": 0.7, "Q": 2})
    assert estimate_H_log(good, w).warnings == []
    assert "warnings" in estimate_H_log(good, w).to_dict()


@pytest.mark.slow
def test_power_estimator_monte_carlo_mean():
    draws, _ = synthesize_grids(LfsmSpec(1.6, 0.7), build_wavelet("daubechies", 2), range(1, 6),
                                2 ** 14, 200, BASE_SEED)
    w = ols_weights(range(1, 6))
    h = np.array([estimate_H_power(g, w, 0.4).H_hat for _, g in draws])
    assert abs(h.mean() - 0.7) <= 0.03


# plug-in variance

def test_sigma_symmetric_and_iid_case():
    haar = build_wavelet("haar", 1)
    draws, _ = synthesize_grids(LfsmSpec(1.5, 1.0 / 1.5), haar, (1, 2), 2 ** 12, 30, BASE_SEED)
    grids = [g for _, g in draws]
    assert sigma_jk_plugin(grids, 1, 2, 8) == sigma_jk_plugin(grids, 2, 1, 8)
    val, diag = sigma_jk_plugin(grids, 1, 1, 8, return_diagnostics=True)
    var = np.var(np.concatenate([np.log2(np.abs(g[1])) for g in grids]))
    assert val == pytest.approx(var, rel=0.1)
    cov = np.asarray(diag["covariances"])
    off = cov[np.asarray(diag["lags"]) != 0]
    assert np.all(np.abs(off) < 0.05 * var)
    assert diag["route"] == "across-replicate"


def test_sigma_single_path_is_flagged():
    g = _loglinear_grid(0.7, n=64)
    g.coeffs = {j: v * np.linspace(1, 2, v.size) for j, v in g.coeffs.items()}
    _, diag = sigma_jk_plugin(g, 1, 1, 4, return_diagnostics=True)
    assert diag["route"].startswith("within-path")


def test_sigma_insufficient_lags():
    g = _loglinear_grid(0.7, n=4)
    with pytest.raises(DiagnosticsError):
        sigma_jk_plugin(g, 1, 1, 0)


@pytest.mark.slow
def test_sigma_truncation_stability():
    draws, _ = synthesize_grids(LfsmSpec(1.6, 0.7), build_wavelet("daubechies", 2), (1,), 2 ** 12,
                                500, BASE_SEED)
    grids = [g for _, g in draws]
    s8 = sigma_jk_plugin(grids, 1, 1, 8)
    s16 = sigma_jk_plugin(grids, 1, 1, 16)
    assert abs(s16 - s8) <= 0.1 * abs(s16)


def test_sigma2_total_arithmetic():
    w = ols_weights([1, 2])
    S = np.diag([0.5, 2.0])
    expected = (w.w[0] ** 2) * 2.0 * 0.5 + (w.w[1] ** 2) * 4.0 * 2.0
    assert sigma2_total(S, w) == pytest.approx(expected, rel=1e-14)
    assert sigma2_total(np.zeros((2, 2)), w) == 0.0


def test_sigma2_total_relabel_invariance():
    rng = np.random.default_rng(BASE_SEED)
    A = rng.standard_normal((4, 4))
    S = A @ A.T
    w1 = ols_weights([1, 2, 3, 4])
    w3 = ols_weights([3, 4, 5, 6])
    # the 2^{j/2} factors shift by 2^{c/2} each, so relabel S by 2^{-c}
    assert sigma2_total(S * 2.0 ** -2, w3) == pytest.approx(sigma2_total(S, w1), rel=1e-12)


def test_sigma2_total_negative_warns_and_shape():
    w = ols_weights([1, 2])
    with pytest.warns(RuntimeWarning):
        sigma2_total(np.array([[0.0, 5.0], [5.0, 0.0]]), w)
    with pytest.raises(ShapeError):
        sigma2_total(np.eye(3), w)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sigma2_total(np.eye(2), w)


def test_sigma_matrix_symmetric():
    draws, _ = synthesize_grids(LfsmSpec(1.6, 0.7), build_wavelet("daubechies", 2), (1, 2, 3),
                                2 ** 11, 20, BASE_SEED)
    S, diags = sigma_matrix([g for _, g in draws], (1, 2, 3), 8)
    np.testing.assert_array_equal(S, S.T)
    assert set(diags) == {(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)}
