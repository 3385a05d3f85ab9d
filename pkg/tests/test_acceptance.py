"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import time

import numpy as np
import pytest
from scipy import stats

from stable_wavelet.depmeas import MovingAverageSpec, estimate_eps1, estimate_eps2, ma_kernel_pair
from stable_wavelet.harness import (
    ad_normality,
    bounds_preset,
    clt_preset,
    run_clt_mc,
    run_estimator_mc,
    synthesize_grids,
    verify_cov_bound_b,
    verify_lemma53,
)
from stable_wavelet.harness.selfcheck import check_derivatives, check_invariance, check_lemma31
from stable_wavelet.lfsm_wavelet import (
    LfsmSpec,
    build_wavelet,
    h_decay_fit,
    wavelet_coeffs_pyramidal,
)

from conftest import BASE_SEED


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    return emit


def _all_pass(verdicts):
    return all(v.passed for v in verdicts)


def test_criterion_01_lemma53_inequalities(report):
    t0 = time.perf_counter()
    rep = verify_lemma53(10 ** 6, alphas=(1.1, 1.5, 1.9), seed=BASE_SEED)
    dt = time.perf_counter() - t0
    bad = sum(int(v.value) for v in rep.verdicts)
    ok = rep.passed and len(rep.verdicts) == 9 and dt < 30
    report(1, ok, f"violations={bad} checks={len(rep.verdicts)} runtime={dt:.1f}s")
    assert ok


def test_criterion_02_lemma31_bounds(report):
    t0 = time.perf_counter()
    vs = check_lemma31(BASE_SEED, n_pairs=20, n_atoms=4, n_grid=100)
    dt = time.perf_counter() - t0
    ok = _all_pass(vs) and dt < 60
    worst = ", ".join(f"{v.name}={v.value:.4f}" for v in vs)
    report(2, ok, f"{worst} runtime={dt:.1f}s")
    assert ok


def test_criterion_03_derivative_formulas(report):
    vs = check_derivatives(BASE_SEED, n_points=100, rtol=1e-5)
    ok = _all_pass(vs)
    report(3, ok, ", ".join(f"{v.name} rel.err={v.value:.2e}" for v in vs))
    assert ok


def test_criterion_04_representation_invariance(report):
    vs = check_invariance(BASE_SEED, n_transforms=50, rtol=1e-10)
    ok = _all_pass(vs)
    report(4, ok, f"max rel. change={vs[0].value:.2e}")
    assert ok


def test_criterion_05_nondegeneracy_over_lags(report):
    lags = range(8, 65)
    coarse = MovingAverageSpec("power", {"p": 2.5}, 1.5, delta=1 / 64)
    fine = MovingAverageSpec("power", {"p": 2.5}, 1.5, delta=1 / 128)
    e_c = np.array([(estimate_eps1(ma_kernel_pair(coarse, n)), estimate_eps2(ma_kernel_pair(coarse, n)))
                    for n in lags])
    check = (8, 16, 32, 64)
    e_f = np.array([(estimate_eps1(ma_kernel_pair(fine, n)), estimate_eps2(ma_kernel_pair(fine, n)))
                    for n in check])
    e_cc = e_c[[n - 8 for n in check]]
    change = float(np.max(np.abs(e_f - e_cc) / e_cc))
    ok = e_c.min() >= 0.05 and change < 0.05
    report(5, ok, f"min eps1={e_c[:, 0].min():.4f} min eps2={e_c[:, 1].min():.4f} "
                  f"refinement change={change:.2%}")
    assert ok


@pytest.mark.slow
def test_criterion_06_truncation_scaling(report):
    kw = bounds_preset("thm22-default")
    t0 = time.perf_counter()
    rep = verify_cov_bound_b(seed=BASE_SEED, **kw)
    dt = time.perf_counter() - t0
    v = rep.verdict("slope")
    ok = v.passed and dt < 120
    report(6, ok, f"slope={v.value:.4f} SE={v.detail.get('slope_se', float('nan')):.4f} "
                  f"slope-2SE={v.detail.get('slope_minus_2se', float('nan')):.4f} "
                  f"target<= {v.target + v.tolerance:.2f} runtime={dt:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_07_moving_average_clt(report):
    cfg = clt_preset("power-log", seed=BASE_SEED)
    t0 = time.perf_counter()
    rep = run_clt_mc(cfg)
    dt = time.perf_counter() - t0
    ok = rep.passed and not rep.hypothesis_unmet and dt < 600
    report(7, ok, "; ".join(f"{v.name}={v.value:.4g}" for v in rep.verdicts) + f" runtime={dt:.0f}s")
    assert ok


@pytest.mark.slow
def test_criterion_08_scaling_relation(report):
    draws, _ = synthesize_grids(LfsmSpec(1.6, 0.7), build_wavelet("daubechies", 2), range(1, 6),
                                2 ** 14, 100, BASE_SEED)
    js = np.arange(1, 6)
    means = [np.mean([np.mean(np.log2(np.abs(g[j]))) for _, g in draws]) for j in js]
    slope = float(np.polyfit(js, means, 1)[0])
    ok = abs(slope - 1.2) <= 0.05
    report(8, ok, f"slope={slope:.4f} target=1.2+-0.05")
    assert ok


@pytest.mark.slow
def test_criterion_09_estimator_clt(report):
    t0 = time.perf_counter()
    rep = run_estimator_mc(LfsmSpec(1.6, 0.7), build_wavelet("daubechies", 2), range(1, 6),
                           N_values=(2 ** 12, 2 ** 13, 2 ** 14, 2 ** 15), R=200, seed=BASE_SEED)
    dt = time.perf_counter() - t0
    ok = rep.passed and dt < 900
    report(9, ok, "; ".join(f"{v.name}={v.value:.4g}" for v in rep.verdicts) + f" runtime={dt:.0f}s")
    assert ok


@pytest.mark.slow
def test_criterion_10_direct_vs_pyramidal(report):
    w = build_wavelet("daubechies", 2)
    lfsm = LfsmSpec(1.6, 0.7)
    direct, _ = synthesize_grids(lfsm, w, range(1, 6), 2 ** 14, 20, BASE_SEED)
    # independent realisations: the comparison is distributional
    paths, _ = synthesize_grids(lfsm, w, range(1, 6), 2 ** 14, 20, BASE_SEED + 1, path=True)
    pyr = [wavelet_coeffs_pyramidal(x, w, 5) for x, _ in paths]
    worst = 0.0
    for j in (3, 4, 5):
        qd = np.percentile(np.log2(np.abs(np.concatenate([g[j] for _, g in direct]))), [25, 50, 75])
        qp = np.percentile(np.log2(np.abs(np.concatenate([g[j] for g in pyr]))), [25, 50, 75])
        worst = max(worst, float(np.max(np.abs(qd - qp))))
    ok = worst <= 0.1
    report(10, ok, f"max quartile gap (j>=3)={worst:.4f}")
    assert ok


def test_criterion_11_kernel_decay(report):
    lfsm = LfsmSpec(1.5, 0.7)
    fits = {name: h_decay_fit(lfsm, build_wavelet(*fam), (10.0, 1e3))
            for name, fam in (("haar", ("haar", 1)), ("db2", ("daubechies", 2)))}
    ok = all(abs(f["slope"] - f["expected"]) <= 0.1 for f in fits.values())
    report(11, ok, ", ".join(f"{k} slope={f['slope']:.4f} (kappa-Q={f['expected']:.4f})"
                             for k, f in fits.items()))
    assert ok


@pytest.mark.slow
def test_criterion_12_harness_self_calibration(report):
    rep = run_clt_mc(clt_preset("iid-bounded", seed=BASE_SEED))
    norm = rep.verdict("normality")
    ps = np.array([ad_normality(np.random.default_rng(BASE_SEED + s).standard_normal(200))[1]
                   for s in range(500)])
    ks = float(stats.kstest(ps, "uniform").statistic)
    ok = norm.passed and ks < 0.05
    report(12, ok, f"iid AD p={norm.value:.4f}; KS(p-values, U(0,1))={ks:.4f}")
    assert ok
