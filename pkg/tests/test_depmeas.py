import numpy as np
import pytest

from stable_wavelet.depmeas import (
    BOUNDS,
    KernelPair,
    MovingAverageSpec,
    check_summability,
    codifference,
    dependence_report,
    du_measure,
    dudv_measure,
    estimate_eps1,
    estimate_eps2,
    i_measure,
    lemma31_ratio,
    m1,
    m1_star,
    m2,
    ma_kernel_pair,
    representation_transform,
    u_measure,
)
from stable_wavelet.errors import DomainError, ParameterError, ShapeError, SingularityError
from stable_wavelet.harness.selfcheck import random_pair

from conftest import BASE_SEED

P = KernelPair.from_arrays
DISJOINT = P([1.0, 0.0], [0.0, 1.0], 1.5)
CROSS = P([1.0, 1.0], [1.0, -1.0], 1.5)


def _grid(n=100, lim=5.0):
    ax = np.linspace(-lim, lim, n)
    uu, vv = np.meshgrid(ax, ax)
    return np.column_stack([uu.ravel(), vv.ravel()])


# first and second order measures

def test_m1_star_examples():
    assert m1_star(CROSS) == pytest.approx(2.0, rel=1e-14)
    assert m1_star(DISJOINT) == 0.0
    assert m1_star(P([1.0], [1.0], 1.5)) == pytest.approx(1.0, rel=1e-14)


def test_m1_star_needs_alpha_above_one():
    with pytest.raises(DomainError):
        m1_star(P([1.0], [1.0], 0.8))


def test_m1_m2_examples():
    assert m1(CROSS) == pytest.approx(4.0, rel=1e-14)
    assert m2(CROSS) == pytest.approx(2.0, rel=1e-14)
    assert m1(DISJOINT) == 0.0 and m2(DISJOINT) == 0.0
    f = P([0.3, -1.2, 2.0], [0.3, -1.2, 2.0], 1.5, [1.0, 0.5, 0.1])
    assert m2(f) == pytest.approx(f.norm_f_pow, rel=1e-14)


def test_u_measure_examples():
    assert u_measure(DISJOINT, 0.7, -2.3) == 0.0
    assert u_measure(CROSS, 0.0, 0.0) == 0.0
    # direct high-precision evaluation: exp(-2^1.5) - exp(-2)
    assert u_measure(P([1.0], [1.0], 1.5), 1.0, 1.0) == pytest.approx(-0.07622953667465648, rel=1e-12)


def test_i_measure_examples():
    assert i_measure(DISJOINT, 1.3, -0.4) == 0.0
    assert codifference(DISJOINT) == 0.0
    f = P([0.5, 2.0], [0.5, 2.0], 1.5)
    assert i_measure(f, 1.0, -1.0) == pytest.approx(-2.0 * f.norm_f_pow, rel=1e-14)
    assert codifference(f) == pytest.approx(2.0 * f.norm_f_pow, rel=1e-14)
    assert i_measure(CROSS, 1.0, 1.0) == pytest.approx(2.0 ** 1.5 - 4.0, rel=1e-14)


def test_shape_error_on_mismatched_atoms():
    with pytest.raises(ShapeError):
        P([1.0, 2.0], [1.0], 1.5)


# derivatives

def test_du_measure_examples():
    assert du_measure(DISJOINT, 0.3, 0.9) == 0.0
    assert du_measure(CROSS, 0.0, 0.0) == 0.0
    fd = (u_measure(CROSS, 1.0 + 1e-5, 0.5) - u_measure(CROSS, 1.0 - 1e-5, 0.5)) / 2e-5
    assert du_measure(CROSS, 1.0, 0.5) == pytest.approx(fd, rel=1e-6)
    assert du_measure(CROSS, 1.0, 0.5) == pytest.approx(-0.12390361970956487, rel=1e-12)


def test_dudv_singularity_names_the_atom():
    with pytest.raises(SingularityError) as exc:
        dudv_measure(CROSS, 1.0, 1.0)
    assert exc.value.atom == 1


# bounds on U

@pytest.mark.parametrize("bound", BOUNDS)
def test_lemma31_examples(bound):
    assert lemma31_ratio(DISJOINT, _grid(20), bound) == 0.0
    p = P([0.4, -1.1], [2.0, 0.3], 1.5)
    assert lemma31_ratio(p, [(0.0, 1.0), (0.0, -3.0)], bound) == 0.0
    r = lemma31_ratio(CROSS, _grid(), bound)
    assert r <= 1.0
    assert r == pytest.approx(0.2817622354393668, rel=1e-10)


def test_lemma31_unknown_bound():
    with pytest.raises(ParameterError):
        lemma31_ratio(CROSS, _grid(4), "nope")


# non-degeneracy constants

def test_eps1_examples():
    assert estimate_eps1(DISJOINT) == 1.0
    assert estimate_eps1(CROSS) == pytest.approx(0.0, abs=1e-14)
    p = P([2.0, 1.0], [1.0, 2.0], 1.5)
    nf = 2.0 ** 1.5 + 1.0
    assert estimate_eps1(p) == pytest.approx(1.0 - m2(p) / nf, rel=1e-14)
    assert estimate_eps1(p) == pytest.approx(0.12141839157044143, rel=1e-12)


def test_eps2_examples():
    assert estimate_eps2(DISJOINT) == pytest.approx(1.0, rel=1e-9)
    assert estimate_eps2(P([1.0, -0.5], [1.0, -0.5], 1.5)) == pytest.approx(0.0, abs=1e-9)
    v = estimate_eps2(P([1.0, 0.2], [0.2, 1.0], 1.5))
    assert v > 0
    assert v == pytest.approx(0.6567961217741258, rel=1e-7)


def test_eps2_rescaling_invariance():
    p = P([1.0, 0.2, -0.7], [0.2, 1.0, 0.5], 1.5, [1.0, 2.0, 0.5])
    q = P([-3.0, -0.6, 2.1], [0.05, 0.25, 0.125], 1.5, [1.0, 2.0, 0.5])
    assert estimate_eps2(q) == pytest.approx(estimate_eps2(p), rel=1e-7)


# representation invariance

def _all_measures(p):
    pts = [(1.0, 0.5), (-0.3, 2.0), (0.7, -1.1)]
    return np.array([m1_star(p), m1_star(p.swapped()), m1(p), m2(p), codifference(p)]
                    + [u_measure(p, u, v) for u, v in pts] + [i_measure(p, u, v) for u, v in pts])


def test_transform_identity_and_scaling():
    p = P([1.0, 0.3], [0.4, 1.0], 1.5, [1.0, 2.0])
    q = representation_transform(p, [1.0, 1.0])
    np.testing.assert_array_equal(q.f.values, p.f.values)
    np.testing.assert_array_equal(q.mu, p.mu)
    q = representation_transform(p, [2.0, 2.0])
    np.testing.assert_allclose(q.mu, 2.0 ** 1.5 * p.mu, rtol=1e-15)
    np.testing.assert_allclose(q.f.values, p.f.values / 2.0, rtol=1e-15)
    assert m2(q) == pytest.approx(m2(p), rel=1e-14)


def test_transform_random_h_and_permutation():
    rng = np.random.default_rng(BASE_SEED)
    p = P([1.0, 0.3], [0.4, 1.0], 1.5)
    for _ in range(20):
        q = representation_transform(p, rng.uniform(0.5, 2.0, 2), rng.permutation(2))
        np.testing.assert_allclose(_all_measures(q), _all_measures(p), rtol=1e-12)


def test_transform_rejects_zero_factor():
    with pytest.raises(ParameterError):
        representation_transform(CROSS, [1.0, 0.0])


def test_dependence_report_alpha_below_one():
    rep = dependence_report(P([1.0, 0.5], [0.2, 1.0], 0.8))
    assert rep.m1 is None and rep.m1_star_fg is None
    assert rep.m2 > 0


# moving averages

def test_ma_indicator_examples():
    spec = MovingAverageSpec("indicator", {"lo": 0.0, "hi": 1.0}, 1.5)
    p0 = ma_kernel_pair(spec, 0)
    assert m2(p0) == pytest.approx(1.0, rel=1e-12)
    p2 = ma_kernel_pair(spec, 2)
    assert m2(p2) == 0.0 and m1(p2) == 0.0


def test_ma_power_refinement_stability():
    coarse = ma_kernel_pair(MovingAverageSpec("power", {"p": 2.5}, 1.5, delta=1 / 64, horizon=64), 8)
    fine = ma_kernel_pair(MovingAverageSpec("power", {"p": 2.5}, 1.5, delta=1 / 128, horizon=128), 8)
    for fn in (m1, m2):
        assert fn(fine) == pytest.approx(fn(coarse), rel=1e-3)
    assert m1(coarse) == pytest.approx(0.041683136085519684, rel=1e-10)
    assert m2(coarse) == pytest.approx(0.012737002185289165, rel=1e-10)


def test_ma_noncausal_kernel_rejected():
    with pytest.raises(ParameterError):
        MovingAverageSpec("indicator", {"lo": -1.0, "hi": 1.0}, 1.5)
    with pytest.raises(ParameterError):
        MovingAverageSpec("custom", alpha=1.5, func=lambda x: np.exp(-x * x))


def test_eps_stable_over_lags():
    spec = MovingAverageSpec("power", {"p": 2.5}, 1.5)
    vals = [(estimate_eps1(ma_kernel_pair(spec, n)), estimate_eps2(ma_kernel_pair(spec, n)))
            for n in (8, 16, 32, 64)]
    assert min(min(v) for v in vals) >= 0.05


def test_summability_examples():
    ind = check_summability(MovingAverageSpec("indicator", {}, 1.5))
    assert ind.clt_conditions_hold
    good = check_summability(MovingAverageSpec("power", {"p": 2.5}, 1.5))
    assert good.clt_conditions_hold
    assert good.cond_first_order["analytic"] is True
    bad = check_summability(MovingAverageSpec("power", {"p": 1.5}, 1.5))
    assert bad.cond_first_order["analytic"] is False
    assert not bad.clt_conditions_hold


def test_random_pair_fixture_is_reproducible():
    a = random_pair(np.random.default_rng(1), 4, 1.5)
    b = random_pair(np.random.default_rng(1), 4, 1.5)
    np.testing.assert_array_equal(a.f.values, b.f.values)
