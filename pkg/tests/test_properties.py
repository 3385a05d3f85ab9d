import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stable_wavelet.depmeas import (
    KernelPair,
    estimate_eps2,
    i_measure,
    lemma31_ratio,
    m1,
    m2,
    representation_transform,
    u_measure,
)
from stable_wavelet.estimators import ols_weights, sigma2_total
from stable_wavelet.harness import ad_statistic, lemma52_integral, lemma53_terms
from stable_wavelet.stable_core import DiscreteKernel, alpha_norm

SETTINGS = settings(max_examples=60, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])

alphas = st.floats(1.05, 1.95)
values = st.floats(-10.0, 10.0, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
masses = st.floats(0.05, 5.0)


@st.composite
def pairs(draw, n_min=1, n_max=5):
    n = draw(st.integers(n_min, n_max))
    f = draw(st.lists(values, min_size=n, max_size=n))
    g = draw(st.lists(values, min_size=n, max_size=n))
    mu = draw(st.lists(masses, min_size=n, max_size=n))
    return KernelPair.from_arrays(f, g, draw(alphas), mu)


uv = st.floats(-5.0, 5.0, allow_nan=False)


@SETTINGS
@given(pairs(), st.floats(0.01, 100.0))
def test_alpha_norm_homogeneous(p, c):
    k = DiscreteKernel(c * p.f.values, p.mu)
    assert alpha_norm(k, p.alpha) == pytest.approx(c * alpha_norm(p.f, p.alpha), rel=1e-10)


@SETTINGS
@given(pairs())
def test_measures_symmetric_and_holder(p):
    q = p.swapped()
    assert m1(q) == pytest.approx(m1(p), rel=1e-12)
    assert m2(q) == pytest.approx(m2(p), rel=1e-12)
    a = p.alpha
    bound = (alpha_norm(p.f, a) * alpha_norm(p.g, a)) ** (a / 2.0)
    assert m2(p) <= bound * (1.0 + 1e-10)


@SETTINGS
@given(pairs(), uv, uv)
def test_u_dominated_by_i(p, u, v):
    assert abs(u_measure(p, u, v)) <= abs(i_measure(p, u, v)) * (1.0 + 1e-10) + 1e-15


@SETTINGS
@given(pairs(n_max=4), st.sampled_from(["product", "balanced", "gap"]))
def test_lemma31_ratio_at_most_one(p, bound):
    ax = np.linspace(-5.0, 5.0, 15)
    uu, vv = np.meshgrid(ax, ax)
    grid = np.column_stack([uu.ravel(), vv.ravel()])
    assert lemma31_ratio(p, grid, bound) <= 1.0 + 1e-9


@SETTINGS
@given(pairs(n_min=2, n_max=4), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_eps2_invariant_under_rescaling(p, cf, cg):
    assume(estimate_eps2(p) > 1e-3)
    q = KernelPair.from_arrays(cf * p.f.values, cg * p.g.values, p.alpha, p.mu)
    assert estimate_eps2(q) == pytest.approx(estimate_eps2(p), rel=1e-6)


@SETTINGS
@given(pairs(n_min=2), st.data())
def test_representation_invariance(p, data):
    n = p.mu.size
    h = np.array(data.draw(st.lists(st.floats(0.1, 10.0), min_size=n, max_size=n)))
    sign = np.array(data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=n, max_size=n)))
    perm = np.array(data.draw(st.permutations(range(n))))
    q = representation_transform(p, h * sign, perm)
    for fn in (m1, m2):
        assert fn(q) == pytest.approx(fn(p), rel=1e-10)
    assert u_measure(q, 0.7, -1.3) == pytest.approx(u_measure(p, 0.7, -1.3), rel=1e-10, abs=1e-14)


finite = st.floats(-1e6, 1e6, allow_nan=False)


@SETTINGS
@given(finite, finite, st.floats(1.01, 1.99))
def test_lemma53_inequalities(x1, x2, a):
    for name, (lhs, rhs) in lemma53_terms(x1, x2, a).items():
        if np.isfinite(lhs) and np.isfinite(rhs):
            assert lhs <= rhs * (1.0 + 1e-12) + 1e-300, name


@settings(max_examples=8, deadline=None)
@given(st.floats(1.2, 1.8), st.floats(0.2, 5.0))
def test_lemma52_swap_symmetry(a, r):
    beta = 0.3
    i1 = lemma52_integral(a, beta, 1.0, r)["value"]
    i2 = lemma52_integral(a, beta, 1.0, 1.0 / r)["value"]
    assert i1 == pytest.approx(r ** (a - 2.0) * i2, rel=1e-6)


@SETTINGS
@given(arrays(np.float64, st.integers(20, 200), elements=st.floats(-1e3, 1e3)),
       st.floats(0.01, 100.0), st.floats(-100.0, 100.0))
def test_ad_affine_invariance(x, scale, shift):
    assume(np.std(x) > 1e-6 * max(1.0, np.abs(x).max()))
    assert ad_statistic(scale * x + shift) == pytest.approx(ad_statistic(x), rel=1e-6, abs=1e-9)


@SETTINGS
@given(st.lists(st.integers(1, 20), min_size=2, max_size=8, unique=True),
       st.data())
def test_weight_identities(octs, data):
    hints = data.draw(st.one_of(st.none(), st.lists(st.floats(0.01, 100.0), min_size=len(octs),
                                                    max_size=len(octs))))
    w = ols_weights(sorted(octs), variance_hints=hints)
    assert abs(w.w.sum()) < 1e-10
    assert abs(np.dot(sorted(octs), w.w) - 1.0) < 1e-10


@SETTINGS
@given(st.integers(2, 6), st.integers(0, 6), st.integers(0, 2 ** 31))
def test_sigma2_total_relabel(J, c, seed):
    A = np.random.default_rng(seed).standard_normal((J, J))
    S = A @ A.T
    base = ols_weights(range(1, J + 1))
    shifted = ols_weights(range(1 + c, J + 1 + c))
    assert sigma2_total(S * 2.0 ** -c, shifted) == pytest.approx(sigma2_total(S, base), rel=1e-9)
