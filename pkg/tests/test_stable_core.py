import numpy as np
import pytest

from stable_wavelet.errors import DomainError, ParameterError, ShapeError
from stable_wavelet.stable_core import (
    DiscreteKernel,
    RngStream,
    StableParams,
    alpha_norm,
    joint_char_fn,
    sample_joint,
    sample_sas,
    signed_power,
    splitmix64,
)

from conftest import BASE_SEED

N = 10 ** 6


def test_cauchy_quartile():
    x = sample_sas(StableParams(1.0, 1.0), RngStream(BASE_SEED, 1), N)
    assert abs(np.mean(x <= 1.0) - 0.75) < 5 * np.sqrt(0.75 * 0.25 / N)


def test_gaussian_case_has_variance_two():
    x = sample_sas(StableParams(2.0, 1.0), RngStream(BASE_SEED, 2), N)
    assert abs(x.var() - 2.0) < 0.02


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_median_zero(alpha):
    x = sample_sas(StableParams(alpha, 1.3), RngStream(BASE_SEED, 3), N)
    # sign is Bernoulli(1/2), so the sample median sits near 0
    assert abs(np.mean(x > 0) - 0.5) < 5 * 0.5 / np.sqrt(N)


@pytest.mark.parametrize("alpha,scale", [(0.0, 1.0), (2.1, 1.0), (1.5, 0.0), (1.5, -1.0), (np.nan, 1.0)])
def test_invalid_params(alpha, scale):
    with pytest.raises(ParameterError):
        StableParams(alpha, scale)


def test_scale_equivariance():
    s = RngStream(BASE_SEED, 4)
    a = sample_sas(StableParams(1.5, 1.0), s, 1000)
    b = sample_sas(StableParams(1.5, 2.0), s, 1000)
    np.testing.assert_array_equal(b, 2.0 * a)


def test_determinism_and_stream_separation():
    a = sample_sas(StableParams(1.7), RngStream(7, 0), 100)
    b = sample_sas(StableParams(1.7), RngStream(7, 0), 100)
    c = sample_sas(StableParams(1.7), RngStream(7, 1), 100)
    d = sample_sas(StableParams(1.7), RngStream(1, 7), 100)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(c, d)


def test_splitmix_reference_value():
    # first output of the reference SplitMix64 generator seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


@pytest.mark.parametrize("f,mu,expected", [
    ([1.0], [1.0], 1.0),
    ([1.0, 1.0], [1.0, 1.0], 2.0 ** (2.0 / 3.0)),
    ([0.0, 0.0], [0.3, 2.0], 0.0),
])
def test_alpha_norm_examples(f, mu, expected):
    assert alpha_norm(DiscreteKernel(f, mu), 1.5) == pytest.approx(expected, rel=1e-14, abs=1e-300)


def test_joint_char_fn_examples():
    f, g = DiscreteKernel([1.0, 0.0]), DiscreteKernel([0.0, 1.0])
    assert joint_char_fn(f, g, 1.5, 1.0, 1.0) == pytest.approx(np.exp(-2.0), rel=1e-14)
    assert joint_char_fn(f, g, 1.5, 0.0, 0.0) == 1.0
    one = DiscreteKernel([1.0])
    assert joint_char_fn(one, one, 1.5, 1.0, 1.0) == pytest.approx(0.059105746561956225, rel=1e-12)


def test_joint_char_fn_shape_error():
    with pytest.raises(ShapeError):
        joint_char_fn(DiscreteKernel([1.0]), DiscreteKernel([1.0, 2.0]), 1.5, 1.0, 1.0)


def test_sample_joint_examples():
    one = DiscreteKernel([1.0])
    x = sample_joint([one], 1.5, RngStream(BASE_SEED, 5), N)[:, 0]
    assert abs(np.mean(np.cos(x)) - np.exp(-1.0)) < 5 / np.sqrt(N)
    f, g = DiscreteKernel([1.0, 0.0]), DiscreteKernel([0.0, 1.0])
    xy = sample_joint([f, g], 1.5, RngStream(BASE_SEED, 6), N)
    assert abs(np.corrcoef(np.sign(xy[:, 0]), np.sign(xy[:, 1]))[0, 1]) < 5 / np.sqrt(N)
    k = DiscreteKernel([0.3, -1.2, 2.0], [1.0, 0.5, 0.1])
    xy = sample_joint([k, k], 1.2, RngStream(BASE_SEED, 7), 1000)
    np.testing.assert_array_equal(xy[:, 0], xy[:, 1])


def test_empirical_cf_matches_joint_char_fn():
    f = DiscreteKernel([1.0, 0.4, -0.3], [1.0, 0.5, 2.0])
    g = DiscreteKernel([0.4, 1.0, 0.7], [1.0, 0.5, 2.0])
    xy = sample_joint([f, g], 1.5, RngStream(BASE_SEED, 8), N)
    for u, v in [(1.0, 0.5), (-2.0, 3.0), (0.3, -0.7)]:
        z = np.exp(1j * (u * xy[:, 0] + v * xy[:, 1])).mean()
        assert abs(z.real - joint_char_fn(f, g, 1.5, u, v)) < 5 / np.sqrt(N)
        assert abs(z.imag) < 5 / np.sqrt(N)


@pytest.mark.parametrize("a,p,expected", [(-4.0, 0.5, -2.0), (9.0, 0.5, 3.0), (0.0, 1.3, 0.0)])
def test_signed_power_examples(a, p, expected):
    assert signed_power(a, p) == expected


def test_signed_power_domain_error():
    with pytest.raises(DomainError):
        signed_power(0.0, -0.5)


def test_kernel_validation():
    with pytest.raises(ParameterError):
        DiscreteKernel([1.0], [0.0])
    with pytest.raises(ShapeError):
        DiscreteKernel([1.0, 2.0], [1.0])
