import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cauchygap.functions import (
    check_derivatives,
    make_linear,
    make_lower_extremal_1d,
    make_one_d_family,
    make_power_family,
    make_quadratic_centered,
    make_radial_log_cutoff,
    make_random_test,
)
from cauchygap.measures import MeasureParams, mean_sq_norm


def _cloud(n, N=40, scale=2.0, seed=0):
    rng = np.random.default_rng(seed)
    return scale * rng.standard_normal((N, n))


def test_linear():
    v = np.array([1.0, -2.0, 0.5])
    f = make_linear(v)
    x = _cloud(3)
    assert np.allclose(f.value(x), x @ v)
    assert np.allclose(f.gradient(x), np.broadcast_to(v, x.shape))
    assert np.allclose(f.hessian(x), 0.0)
    assert f.angular_mode == 1
    assert check_derivatives(f, x) < 1e-8


def test_quadratic_centered_mean_zero_flag():
    p = MeasureParams(3, 4.0)
    f = make_quadratic_centered(p)
    x = _cloud(3)
    assert np.allclose(f.value(x), np.sum(x * x, axis=1) - mean_sq_norm(p))
    assert f.angular_mode == 0
    assert check_derivatives(f, x) < 1e-6
    # borderline beta: constructed fine but tagged as not square integrable
    g = make_quadratic_centered(MeasureParams(3, 3.2))
    assert "not in L2" in g.label


def test_power_family_values_and_derivatives():
    for eps in (0.3, -0.4, 1.1):
        f = make_power_family(eps)
        for n in (1, 2, 3):
            x = _cloud(n, N=25, seed=n)
            s = np.sum(x * x, axis=1)
            assert np.allclose(f.value(x), (1.0 + s) ** eps, rtol=1e-13)
            assert check_derivatives(f, x) < 1e-6


def test_one_d_family_odd():
    f = make_one_d_family(0.25)
    x = _cloud(1, N=30)
    assert np.allclose(f.value(x), -f.value(-x), rtol=1e-12)
    assert check_derivatives(f, x) < 1e-6
    with pytest.raises(ValueError):
        f.value(_cloud(2))


def test_lower_extremal_1d_ode():
    # w f'' + (3/2 - beta) x f' = 0 with w = 1 + x^2, and f'(x) = w^p.
    for beta in (0.8, 1.2, 1.5):
        f = make_lower_extremal_1d(beta)
        p = (2.0 * beta - 3.0) / 4.0
        x = np.linspace(-4.0, 4.0, 41)[:, None]
        t = x[:, 0]
        w = 1.0 + t * t
        fp = f.gradient(x)[:, 0]
        fpp = f.hessian(x)[:, 0, 0]
        assert np.allclose(fp, w**p, rtol=1e-12)
        resid = w * fpp + (1.5 - beta) * t * fp
        assert np.max(np.abs(resid)) < 1e-10
        assert check_derivatives(f, x) < 1e-6


def test_radial_log_cutoff_support():
    x0 = np.array([4.0, 0.0])
    f = make_radial_log_cutoff(x0, 1.0, 2.5)
    assert f.support_radius == pytest.approx(4.0 + 2.5)
    far = np.array([[4.0, 3.0], [0.0, -1.0], [9.0, 0.0], [-3.0, 0.0]])
    assert np.allclose(f.value(far), 0.0)
    assert np.allclose(f.gradient(far), 0.0)
    assert np.allclose(f.hessian(far), 0.0)
    # near the center the bump is identically 1 so f = (1/2) log|x|^2 there
    near = x0 + np.array([[0.2, 0.1], [-0.3, 0.4]])
    assert np.allclose(f.value(near), 0.5 * np.log(np.sum(near**2, axis=1)))
    mid = x0 + np.array([[1.6, 0.9]])
    assert check_derivatives(f, np.vstack([near, mid])) < 1e-5
    with pytest.raises(ValueError):
        make_radial_log_cutoff(np.zeros(2), 1.0, 2.5)
    with pytest.raises(ValueError):
        make_radial_log_cutoff(x0, 2.5, 1.0)


def test_random_test_compact_support_and_derivatives():
    for seed, n in [(0, 1), (1, 2), (7, 3)]:
        f = make_random_test(seed, n)
        R = f.support_radius
        assert R is not None and R > 0
        rng = np.random.default_rng(seed + 100)
        far = (R + 1.0 + rng.random((20, n))) * _unit(rng, 20, n)
        assert np.allclose(f.value(far), 0.0)
        assert np.allclose(f.gradient(far), 0.0)
        assert np.allclose(f.hessian(far), 0.0)
        # huge radii must not produce overflow garbage
        huge = 500.0 * _unit(rng, 5, n)
        assert np.all(np.isfinite(f.value(huge)))
        assert np.allclose(f.value(huge), 0.0)
        pts = 0.8 * R * _unit(rng, 30, n) * rng.random((30, 1))
        assert check_derivatives(f, pts) < 2e-4
        assert f.radial_seams  # seam radii exposed for quadrature panels


def _unit(rng, N, n):
    v = rng.standard_normal((N, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def test_random_test_deterministic():
    a = make_random_test(5, 2)
    b = make_random_test(5, 2)
    x = _cloud(2, seed=9)
    assert np.array_equal(a.value(x), b.value(x))


@given(st.integers(min_value=0, max_value=30), st.integers(min_value=1, max_value=3))
@settings(max_examples=15, deadline=None)
def test_random_test_derivative_consistency(seed, n):
    f = make_random_test(seed, n)
    rng = np.random.default_rng(seed)
    pts = 0.7 * f.support_radius * (2.0 * rng.random((12, n)) - 1.0) / np.sqrt(n)
    assert check_derivatives(f, pts) < 5e-4
