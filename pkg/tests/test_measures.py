import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.special import polygamma

from diffentropy.density import affine, cauchy, laplace, normal, student_t, uniform
from diffentropy.measures import (
    power_divergence,
    renyi_divergence,
    renyi_numeric,
    shannon_numeric,
    song_numeric,
)
from diffentropy.quadrature import DivergenceError


@pytest.mark.parametrize("alpha", [0.3, 2.0, 7.0])
def test_uniform_renyi_is_zero(alpha):
    assert abs(renyi_numeric(uniform(), alpha).value) < 1e-12


def test_renyi_reference_values():
    assert_allclose(renyi_numeric(normal(), 2.0).value, 0.5 * math.log(4 * math.pi), rtol=1e-10)
    assert_allclose(renyi_numeric(cauchy(), 2.0).value, math.log(2 * math.pi), rtol=1e-10)


def test_renyi_normal_all_orders():
    for alpha in (0.2, 0.5, 1.5, 3.0, 10.0):
        expect = 0.5 * math.log(2 * math.pi) + 0.5 * math.log(alpha) / (alpha - 1)
        assert_allclose(renyi_numeric(normal(), alpha).value, expect, rtol=1e-10)


def test_renyi_contract():
    with pytest.raises(ValueError):
        renyi_numeric(normal(), 1.0)
    with pytest.raises(ValueError):
        renyi_numeric(normal(), 1.0 + 1e-7)
    with pytest.raises(ValueError):
        renyi_numeric(normal(), -0.5)
    # Cauchy: ∫ f^alpha is infinite for alpha <= 1/2
    with pytest.raises(DivergenceError):
        renyi_numeric(cauchy(), 0.4)


def test_quadrature_reports_carry_error():
    rep = renyi_numeric(normal(), 2.0)
    assert rep.method == "quadrature" and rep.abs_err_est > 0 and rep.alpha == 2.0


def test_shannon_reference_values():
    assert_allclose(shannon_numeric(normal()).value, 0.5 * (1 + math.log(2 * math.pi)), rtol=1e-10)
    assert_allclose(shannon_numeric(cauchy()).value, math.log(4 * math.pi), rtol=1e-10)
    assert abs(shannon_numeric(uniform()).value) < 1e-12
    assert_allclose(shannon_numeric(laplace()).value, 1 + math.log(2), rtol=1e-10)


def test_song_reference_values():
    # Var(log f) of the normal law is Var(X^2 / 2) = 1/2
    assert_allclose(song_numeric(normal()).value, 0.5, rtol=1e-9)
    assert_allclose(song_numeric(laplace()).value, 1.0, rtol=1e-9)
    assert_allclose(song_numeric(uniform()).value, 0.0, atol=1e-12)


def test_song_student_t6():
    # (nu + 1)^2 / 4 (psi'(nu / 2) - psi'((nu + 1) / 2)) with nu = 6
    expect = 49 / 4 * float(polygamma(1, 3.0) - polygamma(1, 3.5))
    assert_allclose(expect, 0.791, atol=5e-4)
    assert_allclose(song_numeric(student_t(6)).value, expect, rtol=1e-9)


@pytest.mark.parametrize("make", [normal, laplace, cauchy])
@pytest.mark.parametrize("mu, sigma", [(3.0, 2.0), (-1.0, 0.5)])
def test_song_location_scale_invariant(make, mu, sigma):
    base = song_numeric(make()).value
    assert abs(song_numeric(affine(make(), mu, sigma)).value - base) < 1e-6


@pytest.mark.parametrize("make", [normal, laplace, cauchy, lambda: student_t(4)])
def test_renyi_continuous_at_one(make):
    f = make()
    r1 = shannon_numeric(f).value
    for h in (1e-3, -1e-3):
        assert abs(renyi_numeric(f, 1 + h).value - r1) < 5e-3


@pytest.mark.parametrize("make", [normal, laplace, lambda: student_t(6)])
def test_gradient_identity(make):
    f, h = make(), 1e-3
    grad = (renyi_numeric(f, 1 + h).value - renyi_numeric(f, 1 - h).value) / (2 * h)
    assert abs(-2 * grad - song_numeric(f).value) < 1e-4


@pytest.mark.parametrize("make", [normal, laplace, lambda: student_t(3)])
def test_spectrum_nonincreasing(make):
    f = make()
    vals = [renyi_numeric(f, a).value for a in (0.5, 1.5, 2.0, 4.0, 8.0)]
    vals.insert(1, shannon_numeric(f).value)
    assert np.all(np.diff(vals) <= 1e-12)


def test_tail_ordering_t6_before_laplace():
    assert song_numeric(student_t(6)).value < song_numeric(laplace()).value


@pytest.mark.parametrize("alpha", [0.5, 2.0, -0.5, 3.0])
def test_divergence_of_identical_laws_is_zero(alpha):
    assert abs(renyi_divergence(normal(), normal(), alpha).value) < 1e-12
    assert abs(power_divergence(normal(), normal(), alpha).value) < 1e-12


def test_gaussian_shift_divergences():
    # log ∫ f^a g^(1-a) = -a (1 - a) d^2 / 2 for unit variances and shift d
    f, g = normal(0.0, 1.0), normal(1.0, 1.0)
    assert_allclose(renyi_divergence(f, g, 0.5).value, 0.5, rtol=1e-10)
    assert_allclose(power_divergence(f, g, 0.5).value, (1 - math.exp(-0.125)) / 0.25, rtol=1e-10)
    assert_allclose(power_divergence(f, g, 0.5).value, 0.4700123897, rtol=1e-9)
    for alpha in (0.2, 2.0, 3.5):
        assert_allclose(renyi_divergence(f, g, alpha).value, 0.5, rtol=1e-9)


def test_divergence_tends_to_kl():
    f, g = normal(0.0, 1.0), normal(0.0, 2.0)
    kl = math.log(2.0) + 1 / 8 - 0.5
    for alpha in (1 - 1e-4, 1 + 1e-4):
        assert abs(renyi_divergence(f, g, alpha).value - kl) < 1e-4
        assert abs(power_divergence(f, g, alpha).value - kl) < 1e-4


def test_power_divergence_first_order():
    f, g = normal(0.0, 1.0), normal(1e-3, 1.0)
    d = renyi_divergence(f, g, 0.5).value
    assert d <= 1e-6
    assert abs(power_divergence(f, g, 0.5).value - d) <= 1e-6 * d


def test_divergence_errors():
    with pytest.raises(ValueError):
        renyi_divergence(normal(), normal(), 1.0)
    with pytest.raises(ValueError):
        power_divergence(normal(), normal(), 0.0)
    # f on the whole line is not dominated by a law on (0, 1) when alpha > 1
    with pytest.raises(DivergenceError):
        renyi_divergence(normal(), uniform(), 2.0)
    # tails of f^2 / g with g much lighter than f diverge
    with pytest.raises(DivergenceError):
        renyi_divergence(cauchy(), normal(), 2.0)


def test_divergence_nonnegative():
    pairs = [(normal(), laplace()), (laplace(), cauchy()), (normal(0.3, 1.2), student_t(5))]
    for f, g in pairs:
        for alpha in (0.3, 0.7, 1.5):
            assert renyi_divergence(f, g, alpha).value > 0
            assert power_divergence(f, g, alpha).value > 0


@settings(max_examples=25, deadline=None)
@given(mu=st.floats(-50, 50), sigma=st.floats(0.05, 20))
def test_song_affine_invariance_property(mu, sigma):
    assert abs(song_numeric(affine(laplace(), mu, sigma)).value - 1.0) < 1e-8
