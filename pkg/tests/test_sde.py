import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from diffentropy.models import CIRParams, GIGParams, JacobiParams, OUParams
from diffentropy.quadrature import integrate
from diffentropy.sde import (
    DiffusionSpec,
    NotErgodicError,
    ergodicity_check,
    invariant_density,
    log_scale_function,
    scale_function,
    speed_density,
)

INF = math.inf


def ou_spec(reference=0.0):
    return DiffusionSpec(lambda x: -x, lambda x: 2.0 + 0.0 * x, (-INF, INF), reference)


def cir_spec(mu, theta=1.0, reference=1.0):
    return DiffusionSpec(lambda x: -theta * (x - mu), lambda x: 2 * theta * x, (0.0, INF), reference)


def test_spec_validation():
    with pytest.raises(ValueError):
        DiffusionSpec(lambda x: -x, lambda x: 1.0 + 0 * x, (0.0, 1.0), 2.0)
    with pytest.raises(ValueError):
        DiffusionSpec(lambda x: -x, lambda x: -1.0 + 0 * x, (-INF, INF), 0.0)


@pytest.mark.parametrize("x", [-3.0, -0.5, 0.0, 1.0, 2.5])
def test_ou_scale_function(x):
    assert_allclose(scale_function(ou_spec(), x), math.exp(x * x / 2), rtol=1e-12)


def test_scale_is_one_at_reference():
    for spec in (ou_spec(0.7), cir_spec(2.0, reference=3.0)):
        assert log_scale_function(spec, spec.reference) == 0.0


@pytest.mark.parametrize("x", [0.05, 0.5, 1.0, 4.0, 20.0])
@pytest.mark.parametrize("mu", [0.5, 2.0])
def test_cir_scale_function(x, mu):
    assert_allclose(scale_function(cir_spec(mu), x), x ** (-mu) * math.exp(x - 1), rtol=1e-12)


def test_ou_speed_density():
    spec = ou_spec()
    assert_allclose(speed_density(spec, 0.0), 0.5, rtol=1e-15)
    xs = np.linspace(-4, 4, 9)
    assert_allclose(speed_density(spec, xs), np.exp(-xs**2 / 2) / 2, rtol=1e-12)


def test_jacobi_uniform_speed_is_maximal_at_centre():
    # the uniform case has a flat speed density, so the centre attains the maximum
    spec = JacobiParams(a=-0.5, mu=0.5).diffusion()
    xs = np.linspace(0.01, 0.99, 99)
    m = speed_density(spec, xs)
    assert_allclose(m, m[::-1], rtol=1e-12)
    assert m[49] >= m.max() * (1 - 1e-12)


def test_ou_invariant_density_is_standard_normal():
    f = invariant_density(OUParams(theta=1.0, mu=0.0).diffusion())
    assert_allclose(f.pdf(0.0), 1 / math.sqrt(2 * math.pi), rtol=1e-10)
    assert_allclose(integrate(f.pdf, f.domain).value, 1.0, atol=1e-8)


def test_cir_invariant_density_is_gamma():
    f = invariant_density(CIRParams(mu=2.0).diffusion())
    assert_allclose(f.pdf(1.0), math.exp(-1), rtol=1e-10)
    assert_allclose(f.pdf(3.0), 3 * math.exp(-3), rtol=1e-10)


def test_jacobi_invariant_density_is_uniform():
    f = invariant_density(JacobiParams(a=-0.5, mu=0.5).diffusion())
    assert_allclose(f.pdf(np.array([0.01, 0.3, 0.5, 0.9])), 1.0, rtol=1e-10)


def test_normalization_invariance():
    p = CIRParams(mu=3.0, theta=0.7)
    f1 = invariant_density(p.diffusion(reference=1.0))
    f2 = invariant_density(p.diffusion(reference=5.0))
    xs = np.array([0.2, 1.0, 2.5, 6.0, 12.0])
    m1, m2 = speed_density(f1.spec, xs), speed_density(f2.spec, xs)
    ratio = m2 / m1
    assert_allclose(ratio, ratio[0], rtol=1e-10)
    assert not np.isclose(ratio[0], 1.0)
    assert_allclose(f1.pdf(xs), f2.pdf(xs), rtol=1e-10)


def test_not_ergodic_density_raises():
    # repelling drift: m = e^(x^2 / 2) / 2 is not integrable
    spec = DiffusionSpec(lambda x: x, lambda x: 2.0 + 0 * x, (-INF, INF), 0.0)
    with pytest.raises(NotErgodicError):
        invariant_density(spec)


def test_ergodicity_verdicts():
    assert ergodicity_check(ou_spec()).verdict == "ergodic"
    assert ergodicity_check(OUParams(theta=3.0, mu=-2.0).diffusion()).verdict == "ergodic"
    rep = ergodicity_check(cir_spec(0.5))
    assert rep.verdict == "not_ergodic"
    assert rep.speed_integral_finite and rep.left_scale_divergent is False and rep.right_scale_divergent
    assert ergodicity_check(cir_spec(2.0)).verdict == "ergodic"
    reflect = DiffusionSpec(cir_spec(0.5).drift, cir_spec(0.5).squared_diffusion, (0.0, INF), 1.0, reflecting=True)
    assert ergodicity_check(reflect).verdict == "needs_reflection"


@pytest.mark.parametrize("t1, t2, t3", [(1.0, 1.0, 0.0), (1.5, 2.0, 1.0), (3.0, 0.5, 2.0)])
def test_gig_ergodic_region(t1, t2, t3):
    assert ergodicity_check(GIGParams(t1, t2, t3).diffusion()).verdict == "ergodic"


def test_scale_monotone_away_from_reference():
    spec = cir_spec(2.0, reference=2.0)
    left = scale_function(spec, np.linspace(0.05, 2.0, 20))
    right = scale_function(spec, np.linspace(2.0, 30.0, 20))
    assert np.all(np.diff(left) < 0) and np.all(np.diff(right) > 0)
