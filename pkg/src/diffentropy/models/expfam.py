"""
Exponential families of diffusions

    dX = sum_i beta_i b_i(X) dt + lam sigma(X) dW.

With theta_i = beta_i / lam^2 and T_i(x) = 2 ∫_{x0}^x b_i / sigma^2 the
invariant law is the exponential family

    f(x) = exp{sum_i theta_i T_i(x) - 2 log sigma(x) - phi(theta)},

phi being the log of the speed-measure mass.  No closed forms exist in
general; everything here is quadrature.
"""
from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from ..density import from_log_kernel
from ..measures import renyi_numeric, shannon_numeric, song_numeric
from ..quadrature import Interval
from ..sde import CumulativeIntegral, DiffusionSpec, ergodicity_check, _vectorized
from ._base import MeasureTriple, require

__all__ = ["ExpFamSpec", "expfam_renyi", "expfam_measures", "from_ou", "from_cir", "from_gig"]


@dataclass(frozen=True, eq=False)
class ExpFamSpec:
    """
    Parameters
    ----------
    b_funcs : tuple of callables
        The basis drifts b_i.
    theta : tuple of float
        Canonical parameters theta_i = beta_i / lam^2.
    squared_diffusion : callable
        sigma^2(x), without the lam^2 factor.
    state_space : Interval or pair
    x0 : float
        Base point of the sufficient statistics, interior to the state space.
    lam : float
        Volatility multiplier; it leaves the invariant law unchanged.
    scale : float
        Rough length scale used to place quadrature effort.
    """

    b_funcs: tuple
    theta: tuple
    squared_diffusion: object
    state_space: Interval
    x0: float
    lam: float = 1.0
    scale: float = 1.0
    name: str = "expfam"

    def __post_init__(self):
        if not isinstance(self.state_space, Interval):
            object.__setattr__(self, "state_space", Interval(*self.state_space))
        object.__setattr__(self, "b_funcs", tuple(self.b_funcs))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        require(len(self.b_funcs) == len(self.theta) > 0, "need one theta per basis drift")
        require(self.lam > 0, "lam must be positive")
        require(self.x0 in self.state_space, f"x0 = {self.x0} is not interior to the state space")

    @property
    def p(self):
        return len(self.theta)

    @property
    def beta(self):
        return tuple(t * self.lam**2 for t in self.theta)

    @cached_property
    def _stats(self):
        s2 = _vectorized(self.squared_diffusion)
        out = []
        for b in self.b_funcs:
            bv = _vectorized(b)
            out.append(CumulativeIntegral(lambda x, bv=bv: 2.0 * bv(x) / s2(x), self.state_space, self.x0, self.scale))
        return tuple(out)

    def T(self, i, x):
        """Sufficient statistic T_i(x) = 2 ∫_{x0}^x b_i / sigma^2."""
        return self._stats[i](x)

    def log_kernel(self, x):
        """sum_i theta_i T_i(x) - log sigma^2(x), the log speed density up to lam."""
        x = np.asarray(x, dtype=float)
        s2 = _vectorized(self.squared_diffusion)(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = sum(t * self.T(i, x) for i, t in enumerate(self.theta)) - np.log(s2)
        return out

    @cached_property
    def _normalized(self):
        loc = self._locate()
        return from_log_kernel(self.log_kernel, self.state_space, loc, self.scale, (), self.name)

    def _locate(self):
        dom = self.state_space
        lo = dom.lower if math.isfinite(dom.lower) else self.x0 - 50.0 * self.scale
        hi = dom.upper if math.isfinite(dom.upper) else self.x0 + 50.0 * self.scale
        grid = np.linspace(lo, hi, 2001)[1:-1]
        with np.errstate(all="ignore"):
            vals = np.asarray(self.log_kernel(grid), dtype=float)
        vals[~np.isfinite(vals)] = -np.inf
        return float(grid[int(np.argmax(vals))]) if np.isfinite(vals).any() else self.x0

    @property
    def phi(self):
        """log ∫ sigma^-2 exp(sum theta_i T_i)."""
        return float(self._normalized[1])

    def density(self):
        return self._normalized[0]

    def diffusion(self):
        lam2 = self.lam**2
        bs = [_vectorized(b) for b in self.b_funcs]
        beta = self.beta
        s2 = _vectorized(self.squared_diffusion)

        def drift(x):
            return sum(bi * b(x) for bi, b in zip(beta, bs))

        def sq(x):
            return lam2 * s2(x)

        return DiffusionSpec(drift, sq, self.state_space, self.x0, self.scale, name=self.name)

    def membership(self):
        """
        Numerical probe of theta in Theta (finite speed mass) and Theta_1
        (both scale integrals divergent).

        Returns
        -------
        (in_theta, in_theta1) : tuple of Optional[bool]
            None where the endpoint classifier is inconclusive.
        """
        rep = ergodicity_check(self.diffusion())
        left, right = rep.left_scale_divergent, rep.right_scale_divergent
        theta1 = None if left is None or right is None else bool(left and right)
        return rep.speed_integral_finite, theta1


def expfam_renyi(spec, alpha, tols=None):
    """
    Renyi information (-alpha phi + log ∫ sigma^(-2 alpha) exp(alpha sum theta_i T_i)) / (1 - alpha).

    The tilted integral is computed by quadrature on the normalized law,
    which is the same quantity with phi already subtracted.
    """
    return renyi_numeric(spec.density(), alpha, tols)


def expfam_measures(spec, alpha, tols=None):
    dens = spec.density()
    return MeasureTriple(renyi_numeric(dens, alpha, tols), shannon_numeric(dens, tols), song_numeric(dens, tols))


def from_ou(p, lam=None):
    """OU as p = 1 family: b_1 = -(x - mu), sigma = 1, lam^2 = 2 theta."""
    lam = math.sqrt(2.0 * p.theta) if lam is None else lam
    return ExpFamSpec(
        (lambda x: -(np.asarray(x, dtype=float) - p.mu),),
        (p.theta / lam**2,),
        lambda x: np.ones(np.shape(x)),
        (-math.inf, math.inf),
        p.mu,
        lam,
        name="ou-expfam",
    )


def from_cir(p, lam=None):
    """CIR as p = 2 family: b_1 = 1, b_2 = -x, sigma^2 = x, lam^2 = 2 theta."""
    lam = math.sqrt(2.0 * p.theta) if lam is None else lam
    return ExpFamSpec(
        (lambda x: np.ones(np.shape(x)), lambda x: -np.asarray(x, dtype=float)),
        (p.theta * p.mu / lam**2, p.theta / lam**2),
        lambda x: np.asarray(x, dtype=float),
        (0.0, math.inf),
        max(p.mu, 1.0),
        lam,
        scale=math.sqrt(p.mu),
        name="cir-expfam",
    )


def from_gig(p):
    """GIG as p = 3 family: b = (x^(2g-1), -x^(2g), x^(2g-2)), sigma^2 = x^(2g)."""
    g = p.gamma

    def power(k, sign=1.0):
        return lambda x: sign * np.asarray(x, dtype=float) ** k

    # the GIG parametrization uses theta_i = 2 beta_i / lam^2
    theta = tuple(0.5 * t for t in (p.theta1, p.theta2, p.theta3))
    return ExpFamSpec(
        (power(2 * g - 1), power(2 * g, -1.0), power(2 * g - 2)),
        theta,
        power(2 * g),
        (0.0, math.inf),
        p.mode(),
        p.lam,
        scale=p.scale,
        name="gig-expfam",
    )
