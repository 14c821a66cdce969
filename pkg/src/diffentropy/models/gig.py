"""
Generalized inverse Gaussian diffusion

    dX = (beta1 X^(2g-1) - beta2 X^(2g) + beta3 X^(2g-2)) dt + lam X^g dW,

with theta_i = 2 beta_i / lam^2.  The invariant law is GIG with index
nu = theta1 - 2g + 1: f(x) ∝ x^(nu-1) exp(-theta2 x - theta3 / x).
"""
from dataclasses import dataclass
import math

import numpy as np

from ..measures import MeasureReport, renyi_numeric, shannon_numeric
from ..quadrature import QuadratureError, DivergenceError
from ..specfun import bessel_k_dlog_dnu, log_bessel_k, log_gamma
from ._base import Family, MeasureTriple, closed_report, positive_interval, require

__all__ = ["GIGParams", "gig_measures", "gig_renyi_limit_printed"]

CROSS_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class GIGParams(Family):
    """
    Parameters (theta1, theta2, theta3) of the invariant law together with
    the diffusion exponent ``gamma`` >= 0 and volatility ``lam`` > 0.

    One of the ergodicity triples must hold:
    theta1 >= 1, theta2 > 0, theta3 >= 0; or
    1 - 2 gamma <= theta1 < 1, theta2 > 0, theta3 > 0; or
    theta1 < 1 - 2 gamma, theta2 >= 0, theta3 > 0.
    """

    theta1: float
    theta2: float
    theta3: float
    gamma: float = 0.0
    lam: float = 1.0
    name = "gig"
    song_available = False

    def __post_init__(self):
        require(self.gamma >= 0 and self.lam > 0, "gamma must be >= 0 and lam > 0")
        t1, t2, t3, g = self.theta1, self.theta2, self.theta3, self.gamma
        ok = (
            (t1 >= 1 and t2 > 0 and t3 >= 0)
            or (1 - 2 * g <= t1 < 1 and t2 > 0 and t3 > 0)
            or (t1 < 1 - 2 * g and t2 >= 0 and t3 > 0)
        )
        require(ok, f"({t1}, {t2}, {t3}) with gamma = {g} satisfies none of the ergodicity conditions")

    domain = property(lambda self: positive_interval())

    @property
    def nu(self):
        return self.theta1 - 2.0 * self.gamma + 1.0

    @property
    def bessel_form(self):
        """True when theta2 theta3 > 0 and the Bessel-K closed forms apply."""
        return self.theta2 > 0 and self.theta3 > 0

    def _arg(self):
        return 2.0 * math.sqrt(self.theta2 * self.theta3)

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        return (self.nu - 1.0) * np.log(x) - self.theta2 * x - self.theta3 / x

    def log_normalizer(self):
        nu, t2, t3 = self.nu, self.theta2, self.theta3
        if self.bessel_form:
            return math.log(2.0) - 0.5 * nu * math.log(t2 / t3) + log_bessel_k(nu, self._arg())
        if t3 == 0:  # Gamma(nu, rate theta2)
            return log_gamma(nu) - nu * math.log(t2)
        # inverse Gamma: ∫ x^(nu-1) e^(-t3/x) = Gamma(-nu) t3^nu
        return log_gamma(-nu) + nu * math.log(t3)

    def mode(self):
        nu, t2, t3 = self.nu, self.theta2, self.theta3
        if t2 > 0:
            return ((nu - 1.0) + math.sqrt((nu - 1.0) ** 2 + 4.0 * t2 * t3)) / (2.0 * t2)
        return t3 / (1.0 - nu)

    def drift(self, x):
        x = np.asarray(x, dtype=float)
        b1, b2, b3 = (0.5 * self.lam**2 * t for t in (self.theta1, self.theta2, self.theta3))
        g = self.gamma
        return b1 * x ** (2 * g - 1) - b2 * x ** (2 * g) + b3 * x ** (2 * g - 2)

    def squared_diffusion(self, x):
        x = np.asarray(x, dtype=float)
        return self.lam**2 * x ** (2 * self.gamma)

    def _require_bessel(self):
        if not self.bessel_form:
            raise ValueError("closed forms need theta2 > 0 and theta3 > 0 (Bessel argument degenerates)")

    def _log_half_ratio(self):
        # log(1/2 sqrt(theta2/theta3))
        return math.log(0.5) + 0.5 * math.log(self.theta2 / self.theta3)

    def _renyi(self, alpha):
        self._require_bessel()
        nu, z = self.nu, self._arg()
        top = log_bessel_k(alpha * (nu - 1.0) + 1.0, alpha * z)
        return -self._log_half_ratio() + (top - alpha * log_bessel_k(nu, z)) / (1.0 - alpha)

    def shannon(self):
        self._require_bessel()
        nu, z = self.nu, self._arg()
        lk = log_bessel_k(nu, z)
        ratio = math.exp(log_bessel_k(nu - 1.0, z) - lk)
        return -self._log_half_ratio() + nu + lk - (nu - 1.0) * bessel_k_dlog_dnu(nu, z) + z * ratio

    def measures(self, alpha):
        return MeasureTriple(closed_report("renyi", self.renyi(alpha), alpha), closed_report("shannon", self.shannon()))


def gig_renyi_limit_printed(p):
    """
    The published large-alpha floor -log(1/2 sqrt(theta2/theta3)) + log K_nu(2 sqrt(theta2 theta3)).

    Kept for comparison; the actual limit of R_alpha is -log sup f.
    """
    p._require_bessel()
    return -p._log_half_ratio() + log_bessel_k(p.nu, p._arg())


def gig_measures(p, alpha, cross_check=True, tols=None):
    """
    Closed-form Renyi information (order alpha) and Shannon entropy of a GIG law.

    With ``cross_check`` the quadrature values are computed as well.  A
    disagreement above 1e-6 is recorded in the reports' notes and
    ``discrepancy`` fields.  The closed values are still returned.

    Returns
    -------
    MeasureTriple
        ``song`` is None: no closed form is provided.
    """
    triple = p.measures(alpha)
    if not cross_check:
        return triple
    dens = p.density()
    out = []
    for rep, oracle in (
        (triple.renyi, lambda: renyi_numeric(dens, alpha, tols) if alpha != 1.0 else shannon_numeric(dens, tols)),
        (triple.shannon, lambda: shannon_numeric(dens, tols)),
    ):
        try:
            ref = oracle().value
        except (QuadratureError, DivergenceError) as exc:
            out.append(MeasureReport(rep.kind, rep.value, "closed", 0.0, rep.alpha, (f"cross-check failed: {exc}",)))
            continue
        diff = abs(rep.value - ref)
        notes = (f"cross-check mismatch {diff:.3g} against quadrature",) if diff > CROSS_CHECK_TOL else ()
        out.append(MeasureReport(rep.kind, rep.value, "closed", 0.0, rep.alpha, notes, None, diff))
    return MeasureTriple(out[0], out[1], None)
