"""
Pearson diffusions dX = -theta (X - mu) dt + sqrt(2 theta (a X^2 + b X + c)) dW.

Six cases, classified by the squared diffusion coefficient:

=====================  ==========================  =========================
class                  sigma^2(x) / (2 theta)      invariant law
=====================  ==========================  =========================
``OUParams``           1                           N(mu, 1)
``CIRParams``          x                           Gamma(mu, 1)
``PearsonIVParams``    a (1 + x^2)                 Pearson type IV
``InvGammaParams``     a x^2                       inverse Gamma(1 + 1/a, mu/a)
``ScaledFParams``      a x (x + 1)                 Beta prime(mu/a, 1 + 1/a)
``JacobiParams``       a x (x - 1), a < 0          Beta(-mu/a, -(1 - mu)/a)
=====================  ==========================  =========================
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import special

from ..measures import MeasureReport, shannon_numeric
from ..quadrature import DivergenceError, Interval, integrate
from ..specfun import digamma, log_beta, log_cosh, log_gamma, log_sinh, trigamma
from ._base import Family, MeasureTriple, closed_report, positive_interval, real_line, require

__all__ = [
    "OUParams",
    "CIRParams",
    "PearsonIVParams",
    "InvGammaParams",
    "ScaledFParams",
    "JacobiParams",
    "ou_measures",
    "cir_measures",
    "inverse_gamma_measures",
    "scaled_f_measures",
    "jacobi_measures",
    "log_cos_exp_integral",
    "pearson_iv_renyi_special",
    "pearson_iv_renyi_numeric",
    "pearson_iv_shannon_a1",
    "pearson_iv_shannon_a1_printed",
]

_LOG_2PI = math.log(2.0 * math.pi)
OU_SONG_PRINTED = 1.0


class _Pearson(Family):
    def drift(self, x):
        return -self.theta * (np.asarray(x, dtype=float) - self.mu)


@dataclass(frozen=True)
class OUParams(_Pearson):
    """Ornstein-Uhlenbeck diffusion, sigma^2 = 2 theta; invariant law N(mu, 1)."""

    theta: float = 1.0
    mu: float = 0.0
    name = "ou"

    def __post_init__(self):
        require(self.theta > 0, "theta must be positive")

    domain = property(lambda self: real_line())

    def log_kernel(self, x):
        z = np.asarray(x, dtype=float) - self.mu
        return -0.5 * z * z

    def log_normalizer(self):
        return 0.5 * _LOG_2PI

    def mode(self):
        return self.mu

    def squared_diffusion(self, x):
        return np.full(np.shape(x), 2.0 * self.theta)

    def _renyi(self, alpha):
        return 0.5 * (_LOG_2PI - math.log(alpha) / (1.0 - alpha))

    def shannon(self):
        return 0.5 * (1.0 + _LOG_2PI)

    def song(self):
        # Var(log f) = Var(Z^2 / 2) = 1/2 for every normal law
        return 0.5

    def measures(self, alpha):
        renyi, shannon, song = super().measures(alpha)
        note = "the value 1 is sometimes quoted for the normal law; Var(Z^2/2) = 1/2"
        return MeasureTriple(renyi, shannon, closed_report("song", song.value, None, (note,), OU_SONG_PRINTED))


@dataclass(frozen=True)
class CIRParams(_Pearson):
    """
    Cox-Ingersoll-Ross diffusion, sigma^2 = 2 theta x; invariant law Gamma(mu, 1).

    The closed forms are valid for every mu > 0 (the Gamma law is proper);
    the process is ergodic only for mu >= 1, see :attr:`ergodic`.
    """

    mu: float
    theta: float = 1.0
    name = "cir"

    def __post_init__(self):
        require(self.mu > 0 and self.theta > 0, "mu and theta must be positive")

    domain = property(lambda self: positive_interval())

    @property
    def ergodic(self):
        return self.mu >= 1.0

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        return (self.mu - 1.0) * np.log(x) - x

    def log_normalizer(self):
        return log_gamma(self.mu)

    def mode(self):
        return self.mu - 1.0 if self.mu > 1.0 else self.mu

    def squared_diffusion(self, x):
        return 2.0 * self.theta * np.asarray(x, dtype=float)

    def alpha_ok(self, alpha):
        return alpha > 0 and alpha * (self.mu - 1.0) + 1.0 > 0

    def _renyi(self, alpha):
        mu = self.mu
        k = alpha * (mu - 1.0) + 1.0
        return (-alpha * log_gamma(mu) - k * math.log(alpha) + log_gamma(k)) / (1.0 - alpha)

    def shannon(self):
        mu = self.mu
        return log_gamma(mu) - (mu - 1.0) * digamma(mu) + mu

    def song(self):
        mu = self.mu
        return trigamma(mu) * (mu - 1.0) ** 2 - mu + 2.0


# -- Pearson type IV -------------------------------------------------------


def log_cos_exp_integral(nu, p, method="closed", tols=None):
    """
    log ∫_{-pi/2}^{pi/2} cos(t)^nu exp(-p t) dt, nu > -1.

    ``method="closed"`` uses pi Gamma(nu + 1) / (2^nu |Gamma(1 + (nu + i p)/2)|^2);
    ``method="quadrature"`` folds the interval onto (0, pi/2),
    ∫ sin(u)^nu 2 cosh(p (pi/2 - u)) du, and integrates in log-shifted form.

    Raises
    ------
    DivergenceError
        If nu <= -1.
    """
    nu, p = float(nu), float(p)
    if not nu > -1.0:
        raise DivergenceError(f"cos-power integral diverges for exponent {nu} <= -1")
    if method == "closed":
        z = 1.0 + 0.5 * (nu + 1j * p)
        return (
            math.log(math.pi)
            + float(special.gammaln(nu + 1.0))
            - nu * math.log(2.0)
            - 2.0 * float(special.loggamma(z).real)
        )
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    half = 0.5 * math.pi
    q = abs(p)

    def log_g(u):
        return nu * math.log(math.sin(u)) + math.log(2.0) + log_cosh(q * (half - u))

    # maximiser of nu log sin u + q (pi/2 - u): tan u = nu / q
    if nu > 0:
        u_star = math.atan2(nu, q)
    else:
        u_star = 1e-3
    u_star = min(max(u_star, 1e-12), half - 1e-12)
    shift = max(log_g(u_star), log_g(half * 0.5), log_g(half - 1e-9))

    def g(u):
        v = log_g(u) - shift
        return 0.0 if v < -745.0 else math.exp(v)

    res = integrate(g, Interval(0.0, half), breakpoints=(u_star,), **dict(tols or {}))
    return shift + math.log(res.value)


@dataclass(frozen=True)
class PearsonIVParams(_Pearson):
    """
    Pearson diffusion with sigma^2 = 2 theta a (1 + x^2).

    Invariant law f(x) ∝ (1 + x^2)^(-1/(2a) - 1) exp((mu/a) arctan x), a
    skewed t with 1 + 1/a degrees of freedom in the tails.  The normalizer
    and the Renyi information are evaluated through the complex Gamma
    function (``log_cos_exp_integral``); the Shannon entropy through the
    complex digamma function.
    """

    a: float
    mu: float = 0.0
    theta: float = 1.0
    name = "pearson4"
    song_available = False

    def __post_init__(self):
        require(self.a > 0 and self.theta > 0, "a and theta must be positive")

    domain = property(lambda self: real_line())

    @property
    def _nu0(self):
        return 1.0 / self.a

    @property
    def _p0(self):
        return self.mu / self.a

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        return -(0.5 / self.a + 1.0) * np.log1p(x * x) + self._p0 * np.arctan(x)

    def log_normalizer(self):
        return log_cos_exp_integral(self._nu0, self._p0)

    def mode(self):
        return self.mu / (1.0 + 2.0 * self.a)

    def squared_diffusion(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.theta * self.a * (1.0 + x * x)

    def cos_exponent(self, alpha):
        """Power of cos t in ∫ f^alpha after the substitution x = tan t."""
        return 2.0 * alpha * (0.5 / self.a + 1.0) - 2.0

    def alpha_ok(self, alpha):
        return alpha > 0 and self.cos_exponent(alpha) > -1.0

    def _renyi(self, alpha):
        lg = self.log_normalizer()
        li = log_cos_exp_integral(self.cos_exponent(alpha), alpha * self._p0)
        return (-alpha * lg + li) / (1.0 - alpha)

    def shannon(self):
        # R_1 = L(1) - L'(1) with L(alpha) = log ∫ cos^nu(alpha) e^(-alpha p0 t)
        nu, p = self._nu0, self._p0
        z = 1.0 + 0.5 * (nu + 1j * p)
        psi = special.psi(z)
        d_nu = float(special.psi(nu + 1.0)) - math.log(2.0) - float(psi.real)
        d_p = float(psi.imag)
        slope = (1.0 / self.a + 2.0) * d_nu + p * d_p
        return self.log_normalizer() - slope

    def measures(self, alpha):
        return MeasureTriple(closed_report("renyi", self.renyi(alpha), alpha), closed_report("shannon", self.shannon()))


def _log_prod(terms):
    return float(sum(math.log(t) for t in terms))


def _log_even_tilted(m, p):
    """log ∫ cos^(2m) t e^(-p t) dt = log(C(m, mu) sinh(p pi / 2)), with the p -> 0 limit."""
    q = abs(p)
    if q == 0.0:
        # 2 sinh(q pi/2)/q -> pi
        return math.log(math.pi) + math.lgamma(2 * m + 1) - _log_prod((2.0 * k) ** 2 for k in range(1, m + 1))
    log_c = math.log(2.0) + math.lgamma(2 * m + 1) - math.log(q) - _log_prod(q * q + (2.0 * k) ** 2 for k in range(1, m + 1))
    return log_c + log_sinh(0.5 * math.pi * q)


def _log_odd_tilted(m, p):
    """log ∫ cos^(2m+1) t e^(-p t) dt = log(D(m, mu) cosh(p pi / 2))."""
    q = abs(p)
    log_d = math.log(2.0) + math.lgamma(2 * m + 2) - _log_prod(q * q + (2.0 * k + 1.0) ** 2 for k in range(0, m + 1))
    return log_d + log_cosh(0.5 * math.pi * q)


def pearson_iv_special_alpha(a, m, branch):
    """Order alpha at which the tilted cos-power is an integer: 2m (even) or 2m + 1 (half)."""
    if branch == "even":
        return 2.0 * a * (m + 1.0) / (1.0 + 2.0 * a)
    if branch == "half":
        return 2.0 * a * (m + 1.5) / (1.0 + 2.0 * a)
    raise ValueError(f"branch must be 'even' or 'half', not {branch!r}")


def pearson_iv_renyi_special(p, m, branch, limit_at_zero=True):
    """
    Renyi information of a Pearson IV law at the special orders
    alpha = 2a(m + 1)/(1 + 2a) (``branch="even"``) or
    alpha = 2a(m + 3/2)/(1 + 2a) (``branch="half"``), m = 1, 2, ...

    At these orders the tilted integral ∫ cos^k t e^(-q t) dt has integer
    k and closed form: C(m, mu) sinh(q pi/2) for k = 2m, D(m, mu)
    cosh(q pi/2) for k = 2m + 1.  At mu = 0 the even form is replaced by
    its finite limit pi (2m)! / (4^m m!^2) unless ``limit_at_zero`` is
    False (which raises, the raw form having a 0/0).

    Raises
    ------
    ValueError
        If m is not a positive integer, or alpha = 1 for this (a, m, branch).
    """
    require(isinstance(m, (int, np.integer)) and m >= 1, "m must be a positive integer")
    a = p.a
    alpha = pearson_iv_special_alpha(a, m, branch)
    denom = 2.0 * a * m - 1.0 if branch == "even" else a * (2.0 * m + 1.0) - 1.0
    if denom == 0.0:
        raise ValueError(f"alpha = 1 for a = {a}, m = {m}, {branch} branch; use the Shannon entropy")
    if branch == "even":
        q = 2.0 * (m + 1.0) * p.mu / (1.0 + 2.0 * a)
        if q == 0.0 and not limit_at_zero:
            raise ZeroDivisionError("raw C(m, mu) sinh form is 0/0 at mu = 0")
        tilted = _log_even_tilted(m, q)
        coef_base = 2.0 * a * (m + 1.0) / denom
        coef_tilt = (1.0 + 2.0 * a) / (1.0 - 2.0 * a * m)
    else:
        q = (2.0 * m + 3.0) * p.mu / (1.0 + 2.0 * a)
        tilted = _log_odd_tilted(m, q)
        coef_base = a * (2.0 * m + 3.0) / denom
        coef_tilt = (1.0 + 2.0 * a) / (1.0 - a * (2.0 * m + 1.0))
    value = coef_base * p.log_normalizer() + coef_tilt * tilted
    return MeasureReport("renyi", value, "closed", 0.0, alpha, (f"{branch} branch, m = {m}",))


def pearson_iv_renyi_numeric(p, alpha, tols=None):
    """
    Renyi information of a Pearson IV law with both cos-form integrals by quadrature.

    Raises
    ------
    DivergenceError
        If the tilted cos exponent 2 alpha (1/(2a) + 1) - 2 is <= -1,
        i.e. alpha <= a / (1 + 2a).
    """
    alpha = float(alpha)
    require(alpha > 0 and alpha != 1.0, "alpha must be positive and not 1")
    k = p.cos_exponent(alpha)
    if not k > -1.0:
        raise DivergenceError(f"integral of f^{alpha} diverges: cos exponent {k} <= -1")
    lg = log_cos_exp_integral(p._nu0, p._p0, "quadrature", tols)
    li = log_cos_exp_integral(k, alpha * p._p0, "quadrature", tols)
    value = (-alpha * lg + li) / (1.0 - alpha)
    rel = (tols or {}).get("rel_tol", 1e-10)
    err = (alpha + 1.0) * rel / abs(1.0 - alpha)
    return MeasureReport("renyi", value, "quadrature", err, alpha)


def pearson_iv_shannon_a1_printed(mu):
    """
    Literal evaluation of a published a = 1 Shannon expression,
    3 {cosh(mu pi/2)/(1 + mu^2) - 3/2 log Gamma'(2) - mu pi/2 tanh(mu pi/2) + Gamma(2) mu^2}.

    Kept for comparison only; it does not agree with the entropy.
    """
    g2 = 1.0 - np.euler_gamma  # Gamma'(2) = psi(2) Gamma(2)
    return 3.0 * (
        math.cosh(0.5 * mu * math.pi) / (1.0 + mu * mu)
        - 1.5 * math.log(g2)
        - 0.5 * mu * math.pi * math.tanh(0.5 * mu * math.pi)
        + mu * mu
    )


def pearson_iv_shannon_a1(mu, tols=None):
    """
    Shannon entropy of the a = 1 Pearson IV law by quadrature.

    The report's value is the quadrature result; ``closed_value`` holds the
    literal published expression and ``discrepancy`` their difference, for
    information only.
    """
    p = PearsonIVParams(1.0, mu)
    oracle = shannon_numeric(p.density(), tols)
    printed = pearson_iv_shannon_a1_printed(mu)
    return MeasureReport(
        "shannon",
        oracle.value,
        "quadrature",
        oracle.abs_err_est,
        None,
        oracle.notes + ("published a = 1 expression reported as closed_value; informational",),
        printed,
        abs(printed - oracle.value),
    )


# -- inverse Gamma, scaled F, Beta -------------------------------------------


@dataclass(frozen=True)
class InvGammaParams(_Pearson):
    """sigma^2 = 2 theta a x^2; invariant law inverse Gamma, shape 1 + 1/a, scale mu/a."""

    a: float
    mu: float
    theta: float = 1.0
    name = "invgamma"

    def __post_init__(self):
        require(self.a > 0 and self.mu > 0 and self.theta > 0, "a, mu and theta must be positive")

    domain = property(lambda self: positive_interval())
    shape = property(lambda self: 1.0 + 1.0 / self.a)
    scale_param = property(lambda self: self.mu / self.a)

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        return -(self.shape + 1.0) * np.log(x) - self.scale_param / x

    def log_normalizer(self):
        return log_gamma(self.shape) - self.shape * math.log(self.scale_param)

    def mode(self):
        return self.scale_param / (self.shape + 1.0)

    def squared_diffusion(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.theta * self.a * x * x

    def alpha_ok(self, alpha):
        return alpha > 0 and alpha * (2.0 + 1.0 / self.a) - 1.0 > 0

    def _renyi(self, alpha):
        k1 = 2.0 + 1.0 / self.a
        return math.log(self.scale_param) + (
            (1.0 - k1 * alpha) * math.log(alpha) + log_gamma(alpha * k1 - 1.0) - alpha * log_gamma(self.shape)
        ) / (1.0 - alpha)

    def shannon(self):
        k = self.shape
        return math.log(self.scale_param) + log_gamma(k) + k - (k + 1.0) * digamma(k)

    def song(self):
        k = self.shape
        return -(k + 2.0) + (k + 1.0) ** 2 * trigamma(k)


@dataclass(frozen=True)
class ScaledFParams(_Pearson):
    """
    sigma^2 = 2 theta a x (x + 1); invariant law Beta prime(mu/a, 1 + 1/a),
    a scaled F law.  Ergodic for mu/a >= 1; the closed forms hold for any
    mu > 0.
    """

    a: float
    mu: float
    theta: float = 1.0
    name = "scaledf"

    def __post_init__(self):
        require(self.a > 0 and self.mu > 0 and self.theta > 0, "a, mu and theta must be positive")

    domain = property(lambda self: positive_interval())
    p = property(lambda self: self.mu / self.a)
    q = property(lambda self: 1.0 + 1.0 / self.a)

    @property
    def ergodic(self):
        return self.p >= 1.0

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        return (self.p - 1.0) * np.log(x) - (self.p + self.q) * np.log1p(x)

    def log_normalizer(self):
        return log_beta(self.p, self.q)

    def mode(self):
        return (self.p - 1.0) / (self.q + 1.0) if self.p > 1.0 else self.mu

    def squared_diffusion(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.theta * self.a * x * (x + 1.0)

    def alpha_ok(self, alpha):
        return alpha > 0 and alpha * (self.p - 1.0) + 1.0 > 0 and alpha * (2.0 + 1.0 / self.a) - 1.0 > 0

    def _renyi(self, alpha):
        b = log_beta(alpha * (self.p - 1.0) + 1.0, alpha * (self.q + 1.0) - 1.0)
        return (-alpha * log_beta(self.p, self.q) + b) / (1.0 - alpha)

    def shannon(self):
        p, q = self.p, self.q
        return log_beta(p, q) - (p - 1.0) * digamma(p) - (q + 1.0) * digamma(q) + (p + q) * digamma(p + q)

    def song(self):
        p, q = self.p, self.q
        return (q + 1.0) ** 2 * trigamma(q) + (p - 1.0) ** 2 * trigamma(p) - (p + q) ** 2 * trigamma(p + q)


@dataclass(frozen=True)
class JacobiParams(_Pearson):
    """
    Jacobi diffusion, sigma^2 = 2 theta a x (x - 1) with a < 0, on (0, 1);
    invariant law Beta(-mu/a, -(1 - mu)/a).  Ergodic (without boundary
    conventions) when min(mu, 1 - mu) >= -a.
    """

    a: float
    mu: float
    theta: float = 1.0
    name = "jacobi"

    def __post_init__(self):
        require(self.a < 0, "a must be negative")
        require(0 < self.mu < 1, "mu must lie in (0, 1)")
        require(self.theta > 0, "theta must be positive")

    domain = property(lambda self: Interval(0.0, 1.0))
    p = property(lambda self: -self.mu / self.a)
    q = property(lambda self: -(1.0 - self.mu) / self.a)

    @property
    def ergodic(self):
        return min(self.mu, 1.0 - self.mu) >= -self.a

    def log_kernel(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return (self.p - 1.0) * np.log(x) + (self.q - 1.0) * np.log1p(-x)

    def log_normalizer(self):
        return log_beta(self.p, self.q)

    def mode(self):
        p, q = self.p, self.q
        if p > 1.0 and q > 1.0:
            return (p - 1.0) / (p + q - 2.0)
        return p / (p + q)

    def squared_diffusion(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.theta * self.a * x * (x - 1.0)

    def alpha_ok(self, alpha):
        return alpha > 0 and alpha * (self.p - 1.0) + 1.0 > 0 and alpha * (self.q - 1.0) + 1.0 > 0

    def _renyi(self, alpha):
        p, q = self.p, self.q
        b = log_beta(alpha * (p - 1.0) + 1.0, alpha * (q - 1.0) + 1.0)
        return (-alpha * log_beta(p, q) + b) / (1.0 - alpha)

    def shannon(self):
        p, q = self.p, self.q
        return log_beta(p, q) - (p - 1.0) * digamma(p) - (q - 1.0) * digamma(q) + (p + q - 2.0) * digamma(p + q)

    def song(self):
        p, q = self.p, self.q
        return (p - 1.0) ** 2 * trigamma(p) + (q - 1.0) ** 2 * trigamma(q) - (p + q - 2.0) ** 2 * trigamma(p + q)


# -- module-level operations -------------------------------------------------


def ou_measures(p, alpha):
    """Renyi (order alpha), Shannon and Song measures of an OU invariant law."""
    return p.measures(alpha)


def cir_measures(p, alpha):
    return p.measures(alpha)


def inverse_gamma_measures(p, alpha):
    return p.measures(alpha)


def scaled_f_measures(p, alpha):
    return p.measures(alpha)


def jacobi_measures(p, alpha):
    return p.measures(alpha)
