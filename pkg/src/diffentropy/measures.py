"""
Information measures of a univariate density by direct quadrature.

These routines are the reference implementation against which every
closed-form expression in :mod:`diffentropy.models` is checked.  All
integrands are assembled from the log-density, so that f^alpha and
f (log f)^k are never formed from an underflowed or overflowed f.

Conventions
-----------
Renyi information    R_alpha = log(∫ f^alpha) / (1 - alpha)
Shannon entropy      R_1 = -∫ f log f
Song measure         S = Var(log f(X)) = -2 dR_alpha/dalpha at alpha = 1
Renyi divergence     D_alpha(f, g) = log(∫ f^alpha g^(1-alpha)) / (alpha (alpha - 1))
Power divergence     Psi_alpha(f, g) = (∫ f^alpha g^(1-alpha) - 1) / (alpha (alpha - 1))

With these signs both divergences are non-negative and tend to the
Kullback-Leibler divergence KL(f || g) as alpha -> 1.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .quadrature import (
    DivergenceError,
    Interval,
    QuadratureError,
    classify_endpoint,
    integrate,
)

__all__ = [
    "MeasureReport",
    "ALPHA_ONE_GUARD",
    "renyi_numeric",
    "shannon_numeric",
    "song_numeric",
    "renyi_divergence",
    "power_divergence",
    "log_power_integral",
]

ALPHA_ONE_GUARD = 1e-6
_NEAR = 0.1  # switch to expm1 forms when alpha is this close to 0 or 1
_LOG_TINY = -745.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MeasureReport:
    """
    A single measure value with its provenance.

    ``method`` is ``"closed"`` or ``"quadrature"``.  Quadrature results
    always carry a positive error estimate.  ``closed_value`` and
    ``discrepancy`` are filled in when a printed closed form is reported
    next to the value actually returned.
    """

    kind: str
    value: float
    method: str
    abs_err_est: float
    alpha: float = None
    notes: tuple = field(default=())
    closed_value: float = None
    discrepancy: float = None

    def __float__(self):
        return float(self.value)


def _tols(tols):
    return dict(tols or {})


def _err(err, value):
    # quadrature results never claim zero error
    return max(float(err), 4.0 * _EPS * abs(value), 1e-300)


def _check_ends(log_g, density, what):
    dom = density.domain
    for end in (dom.lower, dom.upper):
        verdict = classify_endpoint(log_g, density.loc, end, density.scale)
        if verdict == "divergent":
            raise DivergenceError(f"{what} diverges near {end}")


def _integrate_or_diverge(g, domain, hints, tols, what):
    try:
        return integrate(g, domain, **hints, **_tols(tols))
    except QuadratureError as exc:
        raise DivergenceError(f"{what} could not be evaluated and is presumably divergent: {exc}") from exc


def renyi_numeric(f, alpha, tols=None):
    """
    Renyi information of order ``alpha`` by quadrature.

    Parameters
    ----------
    f : Density
        Normalized density (for example an
        :class:`~diffentropy.sde.InvariantDensity`).
    alpha : float
        Order, alpha > 0 and |alpha - 1| >= 1e-6.
    tols : dict, optional
        ``abs_tol`` / ``rel_tol`` / ``max_evaluations`` for the quadrature.

    Returns
    -------
    MeasureReport

    Raises
    ------
    ValueError
        If alpha <= 0 or alpha is within 1e-6 of one (use
        :func:`shannon_numeric`).
    DivergenceError
        If ∫ f^alpha is infinite.
    """
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    if abs(alpha - 1.0) < ALPHA_ONE_GUARD:
        raise ValueError("alpha too close to 1; use shannon_numeric")
    lf = f.logpdf
    _check_ends(lambda x: alpha * lf(x), f, f"integral of f^{alpha}")
    what = f"integral of f^{alpha}"

    if abs(alpha - 1.0) <= _NEAR:
        # ∫ f^alpha = 1 + E_f[expm1((alpha - 1) log f)], no cancellation near 1
        am1 = alpha - 1.0

        def g(x):
            v = lf(x)
            if v < _LOG_TINY:
                return 0.0
            return math.exp(v) * math.expm1(am1 * v)

        res = _integrate_or_diverge(g, f.domain, f.hints, tols, what)
        if not res.value > -1.0:
            raise QuadratureError("integral of f^alpha came out non-positive", best=res)
        value = math.log1p(res.value) / (1.0 - alpha)
        err = res.abs_err_est / ((1.0 + res.value) * abs(1.0 - alpha))
    else:
        shift = alpha * f.log_peak()

        def g(x):
            v = alpha * lf(x) - shift
            return 0.0 if v < _LOG_TINY else math.exp(v)

        res = _integrate_or_diverge(g, f.domain, f.hints, tols, what)
        if not res.value > 0.0:
            raise QuadratureError("integral of f^alpha came out non-positive", best=res)
        value = (shift + math.log(res.value)) / (1.0 - alpha)
        err = res.abs_err_est / (res.value * abs(1.0 - alpha))
    return MeasureReport("renyi", value, "quadrature", _err(err, value), alpha, res.warnings)


def shannon_numeric(f, tols=None):
    """
    Shannon entropy -∫ f log f by quadrature.

    Raises
    ------
    DivergenceError
        If ∫ f |log f| is infinite.
    """
    lf = f.logpdf

    def log_abs(x):
        v = lf(x)
        with np.errstate(divide="ignore"):
            return v + np.log(np.abs(v))

    _check_ends(log_abs, f, "integral of f |log f|")

    def g(x):
        v = lf(x)
        return 0.0 if v < _LOG_TINY else -math.exp(v) * v

    res = _integrate_or_diverge(g, f.domain, f.hints, tols, "integral of f log f")
    return MeasureReport("shannon", res.value, "quadrature", _err(res.abs_err_est, res.value), None, res.warnings)


def song_numeric(f, tols=None):
    """
    Song measure Var(log f(X)) by quadrature.

    Two passes: the Shannon entropy H = -E[log f] first, then the centred
    second moment E[(log f + H)^2], which avoids the cancellation of
    E[(log f)^2] - H^2 when the entropy is large.

    Raises
    ------
    DivergenceError
        If ∫ f (log f)^2 is infinite.
    """
    lf = f.logpdf

    def log_sq(x):
        v = lf(x)
        with np.errstate(divide="ignore"):
            return v + 2.0 * np.log(np.abs(v))

    _check_ends(log_sq, f, "integral of f (log f)^2")
    h = shannon_numeric(f, tols)

    def g(x):
        v = lf(x)
        if v < _LOG_TINY:
            return 0.0
        c = v + h.value
        return math.exp(v) * c * c

    res = _integrate_or_diverge(g, f.domain, f.hints, tols, "integral of f (log f)^2")
    # first-order propagation of the error in H is zero (centred moment)
    return MeasureReport("song", res.value, "quadrature", _err(res.abs_err_est, res.value), None, res.warnings + h.notes)


def _support(f, g, alpha):
    fd, gd = f.domain, g.domain
    if alpha > 1.0:
        if fd.lower < gd.lower or fd.upper > gd.upper:
            raise DivergenceError("support of f is not contained in the support of g")
        return fd
    if alpha < 0.0:
        if gd.lower < fd.lower or gd.upper > fd.upper:
            raise DivergenceError("support of g is not contained in the support of f")
        return gd
    lo, hi = max(fd.lower, gd.lower), min(fd.upper, gd.upper)
    if not lo < hi:
        raise DivergenceError("f and g have disjoint supports")
    return Interval(lo, hi)


def log_power_integral(f, g, alpha, tols=None):
    """
    log ∫ f^alpha g^(1-alpha) together with an absolute error estimate.

    Near alpha = 0 and alpha = 1 (and when the supports coincide) the
    integral is computed as 1 + E[expm1(...)] and returned through log1p,
    so that the divergences keep their relative accuracy as alpha(alpha-1)
    goes to zero.

    Returns
    -------
    (float, float, tuple)
        log integral, error estimate and quadrature notes.
    """
    alpha = float(alpha)
    dom = _support(f, g, alpha)
    lf, lg = f.logpdf, g.logpdf
    same = f.domain == g.domain
    loc = dom.clip(f.loc if f.loc in dom else g.loc)
    scale = max(f.scale, g.scale)
    pts = tuple(p for p in set(f.breakpoints) | set(g.breakpoints) | {f.loc, g.loc} if p in dom)
    hints = {"breakpoints": pts, "center": loc, "scale": scale}

    def log_h(x):
        return alpha * lf(x) + (1.0 - alpha) * lg(x)

    for end in (dom.lower, dom.upper):
        if classify_endpoint(log_h, loc, end, scale) == "divergent":
            raise DivergenceError(f"integral of f^{alpha} g^{1 - alpha} diverges near {end}")
    what = f"integral of f^{alpha} g^{1 - alpha}"

    if same and abs(alpha - 1.0) <= _NEAR:
        am1 = alpha - 1.0

        def h(x):
            u = lf(x)
            if u < _LOG_TINY:
                return 0.0
            return math.exp(u) * math.expm1(am1 * (u - lg(x)))

    elif same and abs(alpha) <= _NEAR:

        def h(x):
            w = lg(x)
            if w < _LOG_TINY:
                return 0.0
            return math.exp(w) * math.expm1(alpha * (lf(x) - w))

    else:
        shift = max(log_h(p) for p in pts + (loc,))

        def h(x):
            v = log_h(x) - shift
            return 0.0 if v < _LOG_TINY else math.exp(v)

        res = _integrate_or_diverge(h, dom, hints, tols, what)
        if not res.value > 0.0:
            raise DivergenceError("f and g are mutually singular on the common support")
        return shift + math.log(res.value), res.abs_err_est / res.value, res.warnings

    res = _integrate_or_diverge(h, dom, hints, tols, what)
    if not res.value > -1.0:
        raise QuadratureError("power integral came out non-positive", best=res)
    return math.log1p(res.value), res.abs_err_est / (1.0 + res.value), res.warnings


def _check_alpha(alpha):
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha == 0.0 or alpha == 1.0:
        raise ValueError(f"alpha must be finite and not 0 or 1, got {alpha}")
    return alpha


def renyi_divergence(f, g, alpha, tols=None):
    """
    Renyi divergence D_alpha(f || g) = log(∫ f^alpha g^(1-alpha)) / (alpha (alpha - 1)).

    Non-negative, zero iff f = g, and equal to KL(f || g) in the limit
    alpha -> 1.

    Raises
    ------
    ValueError
        For alpha in {0, 1}.
    DivergenceError
        On incompatible supports or an infinite integral.
    """
    alpha = _check_alpha(alpha)
    log_i, err, notes = log_power_integral(f, g, alpha, tols)
    k = alpha * (alpha - 1.0)
    value = log_i / k
    return MeasureReport("renyi_divergence", value, "quadrature", _err(err / abs(k), value), alpha, notes)


def power_divergence(f, g, alpha, tols=None):
    """
    Power (Box-Cox) divergence Psi_alpha = (e^(alpha (alpha-1) D_alpha) - 1) / (alpha (alpha - 1)).

    Equivalently (∫ f^alpha g^(1-alpha) - 1) / (alpha (alpha - 1)); it
    agrees with D_alpha to first order when alpha(alpha-1) D_alpha is
    small.
    """
    alpha = _check_alpha(alpha)
    log_i, err, notes = log_power_integral(f, g, alpha, tols)
    k = alpha * (alpha - 1.0)
    value = math.expm1(log_i) / k
    return MeasureReport(
        "power_divergence", value, "quadrature", _err(err * math.exp(log_i) / abs(k), value), alpha, notes
    )
