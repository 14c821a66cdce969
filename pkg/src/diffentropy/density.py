"""
Univariate densities described by their log-density.

A :class:`Density` carries, besides ``logpdf``, the hints the quadrature
needs to place its effort: a typical location, a length scale and any
interior kink points.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .quadrature import Interval, integrate

__all__ = [
    "Density",
    "from_log_kernel",
    "normal",
    "laplace",
    "cauchy",
    "student_t",
    "uniform",
    "affine",
]

_LOG_TINY = -745.0  # exp underflows to zero below this


@dataclass(frozen=True)
class Density:
    logpdf: object
    domain: Interval
    loc: float = 0.0
    scale: float = 1.0
    breakpoints: tuple = field(default=())
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.domain, Interval):
            object.__setattr__(self, "domain", Interval(*self.domain))
        object.__setattr__(self, "loc", self.domain.clip(float(self.loc)))

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def __call__(self, x):
        return self.pdf(x)

    @property
    def hints(self):
        """Keyword hints for :func:`~diffentropy.quadrature.integrate`."""
        pts = tuple(self.breakpoints)
        if self.loc not in pts:
            pts = pts + (self.loc,)
        return {"breakpoints": pts, "center": self.loc, "scale": self.scale}

    def log_peak(self, samples=41):
        """Largest log-density over a coarse probe of the bulk."""
        return max(_probe_logs(self.logpdf, self.domain, self.loc, self.scale, samples, self.breakpoints))


def _probe_points(domain, loc, scale, samples, extra=()):
    offs = np.linspace(-8.0, 8.0, samples) * scale
    xs = [loc + o for o in offs] + list(extra)
    return [x for x in xs if x in domain]


def _probe_logs(logf, domain, loc, scale, samples=41, extra=()):
    out = []
    for x in _probe_points(domain, loc, scale, samples, extra):
        v = float(logf(x))
        if not math.isnan(v):
            out.append(v)
    return out or [float(logf(loc))]


def from_log_kernel(log_kernel, domain, loc=0.0, scale=1.0, breakpoints=(), name="", tols=None):
    """
    Normalize an unnormalized log-density by quadrature.

    Returns the :class:`Density` together with the log normalizing
    constant log ∫ exp(log_kernel).
    """
    domain = domain if isinstance(domain, Interval) else Interval(*domain)
    loc = domain.clip(loc)
    shift = max(_probe_logs(log_kernel, domain, loc, scale, 41, breakpoints))
    tols = tols or {}

    def g(x):
        v = log_kernel(x) - shift
        return 0.0 if v < _LOG_TINY else math.exp(v)

    pts = tuple(breakpoints) + ((loc,) if loc not in breakpoints else ())
    res = integrate(g, domain, breakpoints=pts, center=loc, scale=scale, **tols)
    log_norm = shift + math.log(res.value)

    def logpdf(x):
        return log_kernel(x) - log_norm

    return Density(logpdf, domain, loc, scale, tuple(breakpoints), name), log_norm


def normal(mu=0.0, sigma=1.0):
    c = -0.5 * math.log(2.0 * math.pi) - math.log(sigma)

    def logpdf(x):
        z = (x - mu) / sigma
        return c - 0.5 * z * z

    return Density(logpdf, Interval(-math.inf, math.inf), mu, sigma, (), f"normal({mu}, {sigma})")


def laplace(mu=0.0, b=1.0):
    c = -math.log(2.0 * b)

    def logpdf(x):
        return c - np.abs(x - mu) / b

    # the kink at mu is passed to quadrature as a breakpoint
    return Density(logpdf, Interval(-math.inf, math.inf), mu, b, (mu,), f"laplace({mu}, {b})")


def cauchy(mu=0.0, gamma=1.0):
    c = -math.log(math.pi * gamma)

    def logpdf(x):
        z = (x - mu) / gamma
        return c - np.log1p(z * z)

    return Density(logpdf, Interval(-math.inf, math.inf), mu, gamma, (), f"cauchy({mu}, {gamma})")


def student_t(df, mu=0.0, sigma=1.0):
    c = (
        math.lgamma((df + 1) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * math.log(df * math.pi)
        - math.log(sigma)
    )

    def logpdf(x):
        z = (x - mu) / sigma
        return c - (df + 1) / 2.0 * np.log1p(z * z / df)

    return Density(logpdf, Interval(-math.inf, math.inf), mu, sigma, (), f"t({df})")


def uniform(lower=0.0, upper=1.0):
    c = -math.log(upper - lower)

    def logpdf(x):
        return c + 0.0 * x

    mid = 0.5 * (lower + upper)
    return Density(logpdf, Interval(lower, upper), mid, 0.25 * (upper - lower), (), f"uniform({lower}, {upper})")


def affine(density, mu, sigma):
    """Density of mu + sigma X when X has ``density``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    ls = math.log(sigma)
    base = density.logpdf

    def logpdf(x):
        return base((x - mu) / sigma) - ls

    dom = Interval(mu + sigma * density.domain.lower, mu + sigma * density.domain.upper)
    pts = tuple(mu + sigma * p for p in density.breakpoints)
    return Density(
        logpdf,
        dom,
        mu + sigma * density.loc,
        sigma * density.scale,
        pts,
        f"{density.name} * {sigma} + {mu}",
    )
