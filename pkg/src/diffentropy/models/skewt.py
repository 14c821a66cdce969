"""
Skew-t diffusion with constant diffusion coefficient sigma and Jones-Faddy
skew-t invariant law

    f(x) ∝ (1 + u)^(gamma + 1/2) (1 - u)^(beta + 1/2),   u = x / sqrt(gamma + beta + x^2).

gamma = beta gives Student's t with 2 gamma degrees of freedom.  The drift
is b = sigma^2/2 (log f)'.
"""
from dataclasses import dataclass
import math

import numpy as np

from ..specfun import digamma, log_beta, trigamma
from ._base import Family, real_line, require

__all__ = ["SkewTParams", "skew_t_measures", "skew_t_renyi_limit_printed", "skew_t_drift_printed"]


def _log_one_pm_u(x, c):
    """(log(1 + u), log(1 - u)) without cancellation in either tail."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    r = np.hypot(math.sqrt(c), ax)
    log_r = np.log(r)
    big = np.log(r + ax) - log_r
    # 1 - |x|/r = c / (r (r + |x|))
    small = math.log(c) - np.log(r + ax) - log_r
    pos = x >= 0
    return np.where(pos, big, small), np.where(pos, small, big)


@dataclass(frozen=True)
class SkewTParams(Family):
    gamma: float
    beta: float
    sigma: float = 1.0
    name = "skewt"

    def __post_init__(self):
        require(self.gamma > 0 and self.beta > 0 and self.sigma > 0, "gamma, beta and sigma must be positive")

    domain = property(lambda self: real_line())

    @property
    def c(self):
        return self.gamma + self.beta

    def log_kernel(self, x):
        lp, lm = _log_one_pm_u(x, self.c)
        return (self.gamma + 0.5) * lp + (self.beta + 0.5) * lm

    def log_normalizer(self):
        return log_beta(self.gamma, self.beta) + 0.5 * math.log(self.c) + (self.c - 1.0) * math.log(2.0)

    def mode(self):
        # (gamma - beta) r = (gamma + beta + 1) x with r = sqrt(c + x^2)
        d, c = self.gamma - self.beta, self.c
        return d * math.sqrt(c / ((c + 1.0) ** 2 - d * d))

    def drift(self, x):
        x = np.asarray(x, dtype=float)
        c = self.c
        r = np.hypot(math.sqrt(c), x)
        dlog = (self.gamma * (r - x) - self.beta * (r + x) - x) / (c + x * x)
        return 0.5 * self.sigma**2 * dlog

    def squared_diffusion(self, x):
        return np.full(np.shape(x), self.sigma**2)

    def alpha_ok(self, alpha):
        return alpha > 0 and alpha * (self.gamma + 0.5) - 0.5 > 0 and alpha * (self.beta + 0.5) - 0.5 > 0

    def _renyi(self, alpha):
        g, b = self.gamma, self.beta
        inner = (
            (alpha - 1.0) * math.log(4.0)
            + log_beta(alpha * (g + 0.5) - 0.5, alpha * (b + 0.5) - 0.5)
            - 0.5 * (alpha - 1.0) * math.log(self.c)
            - alpha * log_beta(g, b)
        )
        return inner / (1.0 - alpha)

    def shannon(self):
        g, b = self.gamma, self.beta
        return (
            -(math.log(4.0) - 0.5 * math.log(self.c) - log_beta(g, b))
            - (b + 0.5) * digamma(b)
            - (g + 0.5) * digamma(g)
            + (g + b + 1.0) * digamma(g + b)
        )

    def song(self):
        g, b = self.gamma, self.beta
        return (b + 0.5) ** 2 * trigamma(b) + (g + 0.5) ** 2 * trigamma(g) - (g + b + 1.0) ** 2 * trigamma(g + b)


def skew_t_drift_printed(p, x):
    """
    Published drift sigma^2/2 [gamma (r - x) - beta (r + x)] / r^2, r = sqrt(gamma + beta + x^2).

    It lacks the -x / r^2 term of sigma^2/2 (log f)'; its invariant law is
    the skew-t with parameters (gamma - 1/2, beta - 1/2).  Not used.
    """
    x = np.asarray(x, dtype=float)
    r2 = p.c + x * x
    r = np.sqrt(r2)
    return 0.5 * p.sigma**2 * (p.gamma * (r - x) - p.beta * (r + x)) / r2


def skew_t_renyi_limit_printed(p):
    """Published large-alpha limit log B(gamma, beta) + 1/2 log(gamma + beta) - 2 log 2; kept for comparison."""
    return log_beta(p.gamma, p.beta) + 0.5 * math.log(p.c) - 2.0 * math.log(2.0)


def skew_t_measures(p, alpha):
    return p.measures(alpha)
