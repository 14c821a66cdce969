"""
Hyperbolic diffusion

    dX = sigma^2/2 {beta - gamma (X - mu) / sqrt(delta^2 + (X - mu)^2)} dt + sigma dW,

whose invariant law is the hyperbolic distribution
f(x) ∝ exp(-gamma sqrt(delta^2 + (x - mu)^2) + beta (x - mu)).
All measures depend on the parameters only through z = delta sqrt(gamma^2 - beta^2)
and the prefactor sqrt(gamma^2 - beta^2) / (2 gamma delta).
"""
from dataclasses import dataclass
import math

import numpy as np

from ..specfun import log_bessel_k
from ._base import Family, MeasureTriple, closed_report, real_line, require

__all__ = ["HyperbolicParams", "hyperbolic_measures", "hyperbolic_song_printed", "hyperbolic_renyi_limit_printed"]


@dataclass(frozen=True)
class HyperbolicParams(Family):
    gamma: float
    beta: float = 0.0
    delta: float = 1.0
    mu: float = 0.0
    sigma: float = 1.0
    name = "hyperbolic"

    def __post_init__(self):
        require(self.gamma > abs(self.beta), "gamma must exceed |beta|")
        require(self.delta > 0 and self.sigma > 0, "delta and sigma must be positive")

    domain = property(lambda self: real_line())

    @property
    def kappa(self):
        return math.sqrt(self.gamma**2 - self.beta**2)

    @property
    def z(self):
        return self.delta * self.kappa

    def _log_pref(self):
        # log(sqrt(gamma^2 - beta^2) / (2 gamma delta))
        return math.log(self.kappa) - math.log(2.0 * self.gamma * self.delta)

    def _k_ratio(self):
        # K_0(z) / K_1(z)
        return math.exp(log_bessel_k(0.0, self.z) - log_bessel_k(1.0, self.z))

    def log_kernel(self, x):
        y = np.asarray(x, dtype=float) - self.mu
        return -self.gamma * np.hypot(self.delta, y) + self.beta * y

    def log_normalizer(self):
        return -self._log_pref() + log_bessel_k(1.0, self.z)

    def mode(self):
        return self.mu + self.beta * self.delta / self.kappa

    def drift(self, x):
        y = np.asarray(x, dtype=float) - self.mu
        return 0.5 * self.sigma**2 * (self.beta - self.gamma * y / np.hypot(self.delta, y))

    def squared_diffusion(self, x):
        return np.full(np.shape(x), self.sigma**2)

    def _renyi(self, alpha):
        z = self.z
        return -self._log_pref() + (log_bessel_k(1.0, alpha * z) - alpha * log_bessel_k(1.0, z)) / (1.0 - alpha)

    def shannon(self):
        return log_bessel_k(1.0, self.z) - self._log_pref() + 1.0 + self.z * self._k_ratio()

    def song(self):
        # z^2 (1 - (K0^2 + K0 K2) / (2 K1^2)) + 1, simplified with K2 = K0 + 2 K1 / z
        z, r = self.z, self._k_ratio()
        return 1.0 + z * z * (1.0 - r * r) - z * r

    def measures(self, alpha):
        printed = hyperbolic_song_printed(self)
        note = "1 + z^2 (K0 K2 - K0^2) / (2 K1^2) disagrees with Var(log f); not used"
        return MeasureTriple(
            closed_report("renyi", self.renyi(alpha), alpha),
            closed_report("shannon", self.shannon()),
            closed_report("song", self.song(), None, (note,), printed),
        )


def hyperbolic_song_printed(p):
    """Published closed form 1 + z^2 (K0 K2 - K0^2)/(2 K1^2) = 1 + z K0/K1, kept for comparison."""
    return 1.0 + p.z * p._k_ratio()


def hyperbolic_renyi_limit_printed(p):
    """
    Published large-alpha limit -log(sqrt(gamma^2 - beta^2)/(2 gamma delta)) + log K_1(z).

    The actual limit -log sup f is larger by z.
    """
    return -p._log_pref() + log_bessel_k(1.0, p.z)


def hyperbolic_measures(p, alpha):
    return p.measures(alpha)
