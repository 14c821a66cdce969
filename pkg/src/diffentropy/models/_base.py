"""Shared machinery for the parametric families."""
from dataclasses import dataclass
import math

import numpy as np

from ..density import Density, from_log_kernel
from ..measures import MeasureReport
from ..quadrature import DivergenceError, Interval
from ..sde import DiffusionSpec

__all__ = ["MeasureTriple", "Family", "closed_report", "require"]


@dataclass(frozen=True)
class MeasureTriple:
    """Renyi information at one order plus the Shannon entropy and Song measure."""

    renyi: MeasureReport
    shannon: MeasureReport
    song: MeasureReport = None

    def __iter__(self):
        return iter((self.renyi, self.shannon, self.song))


def closed_report(kind, value, alpha=None, notes=(), printed=None):
    """Wrap a closed-form value; ``printed`` records a differing published value."""
    disc = None if printed is None else abs(printed - value)
    return MeasureReport(kind, float(value), "closed", 0.0, alpha, tuple(notes), printed, disc)


def require(condition, message, exc=ValueError):
    if not condition:
        raise exc(message)


class Family:
    """
    Base class of the parameter records.

    Subclasses implement ``domain``, ``log_kernel``, ``log_normalizer``,
    ``mode``, ``drift``, ``squared_diffusion`` and the closed forms
    ``_renyi``, ``shannon`` and (where available) ``song``; ``alpha_ok``
    states the validity region of ``_renyi``.
    """

    name = "family"
    song_available = True

    # -- density -----------------------------------------------------------
    @property
    def domain(self):
        raise NotImplementedError

    def log_kernel(self, x):
        raise NotImplementedError

    def log_normalizer(self):
        raise NotImplementedError

    def logpdf(self, x):
        return self.log_kernel(x) - self.log_normalizer()

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def mode(self):
        raise NotImplementedError

    @property
    def loc(self):
        return self.domain.clip(self.mode())

    @property
    def scale(self):
        """Curvature length scale of the log-density at the mode."""
        x0 = self.loc
        dom = self.domain
        for rel in (1e-3, 1e-2, 1e-1):
            h = rel * max(1.0, abs(x0))
            if math.isfinite(dom.lower):
                h = min(h, 0.5 * (x0 - dom.lower))
            if math.isfinite(dom.upper):
                h = min(h, 0.5 * (dom.upper - x0))
            lk = self.log_kernel
            curv = -(lk(x0 + h) - 2.0 * lk(x0) + lk(x0 - h)) / (h * h)
            if math.isfinite(curv) and curv > 1e-12:
                w = 1.0 / math.sqrt(curv)
                break
        else:
            w = 1.0
        if dom.finite:
            w = min(w, 0.25 * (dom.upper - dom.lower))
        return float(w)

    def density(self, normalize="closed", tols=None):
        """
        The invariant law as a :class:`~diffentropy.density.Density`.

        ``normalize="closed"`` uses the analytic normalizing constant,
        ``"quadrature"`` recomputes it numerically from the kernel.
        """
        if normalize == "closed":
            return Density(self.logpdf, self.domain, self.loc, self.scale, (), self.name)
        if normalize == "quadrature":
            dens, _ = from_log_kernel(self.log_kernel, self.domain, self.loc, self.scale, (), self.name, tols)
            return dens
        raise ValueError(f"normalize must be 'closed' or 'quadrature', not {normalize!r}")

    # -- process -----------------------------------------------------------
    def drift(self, x):
        raise NotImplementedError

    def squared_diffusion(self, x):
        raise NotImplementedError

    @property
    def ergodic(self):
        return True

    def diffusion(self, reference=None):
        """:class:`~diffentropy.sde.DiffusionSpec` with this family's coefficients."""
        ref = self.loc if reference is None else reference
        return DiffusionSpec(self.drift, self.squared_diffusion, self.domain, ref, self.scale, name=self.name)

    # -- measures ----------------------------------------------------------
    def alpha_ok(self, alpha):
        return alpha > 0

    def _renyi(self, alpha):
        raise NotImplementedError

    def renyi(self, alpha):
        """Closed-form Renyi information; the Shannon entropy at alpha = 1."""
        alpha = float(alpha)
        require(alpha > 0 and not math.isnan(alpha), f"alpha must be positive, got {alpha}")
        if alpha == 1.0:
            return self.shannon()
        if not self.alpha_ok(alpha):
            raise DivergenceError(f"{self.name}: integral of f^{alpha} diverges")
        return float(self._renyi(alpha))

    def shannon(self):
        raise NotImplementedError

    def song(self):
        raise NotImplementedError(f"{self.name}: no closed-form Song measure")

    def measures(self, alpha):
        song = closed_report("song", self.song()) if self.song_available else None
        return MeasureTriple(
            closed_report("renyi", self.renyi(alpha), alpha),
            closed_report("shannon", self.shannon()),
            song,
        )


def positive_interval():
    return Interval(0.0, math.inf)


def real_line():
    return Interval(-math.inf, math.inf)
