"""
The Renyi spectrum alpha -> R_alpha and the quantities read off it.

R_alpha is nonincreasing in alpha and its slope at alpha = 1 gives the
Song measure, S = -2 dR/dalpha.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .density import Density
from .measures import MeasureReport, renyi_numeric, shannon_numeric, song_numeric
from .quadrature import DivergenceError, QuadratureError

__all__ = [
    "DEFAULT_ALPHAS",
    "SpectrumRow",
    "SpectrumTable",
    "renyi_value",
    "compute_spectrum",
    "gradient_at",
    "song_from_spectrum",
    "tail_order",
]

DEFAULT_ALPHAS = np.geomspace(0.25, 16.0, 33)
TIE_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumRow:
    """One grid point; ``renyi`` is None when the row is flagged."""

    alpha: float
    renyi: float
    method: str
    err: float
    flag: str = ""


@dataclass(frozen=True)
class SpectrumTable:
    rows: tuple
    gradient: tuple = field(default=None)

    @property
    def alphas(self):
        return np.array([r.alpha for r in self.rows])

    @property
    def values(self):
        """Renyi column with NaN in flagged rows."""
        return np.array([np.nan if r.renyi is None else r.renyi for r in self.rows])

    def row(self, alpha):
        for r in self.rows:
            if r.alpha == alpha:
                return r
        raise KeyError(alpha)

    def is_monotone(self, abs_tol=1e-12):
        """Nonincreasing over the finite rows, up to twice the row error estimates."""
        good = [r for r in self.rows if r.renyi is not None]
        for a, b in zip(good, good[1:]):
            if b.renyi > a.renyi + 2.0 * (a.err + b.err) + abs_tol * max(1.0, abs(a.renyi)):
                return False
        return True


def _closed(obj):
    return hasattr(obj, "_renyi") and hasattr(obj, "density")


def _as_density(obj):
    if isinstance(obj, Density):
        return obj
    if hasattr(obj, "density"):
        return obj.density()
    raise TypeError(f"cannot interpret {type(obj).__name__} as a density or model")


def renyi_value(obj, alpha, tols=None, prefer="closed"):
    """
    R_alpha of a model or density as a :class:`MeasureReport`; the Shannon
    entropy at alpha = 1.

    Families with closed forms use them unless ``prefer="quadrature"``;
    everything else goes through the quadrature oracle.  Divergence raises
    :class:`DivergenceError`.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if prefer == "closed" and _closed(obj):
        try:
            value = obj.shannon() if alpha == 1.0 else obj.renyi(alpha)
            kind = "shannon" if alpha == 1.0 else "renyi"
            return MeasureReport(kind, float(value), "closed", 0.0, None if alpha == 1.0 else alpha)
        except (NotImplementedError, ValueError):
            pass
    dens = _as_density(obj)
    if alpha == 1.0:
        return shannon_numeric(dens, tols)
    return renyi_numeric(dens, alpha, tols)


def _row(obj, alpha, tols, prefer):
    try:
        rep = renyi_value(obj, alpha, tols, prefer)
    except DivergenceError:
        return SpectrumRow(alpha, None, _method_for(obj, prefer), math.nan, "divergent")
    except QuadratureError:
        return SpectrumRow(alpha, None, "quadrature", math.nan, "quadrature-failed")
    return SpectrumRow(alpha, rep.value, rep.method, rep.abs_err_est, "shannon" if alpha == 1.0 else "")


def _method_for(obj, prefer):
    return "closed" if prefer == "closed" and _closed(obj) else "quadrature"


def compute_spectrum(obj, alphas=None, tols=None, prefer="closed"):
    """
    Renyi spectrum over an increasing alpha grid plus the alpha = 1
    Shannon row.

    Parameters
    ----------
    obj : Family, ExpFamSpec or Density
    alphas : sequence of float, optional
        Positive, strictly increasing; a 1 in the grid is treated as the
        Shannon row.  Defaults to 33 geometric points on [0.25, 16].
    prefer : {"closed", "quadrature"}

    Returns
    -------
    SpectrumTable
        Divergent orders are kept as rows flagged ``divergent``.
    """
    alphas = DEFAULT_ALPHAS if alphas is None else alphas
    alphas = [float(a) for a in alphas]
    if any(not a > 0 for a in alphas):
        raise ValueError("alphas must be positive")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly increasing")
    grid = sorted(set(alphas) | {1.0})
    return SpectrumTable(tuple(_row(obj, a, tols, prefer) for a in grid))


def _table_value(table, alpha):
    try:
        r = table.row(alpha)
    except KeyError:
        raise ValueError(f"alpha = {alpha} is not on the table grid") from None
    if r.renyi is None:
        raise DivergenceError(f"R_{alpha} is flagged {r.flag}")
    return r.renyi


def gradient_at(obj, alpha, h=1e-3, tols=None):
    """
    Central difference (R_{alpha+h} - R_{alpha-h}) / (2h).

    ``obj`` may be a :class:`SpectrumTable` holding both neighbours on its
    grid, or anything :func:`renyi_value` accepts.
    """
    alpha, h = float(alpha), float(h)
    if not h > 0 or not alpha - h > 0:
        raise ValueError(f"need 0 < h < alpha, got alpha = {alpha}, h = {h}")
    if isinstance(obj, SpectrumTable):
        up, down = _table_value(obj, alpha + h), _table_value(obj, alpha - h)
    else:
        up = renyi_value(obj, alpha + h, tols).value
        down = renyi_value(obj, alpha - h, tols).value
    return (up - down) / (2.0 * h)


def song_from_spectrum(obj, h=1e-3, tols=None):
    """
    S = -2 dR/dalpha at alpha = 1 by central differences.

    The error estimate compares the step h with h/2 (Richardson, second
    order).
    """
    if not 0 < h <= 0.1:
        raise ValueError("h must lie in (0, 0.1]")
    coarse = -2.0 * gradient_at(obj, 1.0, h, tols)
    fine = -2.0 * gradient_at(obj, 1.0, 0.5 * h, tols)
    return MeasureReport("song", coarse, "spectrum-gradient", 4.0 / 3.0 * abs(coarse - fine))


def tail_order(f, g, tols=None, tie_tol=TIE_TOL):
    """
    Compare tails through the Song measure: ``"f_precedes_g"`` when
    S(f) < S(g) beyond ``tie_tol``, ``"g_precedes_f"`` in the opposite case
    and ``"equal_within_tol"`` otherwise.
    """
    sf = song_numeric(_as_density(f), tols).value
    sg = song_numeric(_as_density(g), tols).value
    if abs(sf - sg) <= tie_tol:
        return "equal_within_tol"
    return "f_precedes_g" if sf < sg else "g_precedes_f"
