"""
Scale function, speed measure and invariant density of a one-dimensional
diffusion dX = b(X) dt + sigma(X) dW on a state space (l, r).

With J(x) = ∫_{x~}^x b(y) / sigma^2(y) dy the scale density is
s(x) = exp(-2 J(x)), the speed density m(x) = 1 / (sigma^2(x) s(x)) and,
when G = ∫ m is finite, the invariant law is f = m / G.

J is computed once per specification on a panel grid that starts at the
reference point and grows geometrically towards both ends of the state
space; each panel is integrated with adaptive Gauss-Legendre rules and the
partial integral up to an arbitrary x is completed by a Gauss-Legendre rule
on the last partial panel.  There is no interpolation error.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import minimize_scalar

from .density import Density, from_log_kernel
from .quadrature import DivergenceError, Interval, classify_endpoint

__all__ = [
    "DiffusionSpec",
    "InvariantDensity",
    "ErgodicityReport",
    "NotErgodicError",
    "CumulativeIntegral",
    "scale_function",
    "log_scale_function",
    "speed_density",
    "log_speed_density",
    "invariant_density",
    "ergodicity_check",
]

_GL20 = leggauss(20)
_GL10 = leggauss(10)
_MAX_PANELS = 20_000
_EPS = np.finfo(float).eps


class NotErgodicError(DivergenceError):
    """The speed measure has infinite mass."""


def _vectorized(func):
    """Wrap a scalar or vector callable so it maps float arrays to float arrays."""

    def call(x):
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(func(x), dtype=float)
            if y.shape == x.shape:
                return y
            if y.shape == ():
                return np.full(x.shape, float(y))
        except (TypeError, ValueError):
            pass
        return np.vectorize(lambda t: float(func(float(t))), otypes=[float])(x)

    return call


def _gl(h, a, b, rule):
    nodes, weights = rule
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * nodes
    with np.errstate(all="ignore"):
        return half * np.sum(weights * h(x), axis=-1)


class CumulativeIntegral:
    """
    x -> ∫_anchor^x h(y) dy on a cached, adaptively refined panel grid.

    Parameters
    ----------
    h : callable
        Integrand, vectorized over numpy arrays (scalar callables are wrapped).
    domain : Interval
        Open interval on which h is smooth.
    anchor : float
        Interior point where the integral vanishes.
    scale : float
        Width of the first panels on an infinite side.
    """

    def __init__(self, h, domain, anchor, scale=1.0, rel_tol=1e-15):
        self.h = _vectorized(h)
        self.domain = domain if isinstance(domain, Interval) else Interval(*domain)
        if anchor not in self.domain:
            raise ValueError(f"anchor {anchor} is not interior to {self.domain}")
        self.anchor = float(anchor)
        self.scale = float(scale)
        self.rel_tol = rel_tol
        right_x, right_v = self._side(self.domain.upper, +1)
        left_x, left_v = self._side(self.domain.lower, -1)
        self.nodes = np.concatenate([left_x[::-1], [self.anchor], right_x])
        self.values = np.concatenate([left_v[::-1], [0.0], right_v])

    def _raw_nodes(self, end, sign):
        a = self.anchor
        out = []
        if math.isinf(end):
            k = 0
            while True:
                x = a + sign * self.scale * (2.0**k)
                if abs(x) > 1e250:
                    break
                out.append(x)
                k += 1
        else:
            d = end - a
            k = 1
            prev = a
            while True:
                x = end - d * 2.0 ** (-k)
                # stay clear of subnormal distances from the end
                if x == prev or x == end or abs(x - end) < 1e-290:
                    break
                out.append(x)
                prev = x
                k += 1
        return out

    def _panel(self, a, b, depth=0):
        fine = _gl(self.h, np.array([a]), np.array([b]), _GL20)[0]
        coarse = _gl(self.h, np.array([a]), np.array([b]), _GL10)[0]
        if not math.isfinite(fine):
            return [(b, fine)]
        # integrand values below ~1e-280 are noise; subnormal tails would bisect forever
        floor = 1e-280 * (b - a)
        # nodes are rounded to doubles: near a singular end this alone perturbs h by eps |x| |h'|
        with np.errstate(all="ignore"):
            ha, hb = self.h(np.array([a, b]))
        rounding = 4.0 * _EPS * max(abs(a), abs(b)) * abs(hb - ha)
        if not math.isfinite(rounding):
            rounding = 0.0
        tol = 10 * self.rel_tol * max(abs(fine), floor) + rounding
        if abs(fine - coarse) <= tol or depth > 30:
            return [(b, fine)]
        m = 0.5 * (a + b)
        if m == a or m == b:
            return [(b, fine)]
        return self._panel(a, m, depth + 1) + self._panel(m, b, depth + 1)

    def _side(self, end, sign):
        xs, vs = [], []
        total = 0.0
        prev = self.anchor
        for x in self._raw_nodes(end, sign):
            for node, piece in self._panel(prev, x) if sign > 0 else self._panel_rev(prev, x):
                total = total + piece
                xs.append(node)
                vs.append(total)
                if not math.isfinite(total) or abs(total) > 1e300 or len(xs) > _MAX_PANELS:
                    return np.array(xs), np.array(vs)
            prev = x
        return np.array(xs), np.array(vs)

    def _panel_rev(self, a, b):
        # integrate from a down to b (b < a): ∫_a^b h = -∫_b^a h
        parts = self._panel(b, a)
        # parts are ordered upward from b; re-express as downward steps from a
        edges = [b] + [p for p, _ in parts[:-1]]
        out = []
        for (node, piece), lower in zip(reversed(parts), reversed(edges)):
            out.append((lower, -piece))
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        idx = np.searchsorted(self.nodes, flat)
        # nearest grid node on the anchor side of x
        idx = np.where(flat >= self.anchor, idx - 1, idx)
        idx = np.clip(idx, 0, len(self.nodes) - 1)
        start = self.nodes[idx]
        out = self.values[idx] + _gl(self.h, start, flat, _GL20)
        out = np.where(flat == start, self.values[idx], out)
        return out.reshape(x.shape) if x.shape else float(out[0])


@dataclass(frozen=True)
class DiffusionSpec:
    """
    Coefficients of dX = b(X) dt + sigma(X) dW.

    ``drift`` and ``squared_diffusion`` map floats (or float arrays) to
    floats; sigma^2 must be positive inside ``state_space``.  ``reference``
    is the point x~ where the scale function equals one and ``scale`` a
    rough length scale of the dynamics.  ``reflecting`` declares that
    attainable boundaries are instantaneously reflecting.
    """

    drift: object
    squared_diffusion: object
    state_space: Interval
    reference: float
    scale: float = 1.0
    reflecting: bool = False
    x0: float = None
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.state_space, Interval):
            object.__setattr__(self, "state_space", Interval(*self.state_space))
        if self.reference not in self.state_space:
            raise ValueError(f"reference point {self.reference} is not interior to the state space")
        s2 = float(_vectorized(self.squared_diffusion)(np.array([self.reference]))[0])
        if not s2 > 0:
            raise ValueError(f"squared diffusion must be positive, got {s2} at {self.reference}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")


@lru_cache(maxsize=128)
def _drift_ratio_integral(spec):
    b = _vectorized(spec.drift)
    s2 = _vectorized(spec.squared_diffusion)

    def ratio(x):
        return b(x) / s2(x)

    return CumulativeIntegral(ratio, spec.state_space, spec.reference, spec.scale)


def log_scale_function(spec, x):
    """log s(x) = -2 ∫_{x~}^x b / sigma^2."""
    return -2.0 * _drift_ratio_integral(spec)(x)


def scale_function(spec, x):
    """Scale density s(x); equals one at the reference point."""
    return np.exp(log_scale_function(spec, x))


def log_speed_density(spec, x):
    """log m(x) = -log sigma^2(x) - log s(x)."""
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        s2 = _vectorized(spec.squared_diffusion)(np.asarray(x, dtype=float))
        out = 2.0 * _drift_ratio_integral(spec)(x) - np.log(s2)
    return out if np.ndim(out) else float(out)


def speed_density(spec, x):
    """Speed density m(x) = 1 / (sigma^2(x) s(x))."""
    return np.exp(log_speed_density(spec, x))


@dataclass(frozen=True)
class InvariantDensity(Density):
    """Normalized invariant law f = m / G built from a :class:`DiffusionSpec`."""

    log_m: object = None
    log_G: float = 0.0
    spec: DiffusionSpec = None

    @property
    def G(self):
        return math.exp(self.log_G)

    def m(self, x):
        return np.exp(self.log_m(x))


@dataclass(frozen=True)
class ErgodicityReport:
    speed_integral_finite: bool
    left_scale_divergent: bool
    right_scale_divergent: bool
    verdict: str
    details: dict = field(default_factory=dict)


def _as_bool(label):
    return {"finite": True, "divergent": False}.get(label)


def _mode_and_width(logf, nodes, domain, fallback):
    inner = nodes[(nodes > domain.lower) & (nodes < domain.upper)]
    vals = np.array([logf(x) for x in inner])
    vals = np.where(np.isnan(vals), -np.inf, vals)
    i = int(np.argmax(vals))
    if i <= 1 or i >= len(inner) - 2:
        # density unbounded or monotone towards an end: no interior mode
        return None
    lo = inner[i - 1] if i > 0 else 0.5 * (domain.lower + inner[i]) if math.isfinite(domain.lower) else inner[i] - fallback
    hi = inner[i + 1] if i + 1 < len(inner) else 0.5 * (domain.upper + inner[i]) if math.isfinite(domain.upper) else inner[i] + fallback
    opt = minimize_scalar(lambda t: -logf(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10 * max(1.0, abs(hi - lo))})
    mode = float(opt.x) if opt.success and math.isfinite(opt.fun) else float(inner[i])
    mode = domain.clip(mode)
    width = fallback
    for step in (1e-3, 1e-2, 1e-1):
        h = step * min(fallback, max(abs(mode - domain.lower), 1e-300), max(abs(domain.upper - mode), 1e-300))
        if mode - h in domain and mode + h in domain:
            curv = -(logf(mode + h) - 2.0 * logf(mode) + logf(mode - h)) / (h * h)
            if math.isfinite(curv) and curv > 0:
                width = 1.0 / math.sqrt(curv)
                break
    if math.isfinite(domain.lower) and math.isfinite(domain.upper):
        width = min(width, domain.upper - domain.lower)
    return mode, width


def invariant_density(spec, tols=None):
    """
    Normalized invariant density of ``spec``.

    The speed measure is probed at both ends for integrability first; the
    normalizer G is then computed by quadrature of m over the state space.
    A finite G is all that is required: boundaries that still need a
    reflection convention do not prevent construction.

    Raises
    ------
    NotErgodicError
        If ∫ m diverges at either end.
    """
    lm = lambda x: log_speed_density(spec, x)  # noqa: E731
    dom = spec.state_space
    for end in (dom.lower, dom.upper):
        if classify_endpoint(lm, spec.reference, end, spec.scale) == "divergent":
            raise NotErgodicError(f"speed measure is not integrable near {end}")
    cum = _drift_ratio_integral(spec)
    found = _mode_and_width(lm, cum.nodes, dom, spec.scale)
    loc, width = found if found is not None else (spec.reference, spec.scale)
    dens, log_G = from_log_kernel(lm, dom, loc, width, name=spec.name, tols=tols)
    return InvariantDensity(
        dens.logpdf, dom, loc, width, (), spec.name, log_m=lm, log_G=log_G, spec=spec
    )


def ergodicity_check(spec):
    """
    Classify a diffusion numerically.

    The speed density must be integrable over the state space and the scale
    density must fail to be integrable at both ends.  When ∫ m is finite
    but some scale integral converges the boundary is attainable: the
    verdict is ``needs_reflection`` if ``spec.reflecting`` is set and
    ``not_ergodic`` otherwise.  Any undecidable probe makes the verdict
    ``inconclusive``.
    """
    lm = lambda x: log_speed_density(spec, x)  # noqa: E731
    ls = lambda x: log_scale_function(spec, x)  # noqa: E731
    dom = spec.state_space
    d = {
        "speed_left": classify_endpoint(lm, spec.reference, dom.lower, spec.scale),
        "speed_right": classify_endpoint(lm, spec.reference, dom.upper, spec.scale),
        "scale_left": classify_endpoint(ls, spec.reference, dom.lower, spec.scale),
        "scale_right": classify_endpoint(ls, spec.reference, dom.upper, spec.scale),
    }
    speed = (d["speed_left"], d["speed_right"])
    scale = (d["scale_left"], d["scale_right"])
    if "divergent" in speed:
        verdict = "not_ergodic"
        speed_finite = False
    elif "inconclusive" in speed:
        verdict = "inconclusive"
        speed_finite = None
    else:
        speed_finite = True
        if scale == ("divergent", "divergent"):
            verdict = "ergodic"
        elif "inconclusive" in scale:
            verdict = "inconclusive"
        else:
            verdict = "needs_reflection" if spec.reflecting else "not_ergodic"
    left = {"divergent": True, "finite": False}.get(d["scale_left"])
    right = {"divergent": True, "finite": False}.get(d["scale_right"])
    return ErgodicityReport(speed_finite, left, right, verdict, d)
