"""
Command line interface.

    diffentropy entropy    -m model.json --measure renyi --alpha 2
    diffentropy spectrum   --set family=ou --alpha-min 0.5 --alpha-max 4 --steps 8 --out ou.csv
    diffentropy validate   --set family=gig --set theta1=-0.5 --set theta2=1 --set theta3=1
    diffentropy divergence --set family=ou --set-g family=ou --set-g mu=1 --alpha 0.5

A model is a JSON document such as ``{"family": "cir", "params": {"mu": 2}}``.
``--set key=value`` overrides or adds entries; keys other than the
top-level ones listed in ``TOP_KEYS`` go into ``params``.

Exit codes: 0 success, 1 usage, 2 domain or divergence, 3 validation
failure, 4 I/O.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .expr import ExpressionError, parse_expression
from .measures import power_divergence, renyi_divergence, renyi_numeric, shannon_numeric, song_numeric
from .models import (
    CIRParams,
    ExpFamSpec,
    GIGParams,
    HyperbolicParams,
    InvGammaParams,
    JacobiParams,
    OUParams,
    PearsonIVParams,
    ScaledFParams,
    SkewTParams,
    pearson_iv_shannon_a1,
)
from .quadrature import DivergenceError, Interval, QuadratureError
from .sde import DiffusionSpec, InvariantDensity, ergodicity_check, invariant_density
from .spectrum import _as_density, compute_spectrum, renyi_value

__all__ = ["main", "load_config", "build_model", "dump_config", "FAMILIES"]

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VALIDATION, EXIT_IO = range(5)

FAMILIES = {
    "ou": OUParams,
    "cir": CIRParams,
    "pearson4": PearsonIVParams,
    "invgamma": InvGammaParams,
    "scaledf": ScaledFParams,
    "jacobi": JacobiParams,
    "gig": GIGParams,
    "hyperbolic": HyperbolicParams,
    "skewt": SkewTParams,
}
RAW_FAMILIES = ("custom", "expfam")
TOP_KEYS = ("family", "params", "drift", "squared_diffusion", "state_space", "x0", "scale", "reflecting", "b", "theta", "lam")
INFORMATIONAL = "paper-formula-informational"


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


# -- configuration -----------------------------------------------------------


def _extended_real(v):
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
    try:
        return float(v)
    except (TypeError, ValueError):
        raise UsageError(f"not a number: {v!r}") from None


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_override(cfg, item):
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise UsageError(f"--set expects key=value, got {item!r}")
    value = _parse_value(raw)
    if key.startswith("params."):
        cfg.setdefault("params", {})[key[7:]] = value
    elif key in TOP_KEYS and not (key == "theta" and not isinstance(value, list)):
        # a scalar theta is the family parameter; the expfam weights are a list
        if key == "params" and not isinstance(value, dict):
            raise UsageError("params must be a JSON object")
        cfg[key] = value
    else:
        cfg.setdefault("params", {})[key] = value


def _normalize(cfg):
    out = {}
    family = cfg.get("family")
    if not isinstance(family, str) or not family:
        raise UsageError("the model needs a 'family'")
    family = family.strip().lower()
    if family not in FAMILIES and family not in RAW_FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(list(FAMILIES) + list(RAW_FAMILIES))}")
    out["family"] = family
    params = cfg.get("params", {}) or {}
    if not isinstance(params, dict):
        raise UsageError("params must be a key/value map")
    out["params"] = {str(k): _extended_real(v) for k, v in sorted(params.items())}
    unknown = set(cfg) - set(TOP_KEYS)
    if unknown:
        raise UsageError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    if family in FAMILIES:
        extra = set(cfg) - {"family", "params"}
        if extra:
            raise UsageError(f"{', '.join(sorted(extra))} only apply to custom and expfam models")
        return out
    if "state_space" in cfg:
        ss = cfg["state_space"]
        if isinstance(ss, str):
            ss = ss.split(",")
        if not isinstance(ss, (list, tuple)) or len(ss) != 2:
            raise UsageError("state_space must be two extended reals")
        out["state_space"] = [_extended_real(v) for v in ss]
    for key in ("x0", "scale", "lam"):
        if key in cfg:
            out[key] = _extended_real(cfg[key])
    if "reflecting" in cfg:
        out["reflecting"] = bool(cfg["reflecting"])
    if family == "custom":
        for key in ("drift", "squared_diffusion"):
            if key not in cfg:
                raise UsageError(f"custom models need '{key}'")
            out[key] = str(cfg[key])
    else:
        b, theta = cfg.get("b"), cfg.get("theta")
        if not isinstance(b, list) or not isinstance(theta, list) or len(b) != len(theta) or not b:
            raise UsageError("expfam models need lists 'b' and 'theta' of equal, nonzero length")
        out["b"] = [str(e) for e in b]
        out["theta"] = [_extended_real(t) for t in theta]
        out["squared_diffusion"] = str(cfg.get("squared_diffusion", "1"))
    return out


def load_config(path=None, overrides=()):
    """
    Read a JSON model description and apply ``key=value`` overrides.

    Returns the normalized configuration dictionary.
    """
    cfg = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: not valid JSON ({exc})") from None
        if not isinstance(cfg, dict):
            raise UsageError(f"{path}: the model must be a JSON object")
    for item in overrides or ():
        _apply_override(cfg, item)
    return _normalize(cfg)


def _json_safe(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return None
        return v + 0.0  # drops negative zero
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_json_safe(x) for x in v]
    return v


def dump_config(cfg):
    """Canonical JSON text of a normalized configuration; it re-parses to the same model."""
    return json.dumps(_json_safe(cfg), indent=2, sort_keys=True) + "\n"


def _probe_points(dom):
    lo, hi = dom.lower, dom.upper
    if math.isfinite(lo) and math.isfinite(hi):
        return np.linspace(lo, hi, 43)[1:-1]
    if math.isfinite(lo):
        return lo + np.geomspace(1e-3, 1e2, 41)
    if math.isfinite(hi):
        return hi - np.geomspace(1e-3, 1e2, 41)
    return np.linspace(-10.0, 10.0, 41)


def _expression(text, params, dom, positive=False, what="expression"):
    try:
        e = parse_expression(text, params)
    except ExpressionError as exc:
        raise UsageError(f"{what}: {exc}") from None
    vals = np.asarray(e(_probe_points(dom)), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise UsageError(f"{what} {text!r} is not finite on the probe grid")
    if positive and not np.all(vals > 0):
        raise UsageError(f"{what} {text!r} must be positive on the state space")
    return e


def _default_x0(dom):
    lo, hi = dom.lower, dom.upper
    if math.isfinite(lo) and math.isfinite(hi):
        return 0.5 * (lo + hi)
    if math.isfinite(lo):
        return lo + 1.0
    if math.isfinite(hi):
        return hi - 1.0
    return 0.0


def build_model(cfg):
    """
    Model object for a normalized configuration: a family record, an
    :class:`ExpFamSpec` or, for ``custom``, the invariant density of the
    given coefficients.
    """
    family, params = cfg["family"], cfg["params"]
    if family in FAMILIES:
        try:
            return FAMILIES[family](**params)
        except TypeError as exc:
            raise UsageError(f"{family}: {exc}") from None
        except ValueError as exc:
            raise DomainError(f"{family}: {exc}") from None
    lo, hi = cfg.get("state_space", [-math.inf, math.inf])
    if not lo < hi:
        raise UsageError("state_space must satisfy lower < upper")
    dom = Interval(lo, hi)
    x0 = cfg.get("x0", _default_x0(dom))
    if x0 not in dom:
        raise UsageError(f"x0 = {x0} is not interior to the state space")
    scale = cfg.get("scale", 1.0)
    s2 = _expression(cfg["squared_diffusion"], params, dom, True, "squared_diffusion")
    if family == "custom":
        drift = _expression(cfg["drift"], params, dom, False, "drift")
        spec = DiffusionSpec(drift, s2, dom, x0, scale, cfg.get("reflecting", False), name="custom")
        return invariant_density(spec)
    bs = tuple(_expression(t, params, dom, False, f"b[{i}]") for i, t in enumerate(cfg["b"]))
    try:
        return ExpFamSpec(bs, tuple(cfg["theta"]), s2, dom, x0, cfg.get("lam", 1.0), scale)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


# -- output --------------------------------------------------------------------


def _num(v, digits=17):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    v = float(v)
    if v == 0.0:
        v = 0.0  # no negative zero in output
    return format(v, f".{digits}g")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None


def _write(path, text):
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands --------------------------------------------------------------------


def _song_report(model, tols=None):
    if getattr(model, "song_available", False) and hasattr(model, "song"):
        from .measures import MeasureReport

        return MeasureReport("song", float(model.song()), "closed", 0.0)
    return song_numeric(_as_density(model), tols)


def _ergodicity_notes(model):
    if isinstance(model, InvariantDensity):
        verdict = ergodicity_check(model.spec).verdict
    else:
        verdict = "ergodic" if getattr(model, "ergodic", True) else "not_ergodic"
    if verdict == "ergodic":
        return []
    return [f"ergodicity verdict {verdict}; the value refers to the normalized speed density"]


def cmd_entropy(args, model):
    if args.measure == "renyi":
        if args.alpha is None:
            raise UsageError("--alpha is required for the Renyi information")
        if args.alpha == 1.0:
            raise UsageError("alpha = 1 is the Shannon entropy; use --measure shannon")
        rep = renyi_value(model, args.alpha)
    elif args.alpha is not None:
        raise UsageError("--alpha only applies to --measure renyi")
    elif args.measure == "shannon":
        rep = renyi_value(model, 1.0)
    else:
        rep = _song_report(model)
    notes = list(rep.notes) + _ergodicity_notes(model)
    fields = {
        "measure": args.measure,
        "alpha": args.alpha,
        "value": rep.value,
        "method": rep.method,
        "abs_err": rep.abs_err_est,
        "notes": notes,
    }
    if args.format == "json":
        text = json.dumps(_json_safe(fields), indent=2) + "\n"
    elif args.format == "csv":
        text = _csv_text(["measure", "alpha", "value", "method", "abs_err"], [[args.measure, _num(args.alpha), _num(rep.value), rep.method, _num(rep.abs_err_est)]])
    else:
        lines = [f"measure  {args.measure}"]
        if args.alpha is not None:
            lines.append(f"alpha    {_num(args.alpha, 10)}")
        lines += [f"value    {_num(rep.value, 10)}", f"method   {rep.method}", f"abs_err  {_num(rep.abs_err_est, 3)}"]
        lines += [f"note     {n}" for n in notes]
        text = "\n".join(lines) + "\n"
    _write(args.out, text)
    return EXIT_OK


def cmd_spectrum(args, model):
    if not 0 < args.alpha_min < args.alpha_max:
        raise UsageError("need 0 < --alpha-min < --alpha-max")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    table = compute_spectrum(model, np.geomspace(args.alpha_min, args.alpha_max, args.steps))
    header = ["alpha", "renyi", "method", "err", "flag"]
    if args.format == "json":
        rows = [
            {"alpha": r.alpha, "renyi": r.renyi, "method": r.method, "err": None if r.renyi is None else r.err, "flag": r.flag}
            for r in table.rows
        ]
        text = json.dumps(_json_safe(rows), indent=2) + "\n"
    else:
        rows = [[_num(r.alpha), _num(r.renyi), r.method, "" if r.renyi is None else _num(r.err), r.flag] for r in table.rows]
        text = _csv_text(header, rows)
    _write(args.out, text)
    return EXIT_OK


def _closed_or_none(fn):
    try:
        return fn()
    except DivergenceError:
        return None


def _numeric_or_none(fn):
    try:
        return fn().value
    except DivergenceError:
        return None


def _validation_row(alpha, measure, closed, numeric, tol, note=""):
    if closed is None and numeric is None:
        return dict(alpha=alpha, closed=None, numeric=None, abs_diff=None, passed="true", measure=measure, note="divergent in both")
    if closed is None or numeric is None:
        return dict(alpha=alpha, closed=closed, numeric=numeric, abs_diff=None, passed="false", measure=measure, note="divergence disagreement")
    diff = abs(closed - numeric)
    return dict(alpha=alpha, closed=closed, numeric=numeric, abs_diff=diff, passed="true" if diff <= tol else "false", measure=measure, note=note)


def validation_rows(model, alphas, tol, tols=None):
    """Closed form against quadrature for each alpha, the Shannon entropy and the Song measure."""
    if not hasattr(model, "_renyi"):
        raise UsageError("validate needs a family with closed forms")
    if isinstance(model, GIGParams) and not model.bessel_form:
        raise UsageError("gig closed forms need theta2 > 0 and theta3 > 0")
    dens = model.density("quadrature", tols)
    rows = []
    for a in alphas:
        if a == 1.0:
            continue
        rows.append(_validation_row(a, "renyi", _closed_or_none(lambda: model.renyi(a)), _numeric_or_none(lambda: renyi_numeric(dens, a, tols)), tol))
    shannon_num = shannon_numeric(dens, tols).value
    rows.append(_validation_row(1.0, "shannon", model.shannon(), shannon_num, tol))
    if model.song_available:
        rows.append(_validation_row(None, "song", model.song(), song_numeric(dens, tols).value, tol))
    triple = model.measures(alphas[0] if alphas else 2.0)
    for rep in triple:
        if rep is not None and rep.closed_value is not None:
            numeric = shannon_num if rep.kind == "shannon" else rep.value
            rows.append(
                dict(alpha=None, closed=rep.closed_value, numeric=numeric, abs_diff=abs(rep.closed_value - numeric),
                     passed=INFORMATIONAL, measure=f"{rep.kind}-published", note="; ".join(rep.notes))
            )
    if isinstance(model, PearsonIVParams) and model.a == 1.0:
        rep = pearson_iv_shannon_a1(model.mu, tols)
        rows.append(
            dict(alpha=1.0, closed=rep.closed_value, numeric=rep.value, abs_diff=rep.discrepancy,
                 passed=INFORMATIONAL, measure="shannon-published", note="a = 1 published expression vs quadrature")
        )
    return rows


def cmd_validate(args, model):
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError:
        raise UsageError(f"--alphas must be a comma separated list, got {args.alphas!r}") from None
    if not alphas or any(not a > 0 for a in alphas):
        raise UsageError("--alphas must be positive")
    tol = 1e-7 if args.tol is None else args.tol
    rows = validation_rows(model, alphas, tol)
    header = ["alpha", "closed", "numeric", "abs_diff", "pass", "measure", "note"]
    if args.format == "json":
        records = [{**{k: r[k] for k in ("alpha", "closed", "numeric", "abs_diff")}, "pass": r["passed"], "measure": r["measure"], "note": r["note"]} for r in rows]
        text = json.dumps(_json_safe(records), indent=2) + "\n"
    elif args.format == "csv":
        text = _csv_text(header, [[_num(r["alpha"]), _num(r["closed"]), _num(r["numeric"]), _num(r["abs_diff"]), r["passed"], r["measure"], r["note"]] for r in rows])
    else:
        lines = [f"{'measure':<18}{'alpha':>8}{'closed':>18}{'numeric':>18}{'abs_diff':>12}  pass"]
        for r in rows:
            lines.append(
                f"{r['measure']:<18}{_num(r['alpha'], 6):>8}{_num(r['closed'], 10):>18}{_num(r['numeric'], 10):>18}"
                f"{_num(r['abs_diff'], 3):>12}  {r['passed']}"
            )
        failed = sum(r["passed"] == "false" for r in rows)
        checked = sum(r["passed"] != INFORMATIONAL for r in rows)
        lines.append(f"{checked - failed}/{checked} checks passed at tol {tol:g}")
        text = "\n".join(lines) + "\n"
    _write(args.out, text)
    return EXIT_VALIDATION if any(r["passed"] == "false" for r in rows) else EXIT_OK


def cmd_divergence(args, model, model_g):
    if args.alpha is None:
        raise UsageError("--alpha is required")
    f, g = _as_density(model), _as_density(model_g)
    d = renyi_divergence(f, g, args.alpha)
    psi = power_divergence(f, g, args.alpha)
    if args.format == "json":
        text = json.dumps(_json_safe({"alpha": args.alpha, "renyi_divergence": d.value, "power_divergence": psi.value}), indent=2) + "\n"
    elif args.format == "csv":
        text = _csv_text(["alpha", "renyi_divergence", "power_divergence"], [[_num(args.alpha), _num(d.value), _num(psi.value)]])
    else:
        text = f"alpha    {_num(args.alpha, 10)}\nD_alpha  {_num(d.value, 10)}\nPsi      {_num(psi.value, 10)}\n"
    _write(args.out, text)
    return EXIT_OK


# -- entry point -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parser():
    p = _Parser(prog="diffentropy", description="Information measures of invariant laws of ergodic diffusions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json", "csv")):
        sp.add_argument("-m", "--model", help="JSON model file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a model entry")
        sp.add_argument("--out", help="output file (default: standard output)")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--tol", type=float)
        sp.add_argument("--dump-config", action="store_true", help="print the effective model and exit")

    sp = sub.add_parser("entropy", help="Renyi information, Shannon entropy or Song measure")
    common(sp)
    sp.add_argument("--measure", choices=("renyi", "shannon", "song"), default="shannon")
    sp.add_argument("--alpha", type=float)

    sp = sub.add_parser("spectrum", help="Renyi spectrum on a geometric alpha grid")
    common(sp, ("csv", "json"))
    sp.add_argument("--alpha-min", type=float, default=0.25)
    sp.add_argument("--alpha-max", type=float, default=16.0)
    sp.add_argument("--steps", type=int, default=33)

    sp = sub.add_parser("validate", help="closed forms against quadrature")
    common(sp)
    sp.add_argument("--alphas", default="0.6,2,3")

    sp = sub.add_parser("divergence", help="Renyi and power divergence of two models")
    common(sp)
    sp.add_argument("-g", "--model-g", help="JSON model file of the second law")
    sp.add_argument("--set-g", action="append", default=[], metavar="KEY=VALUE")
    sp.add_argument("--alpha", type=float)
    return p


def _run(args):
    cfg = load_config(args.model, args.set)
    cfg_g = load_config(args.model_g, args.set_g) if args.command == "divergence" else None
    model = build_model(cfg)
    model_g = build_model(cfg_g) if cfg_g is not None else None
    if args.dump_config:
        text = dump_config(cfg) if cfg_g is None else json.dumps({"f": _json_safe(cfg), "g": _json_safe(cfg_g)}, indent=2, sort_keys=True) + "\n"
        _write(args.out, text)
        return EXIT_OK
    if args.command == "entropy":
        return cmd_entropy(args, model)
    if args.command == "spectrum":
        return cmd_spectrum(args, model)
    if args.command == "validate":
        return cmd_validate(args, model)
    return cmd_divergence(args, model, model_g)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except UsageError as exc:
        print(f"diffentropy: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DivergenceError, QuadratureError, ValueError, ArithmeticError) as exc:
        print(f"diffentropy: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"diffentropy: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
