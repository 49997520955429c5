"""Command-line front end: parse function specs, run experiments, emit tables.

Every row carries quantity, parameters, value, budget (truncation or
quadrature), optional bound and a PASS/FAIL verdict where an inequality is
being checked.  Exit code 0 on success, 2 when a report contains FAIL
rows, 1 on usage or input errors.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .errors import BandlimError, ParseError
from .spectrum import PowerTail, RectAtom, Spectrum, TriangleAtom
from . import counterexamples, distances, formulas, modulation, numerics, rates, riesz, smoothness

__all__ = ["main", "run", "validate_spec", "parse_function"]

_FMT = "%.17g"


def _f(x):
    return _FMT % float(x)


# ---------------------------------------------------------------------------
# function-spec parsing
# ---------------------------------------------------------------------------


def validate_spec(obj):
    """Build a Spectrum from a JSON function spec; collect precise errors.

    Returns (spectrum, errors); spectrum is None when errors is nonempty.
    """
    errors = []
    atoms = []
    tails = []
    if not isinstance(obj, dict):
        return None, ["top level: expected an object with 'atoms'/'tails'"]
    unknown = set(obj) - {"atoms", "tails"}
    for key in sorted(unknown):
        errors.append("%s: unknown key" % key)
    for i, a in enumerate(obj.get("atoms", []) or []):
        path = "atoms[%d]" % i
        if not isinstance(a, dict):
            errors.append("%s: expected an object" % path)
            continue
        kind = a.get("kind")
        if kind not in ("triangle", "rect"):
            errors.append("%s.kind: expected 'triangle' or 'rect'" % path)
            continue
        try:
            amp = float(a.get("amp", 1.0))
            c = float(a.get("c", 0.0))
            tau = float(a.get("tau", 0.0))
            if kind == "triangle":
                b = float(a["b"])
                atoms.append(TriangleAtom(amp=amp, b=b, c=c, tau=tau))
            else:
                w = float(a["w"])
                atoms.append(RectAtom(amp=amp, w=w, c=c, tau=tau))
        except KeyError as e:
            errors.append("%s.%s: missing" % (path, e.args[0]))
        except (TypeError, ValueError) as e:
            errors.append("%s: %s" % (path, e))
    for i, t in enumerate(obj.get("tails", []) or []):
        path = "tails[%d]" % i
        if not isinstance(t, dict):
            errors.append("%s: expected an object" % path)
            continue
        try:
            tails.append(PowerTail(float(t["gamma"])))
        except KeyError:
            errors.append("%s.gamma: missing" % path)
        except (TypeError, ValueError) as e:
            errors.append("%s.gamma: %s" % (path, e))
    if errors:
        return None, errors
    return Spectrum(atoms=tuple(atoms), tails=tuple(tails)), []


def spec_to_json(S):
    """Serialize a Spectrum back to the JSON function-spec schema."""
    atoms = []
    for a in S.atoms:
        if isinstance(a, TriangleAtom):
            atoms.append({"kind": "triangle", "amp": a.amp, "b": a.b, "c": a.c, "tau": a.tau})
        else:
            atoms.append({"kind": "rect", "amp": a.amp, "w": a.w, "c": a.c, "tau": a.tau})
    return {"atoms": atoms, "tails": [{"gamma": t.gamma} for t in S.tails]}


def parse_function(args):
    """Resolve --f into a Spectrum: 'builtin:<family>' or a JSON file path."""
    spec = args.f
    if spec is None:
        raise ParseError("--f is required")
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        if name not in counterexamples.FAMILIES:
            raise ParseError(
                "unknown builtin %r; available: %s" % (name, ", ".join(counterexamples.FAMILIES))
            )
        params = {}
        fam_params = {"f_gamma_delta": ("gamma", "delta"), "power_tail": ("gamma",)}.get(name, ())
        for p in fam_params:
            val = getattr(args, p, None)
            if val is None:
                raise ParseError("builtin %s needs --%s" % (name, p))
            params[p] = val
        if name == "power_tail":
            return counterexamples.build(name, **params)
        return counterexamples.build(name, N=args.trunc, **params)
    try:
        with open(spec) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (spec, e))
    except json.JSONDecodeError as e:
        raise ParseError("%s: invalid JSON: %s" % (spec, e))
    S, errors = validate_spec(obj)
    if errors:
        raise ParseError("%s: %s" % (spec, "; ".join(errors)))
    return S


def _trunc_budget(S):
    if S.trunc is not None:
        return S.trunc.bounds.get("l2", 0.0)
    return 0.0


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

_COLUMNS = ["quantity", "params", "value", "budget", "bound", "verdict"]


def _emit(rows, fmt, out):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_COLUMNS)
        for r in rows:
            w.writerow([
                r["quantity"],
                ";".join("%s=%s" % (k, _f(v) if isinstance(v, float) else v)
                         for k, v in r["params"].items()),
                _f(r["value"]),
                _f(r.get("budget", 0.0)),
                "" if r.get("bound") is None else _f(r["bound"]),
                r.get("verdict", ""),
            ])
        text = buf.getvalue()
    else:
        payload = []
        for r in rows:
            payload.append({
                "quantity": r["quantity"],
                "params": {k: (_f(v) if isinstance(v, float) else v)
                           for k, v in r["params"].items()},
                "value": _f(r["value"]),
                "budget": _f(r.get("budget", 0.0)),
                "bound": None if r.get("bound") is None else _f(r["bound"]),
                "verdict": r.get("verdict", ""),
            })
        text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(rows):
    verdicts = [r.get("verdict", "") for r in rows]
    return 2 if "FAIL" in verdicts else 0


# ---------------------------------------------------------------------------
# range helpers
# ---------------------------------------------------------------------------


def _values(single, rng, n, what):
    if single is not None:
        return [float(single)]
    if rng is not None:
        lo, hi = rng
        if not 0 < lo < hi:
            raise ParseError("--%s-range must satisfy 0 < lo < hi" % what)
        return list(np.geomspace(lo, hi, n))
    raise ParseError("need --%s or --%s-range" % (what, what))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_dist(args):
    S = parse_function(args)
    budget = _trunc_budget(S)
    rows = []
    for sigma in _values(args.sigma, args.sigma_range, args.n_points, "sigma"):
        val = distances.dist(S, args.q, sigma)
        bound = None
        verdict = ""
        if args.f == "builtin:dyadic_log" and args.q == 2.0 and sigma >= 2.0:
            bound = (2.0 * np.sqrt(2.0 * np.pi) / 3.0) * (np.log(2.0) / (3.0 * np.log(sigma))) ** 1.5
            verdict = "PASS" if val + budget >= bound else "FAIL"
        rows.append({"quantity": "dist", "params": {"q": args.q, "sigma": sigma},
                     "value": val, "budget": budget, "bound": bound, "verdict": verdict})
    return rows


def _cmd_smoothness(args):
    S = parse_function(args)
    budget = _trunc_budget(S)
    deltas = _values(args.delta, args.delta_range, args.n_points, "delta")
    vals = smoothness.modulus_profile(S, args.order, deltas)
    return [{"quantity": "modulus", "params": {"r": args.order, "delta": d},
             "value": float(v), "budget": 2.0 ** args.order * budget, "bound": None,
             "verdict": ""} for d, v in zip(deltas, vals)]


def _cmd_riesz(args):
    S = parse_function(args)
    if args.alpha is None:
        raise ParseError("--alpha is required")
    j = max(1, int(np.ceil(args.alpha / 2.0 + 1e-9)))
    if args.order is not None:
        j = args.order
    eps = args.epsilon_list or [2.0 ** (-k) for k in range(0, 11)]
    rows = [{"quantity": "c_alpha", "params": {"alpha": args.alpha, "j": j},
             "value": riesz.c_alpha(args.alpha, j), "budget": 0.0, "bound": None, "verdict": ""}]
    errs = riesz.riesz_convergence(S, args.alpha, j, eps)
    budget = _trunc_budget(S)
    for e, v in zip(eps, errs):
        rows.append({"quantity": "riesz_error", "params": {"alpha": args.alpha, "j": j, "eps": e},
                     "value": v, "budget": budget, "bound": None, "verdict": ""})
    return rows


def _cmd_modulation(args):
    S = parse_function(args)
    budget = S.trunc.bounds.get("l1_spectral", 0.0) if S.trunc else 0.0
    rows = []
    try:
        m21 = modulation.m21_norm(S)
        rows.append({"quantity": "m21", "params": {}, "value": m21,
                     "budget": budget, "bound": None, "verdict": ""})
    except BandlimError as e:
        rows.append({"quantity": "m21", "params": {"error": type(e).__name__},
                     "value": float("nan"), "budget": 0.0, "bound": None, "verdict": ""})
        return rows
    prof = modulation.n_sup(S)
    rows.append({"quantity": "n_sup", "params": {"arg_h": prof.arg_sup},
                 "value": prof.sup, "budget": budget, "bound": None, "verdict": ""})
    l2 = numerics.l2_norm(S)
    sandwich_hi = 2.0 * (l2 + prof.sup)
    ok = l2 <= m21 + 1e-12 and m21 <= sandwich_hi + budget + 1e-12
    rows.append({"quantity": "m21_sandwich", "params": {"l2": l2},
                 "value": m21, "budget": budget, "bound": sandwich_hi,
                 "verdict": "PASS" if ok else "FAIL"})
    return rows


def _cmd_sampling(args):
    S = parse_function(args)
    rows = []
    for h in _values(args.h, args.h_range, args.n_points, "h"):
        bound = formulas.wks_bound(S, h)
        t = np.linspace(0.13 * h, 0.87 * h, 8)
        rem = float(np.max(np.abs(formulas.wks_remainder_spectral(S, h, t))))
        verdict = "PASS" if rem <= bound + 1e-10 else "FAIL"
        rows.append({"quantity": "wks_remainder", "params": {"h": h},
                     "value": rem, "budget": 0.0, "bound": bound, "verdict": verdict})
    return rows


def _cmd_rkf(args):
    S = parse_function(args)
    rows = []
    for h in _values(args.h, args.h_range, args.n_points, "h"):
        bound = formulas.rkf_bound(S, h)
        t = np.linspace(0.0, 2.0 * h, 8)
        rem = float(np.max(np.abs(formulas.rkf_remainder(S, h, t))))
        verdict = "PASS" if rem <= bound + 1e-10 else "FAIL"
        rows.append({"quantity": "rkf_remainder", "params": {"h": h},
                     "value": rem, "budget": 0.0, "bound": bound, "verdict": verdict})
    return rows


def _cmd_parseval(args):
    S = parse_function(args)
    rows = []
    for h in _values(args.h, args.h_range, args.n_points, "h"):
        R = formulas.parseval_remainder(S, S, h)
        bound = formulas.parseval_bound(S, S, h)
        verdict = ""
        if bound == 0.0:
            verdict = "PASS" if abs(R) <= args.tol else "FAIL"
        rows.append({"quantity": "parseval_remainder", "params": {"h": h},
                     "value": abs(R), "budget": 0.0, "bound": bound, "verdict": verdict})
    return rows


def _cmd_bernstein(args):
    S = parse_function(args)
    if args.order is None:
        raise ParseError("--order is required")
    rows = []
    for sigma in _values(args.sigma, args.sigma_range, args.n_points, "sigma"):
        rep = formulas.bernstein_check(S, args.order, sigma)
        rows.append({"quantity": "bernstein", "params": {"s": args.order, "sigma": sigma},
                     "value": rep["lhs"], "budget": rep["split_residual"],
                     "bound": rep["rhs"], "verdict": "PASS" if rep["ok"] else "FAIL"})
    return rows


def _cmd_nikolskii(args):
    S = parse_function(args)
    sigma = args.sigma if args.sigma is not None else numerics_default_sigma(S)
    rows = []
    for h in _values(args.h, args.h_range, args.n_points, "h"):
        rep = formulas.nikolskii_check(S, h, sigma)
        rows.append({"quantity": "nikolskii", "params": {"h": h, "sigma": sigma},
                     "value": rep["lhs"], "budget": 0.0, "bound": rep["rhs"],
                     "verdict": "PASS" if rep["ok"] else "FAIL"})
    return rows


def numerics_default_sigma(S):
    return max(S.support_radius(), 1.0)


def _cmd_counterexample(args):
    S = parse_function(args)
    if not args.f.startswith("builtin:"):
        raise ParseError("counterexample needs a builtin family via --f builtin:<name>")
    name = args.f[len("builtin:"):]
    report = counterexamples.membership_report(name)
    rows = [{"quantity": "membership", "params": {"family": name, "claims": report["description"]},
             "value": float(len(report["in"])), "budget": 0.0, "bound": None, "verdict": ""}]
    for space in report["in"]:
        rows.append({"quantity": "member", "params": {"family": name, "space": space},
                     "value": 1.0, "budget": 0.0, "bound": None, "verdict": ""})
    for space in report["not_in"]:
        rows.append({"quantity": "member", "params": {"family": name, "space": space},
                     "value": 0.0, "budget": 0.0, "bound": None, "verdict": ""})
    return rows


def _cmd_rates(args):
    S = parse_function(args)
    q = args.quantity
    if q == "dist":
        sigmas = _values(None, args.sigma_range or (16.0, 4096.0), args.n_points, "sigma")
        pts = [(s, distances.dist(S, args.q, s)) for s in sigmas]
    elif q == "modulus":
        deltas = _values(None, args.delta_range or (2.0 ** -12, 2.0 ** -2), args.n_points, "delta")
        vals = smoothness.modulus_profile(S, args.order, deltas)
        pts = list(zip(deltas, vals))
    elif q == "nh":
        hs = _values(None, args.h_range or (2.0 ** -10, 1.0), args.n_points, "h")
        pts = [(h, modulation.n_h(S, h)) for h in hs]
    else:
        raise ParseError("--quantity must be dist, modulus or nh")
    fit = rates.loglog_fit(pts)
    return [{"quantity": "rate_%s" % q,
             "params": {"window_lo": fit.window[0], "window_hi": fit.window[1],
                        "r_squared": fit.r_squared, "n_points": fit.n_points},
             "value": fit.slope, "budget": 1.0 - fit.r_squared, "bound": None, "verdict": ""}]


_COMMANDS = {
    "dist": _cmd_dist,
    "smoothness": _cmd_smoothness,
    "riesz": _cmd_riesz,
    "modulation": _cmd_modulation,
    "sampling": _cmd_sampling,
    "rkf": _cmd_rkf,
    "parseval": _cmd_parseval,
    "bernstein": _cmd_bernstein,
    "nikolskii": _cmd_nikolskii,
    "counterexample": _cmd_counterexample,
    "rates": _cmd_rates,
}


def _build_parser():
    p = argparse.ArgumentParser(prog="bandlim", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--f", help="JSON spec path or builtin:<family>")
        sp.add_argument("--q", type=float, default=2.0)
        sp.add_argument("--sigma", type=float)
        sp.add_argument("--sigma-range", type=float, nargs=2, metavar=("LO", "HI"))
        sp.add_argument("--h", type=float)
        sp.add_argument("--h-range", type=float, nargs=2, metavar=("LO", "HI"))
        sp.add_argument("--delta", type=float)
        sp.add_argument("--delta-range", type=float, nargs=2, metavar=("LO", "HI"))
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--order", type=int, default=None if name in ("riesz",) else 1)
        sp.add_argument("--epsilon-list", type=float, nargs="+")
        sp.add_argument("--trunc", type=int, default=None)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out")
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--delta-param", dest="delta_fam", type=float)
        sp.add_argument("--n-points", type=int, default=16)
        sp.add_argument("--quantity", choices=("dist", "modulus", "nh"), default="dist")
    return p


def run(argv=None):
    args = _build_parser().parse_args(argv)
    threads = os.environ.get("BANDLIM_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    # family delta parameter: accept via --delta-param, falling back to --delta
    if getattr(args, "delta_fam", None) is not None:
        args.delta = args.delta_fam
    try:
        rows = _COMMANDS[args.subcommand](args)
    except (BandlimError, ParseError) as e:
        sys.stderr.write("error: %s\n" % e)
        return 1
    _emit(rows, args.format, args.out)
    return _exit_code(rows)


def main():
    sys.exit(run())
