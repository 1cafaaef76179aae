"""Command-line front end: ``radiso <command> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analysis, emit, logconvex, shooting, symmetrize
from .density import RadialDensity, exp_r, exp_r_alpha, gaussian, inverse_r, lebesgue, power_law
from .errors import (DomainError, Divergent, EmptyInterval, Inconclusive, NoSolution, PreconditionError,
                     RangeError)
from .stationary import INNER_TOUCH, ORIGIN, StationaryParams, solve_curve

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG, EXIT_SUITE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# -- laws ---------------------------------------------------------------------------

LAW_HELP = ("power:ALPHA | gaussian | lebesgue | inverse_r | exp_r | exp_r_alpha:ALPHA | "
            "exp_r2:SCALE | radial_power:A | model_1d:A")


def parse_law(spec: str, cutoff: float | None = None, dimension: int = 2):
    """Law from its text spec; ``model_1d:A`` returns a ModelMeasure1D."""
    name, _, arg = spec.partition(":")
    R = math.inf if cutoff is None else float(cutoff)

    def num():
        try:
            return float(arg)
        except ValueError:
            raise ConfigError(f"law {spec!r} needs a numeric parameter") from None

    if name == "power":
        if cutoff is not None:
            raise ConfigError("probability laws do not take a cutoff")
        return power_law(num())
    if name == "gaussian":
        return gaussian()
    if name == "lebesgue":
        return lebesgue(dimension, R)
    if name == "inverse_r":
        return inverse_r()
    if name == "exp_r":
        return exp_r(dimension, R)
    if name == "exp_r_alpha":
        return exp_r_alpha(num(), dimension, R)
    if name == "exp_r2":
        return logconvex.gaussian_log_convex(dimension, num(), R)
    if name == "radial_power":
        return logconvex.radial_power_law(num(), dimension, R)
    if name == "model_1d":
        return logconvex.ModelMeasure1D(num())
    raise ConfigError(f"unknown law {spec!r}; expected {LAW_HELP}")


def _law_record(law) -> dict:
    if isinstance(law, logconvex.ModelMeasure1D):
        return {"name": "model_1d", "A": law.A}
    out = law.describe()
    try:
        out["R_max"] = law.truncation_radius()
    except (DomainError, RangeError):
        out["R_max"] = math.nan
    return out


def _planar(law) -> RadialDensity:
    if not isinstance(law, RadialDensity):
        raise ConfigError("this command needs a radial density law")
    return law


def _float_list(text: str):
    """'a,b,c' or 'lo:hi:n' (linspace) or 'lo:hi:n:log' (geomspace)."""
    try:
        if ":" in text:
            parts = text.split(":")
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if len(parts) > 3 and parts[3] == "log":
                return np.geomspace(lo, hi, n).tolist()
            return np.linspace(lo, hi, n).tolist()
        return [float(x) for x in text.split(",") if x.strip()]
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


# -- commands -----------------------------------------------------------------------

def _config_echo(args, law) -> dict:
    skip = {"func", "config"}
    out = {k: v for k, v in vars(args).items() if k not in skip}
    out["law"] = _law_record(law)
    out["tolerances"] = {"closure": shooting.CLOSURE_TOL, "measure": shooting.MEASURE_TOL}
    return out


def cmd_solve(args):
    law = _planar(parse_law(args.law, args.cutoff))
    curve = solve_curve(StationaryParams(law, args.a, args.lam, args.start))
    tag = analysis.classify(curve).tag
    summary = {"class": tag, "rotation": curve.rotation, "c": curve.u.c, "r0": curve.r0, "r1": curve.r1,
               "f_end": curve.f_end, "stop_rule": curve.stop_rule}
    ball = None
    for key, fn in (("measure", analysis.region_measure), ("perimeter", analysis.region_perimeter)):
        try:
            summary[key] = fn(curve)
        except (RangeError, DomainError) as exc:
            summary[key] = None
            summary.setdefault("notes", []).append(f"{key}: {exc}")
    m = summary.get("measure")
    if m is not None and 0 < m < law.total_mass():
        summary["complement_measure"] = law.total_mass() - m
        ball = law.radius_for_measure(m)
        summary["ball_radius_equal_measure"] = ball
        if summary.get("perimeter") is not None:
            summary["ball_ratio"] = summary["perimeter"] / analysis.equal_measure_ball_perimeter(law, m)
    doc = {"config": _config_echo(args, law), "summary": summary}
    if args.out:
        out = Path(args.out)
        emit.write_atomic(out / "curve.csv", emit.csv_text(["r", "f", "fprime"], zip(curve.r, curve.f, curve.fp)))
        emit.write_atomic(out / "curve.svg", emit.svg_curve(curve, ball))
        emit.write_atomic(out / "summary.json", emit.json_text(doc))
    return doc


def cmd_classify(args):
    law = _planar(parse_law(args.law, args.cutoff))
    rows = []
    for a in args.a_grid:
        for lam in args.lambda_grid:
            try:
                curve = solve_curve(StationaryParams(law, a, lam))
                rows.append((a, lam, analysis.classify(curve).tag, curve.rotation, curve.r0, curve.r1))
            except (EmptyInterval, Divergent) as exc:
                rows.append((a, lam, type(exc).__name__, math.nan, math.nan, math.nan))
    header = ["a", "lambda", "class", "rotation", "r0", "r1"]
    doc = {"config": _config_echo(args, law),
           "counts": {k: sum(1 for r in rows if r[2] == k) for k in sorted({r[2] for r in rows})}}
    if args.out:
        emit.write_atomic(Path(args.out) / "classify.csv", emit.csv_text(header, rows))
        emit.write_atomic(Path(args.out) / "classify.json", emit.json_text(doc))
    doc["rows"] = [dict(zip(header, r)) for r in rows]
    return doc


def cmd_sweep(args):
    law = _planar(parse_law(args.law))
    alpha = law.params.get("alpha")
    if alpha is None:
        raise ConfigError("sweep runs on power:ALPHA laws")
    rows = []
    fams = (shooting.NON_COMPACT, shooting.COMPACT_SMOOTH, shooting.BALL, shooting.HALF_PLANE)
    for m in args.measures:
        p = shooting.profile_point(alpha, m, law)
        comp = {}
        for fam, per in p.competitors:
            comp[fam] = min(per, comp.get(fam, math.inf))
        ball = comp.get(shooting.BALL, math.nan)
        rows.append((m, p.best_family, p.perimeter, ball, p.perimeter / ball,
                     *[comp.get(f, math.nan) for f in fams]))
    header = ["target_measure", "best_family", "perimeter", "ball_perimeter", "ratio_to_ball",
              *[f"perimeter_{f}" for f in fams]]
    doc = {"config": _config_echo(args, law)}
    if args.out:
        emit.write_atomic(Path(args.out) / "profile.csv", emit.csv_text(header, rows))
        emit.write_atomic(Path(args.out) / "profile.json", emit.json_text(doc))
    doc["rows"] = [dict(zip(header, r)) for r in rows]
    return doc


def cmd_thresholds(args):
    est = shooting.estimate_alpha_thresholds(args.alpha_grid, a_range=(args.a_min, args.a_max),
                                             a_points=args.a_points)
    doc = {"config": {k: v for k, v in vars(args).items() if k not in ("func", "config")},
           "alpha0": est.alpha0, "alpha1": est.alpha1, "a_range": est.a_range, "heuristic": est.heuristic}
    if args.out:
        keys = ["alpha", "a1", "measure_at_a1_minus_half", "sup_rotation_minus_pi"]
        emit.write_atomic(Path(args.out) / "thresholds.json", emit.json_text(doc))
        emit.write_atomic(Path(args.out) / "evidence.csv",
                          emit.csv_text(keys, ([e[k] for k in keys] for e in est.evidence)))
    doc["evidence"] = list(est.evidence)
    return doc


def cmd_symmetrize(args):
    law = _planar(parse_law(args.law, args.cutoff))
    s = symmetrize.read_set(args.input, law, args.ring_spacing)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        before = {"measure": symmetrize.set_measure(s), "perimeter": symmetrize.set_perimeter(s)}
        sym = symmetrize.symmetrize_set(s)
        after = {"measure": symmetrize.set_measure(sym), "perimeter": symmetrize.set_perimeter(sym)}
    doc = {"config": _config_echo(args, law), "before": before, "after": after,
           "warnings": sorted({str(w.message) for w in caught})}
    if args.out:
        emit.write_atomic(Path(args.out) / "symmetrized.txt", symmetrize.format_set(sym))
        emit.write_atomic(Path(args.out) / "symmetrize.json", emit.json_text(doc))
    return doc


def _suite_ratio(law, cutoff, trials, rng):
    ratios = [logconvex.ball_ratio_check(law, logconvex.random_axial_region(cutoff, r)) for r in rng]
    worst = min(ratios)
    return {"min_ratio": worst, "bound": logconvex.RATIO_BOUND, "slack": worst - logconvex.RATIO_BOUND,
            "passed": worst >= logconvex.RATIO_BOUND - 1e-6, "trials": trials}


def _suite_divergence(law, cutoff, trials, rng):
    slack = []
    for r in rng:
        A = logconvex.random_axial_region(cutoff, r)
        slack.append(A.perimeter(law) - logconvex.divergence_lower_bound(law, A))
    worst = min(slack)
    return {"min_slack": worst, "passed": worst >= -1e-8, "trials": trials}


def _suite_bigballs(law, cutoff, trials, rng):
    top = cutoff
    try:
        th = logconvex.bigballs_threshold(law, 1e-3, top)
    except RangeError as exc:
        return {"threshold": None, "passed": True, "note": str(exc)}
    return {"threshold": th, "passed": True}


SUITES = {"ratio": _suite_ratio, "divergence": _suite_divergence, "bigballs": _suite_bigballs}


def cmd_bounds(args):
    cutoff = args.cutoff if args.cutoff is not None else 5.0
    law = _planar(parse_law(args.law, cutoff))
    logconvex.check_log_convex(law)
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    seeds = np.random.SeedSequence(args.seed)
    report = {}
    for name in names:
        children = seeds.spawn(args.trials)
        rngs = [np.random.default_rng(c) for c in children]
        report[name] = SUITES[name](law, cutoff, args.trials, rngs)
    doc = {"config": _config_echo(args, law), "suites": report,
           "passed": all(v["passed"] for v in report.values())}
    if args.out:
        emit.write_atomic(Path(args.out) / "bounds.json", emit.json_text(doc))
    return doc


def cmd_transport(args):
    src = logconvex.ModelMeasure1D(args.A)
    tgt = parse_law(args.target)
    if not isinstance(tgt, logconvex.ModelMeasure1D):
        raise ConfigError("transport targets are model_1d:B laws")
    B = tgt.A
    tm = logconvex.monotone_transport_1d(src.A, lambda x: -np.log(np.cos(B * np.asarray(x))),
                                         target_half_width=tgt.half_width, points=args.points)
    doc = {"config": {"A": args.A, "target": args.target, "points": args.points},
           "lipschitz_estimate": tm.lipschitz_estimate, "pushforward_residual": tm.pushforward_residual,
           "contract_ok": tm.lipschitz_estimate <= 1 + 1e-4}
    if args.out:
        emit.write_atomic(Path(args.out) / "transport.csv", emit.csv_text(["x", "T"], zip(tm.x, tm.T)))
        emit.write_atomic(Path(args.out) / "transport.json", emit.json_text(doc))
    return doc


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="radiso", description="Stationary curves and isoperimetric checks for radial densities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, law=True):
        if law:
            sp.add_argument("--law", default="power:1", help=LAW_HELP)
            sp.add_argument("--cutoff", type=float, default=None, help="domain radius for infinite-mass laws")
        sp.add_argument("--out", default=None, help="artifact directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--config", default=None, help="key=value file; flags take precedence")

    s = sub.add_parser("solve", help="one (a, lambda) curve")
    common(s)
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=float, default=0.0)
    s.add_argument("--start", choices=(INNER_TOUCH, ORIGIN), default=INNER_TOUCH)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("classify", help="taxonomy over an (a, lambda) grid")
    common(s)
    s.add_argument("--a-grid", type=_float_list, default=_float_list("0.1,0.5,1,2"))
    s.add_argument("--lambda-grid", type=_float_list, default=_float_list("-0.1,0,1e-4"))
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("sweep", help="perimeter profile over target measures")
    common(s)
    s.add_argument("--measures", type=_float_list, default=_float_list("0.1,0.3,0.5"))
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("thresholds", help="critical exponents alpha0, alpha1")
    common(s, law=False)
    s.add_argument("--alpha-grid", type=_float_list, default=_float_list("1.05:1.95:10"))
    s.add_argument("--a-min", type=float, default=0.01)
    s.add_argument("--a-max", type=float, default=50.0)
    s.add_argument("--a-points", type=int, default=40)
    s.set_defaults(func=cmd_thresholds)

    s = sub.add_parser("symmetrize", help="circular symmetrization of a ring file")
    common(s)
    s.add_argument("--input", required=True)
    s.add_argument("--ring-spacing", type=float, default=None)
    s.set_defaults(func=cmd_symmetrize)

    s = sub.add_parser("bounds", help="log-convex property suites")
    common(s)
    s.add_argument("--suite", choices=(*sorted(SUITES), "all"), default="all")
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("transport", help="monotone map nu_A -> target")
    common(s, law=False)
    s.add_argument("--A", type=float, default=1.0)
    s.add_argument("--target", default="model_1d:2")
    s.add_argument("--points", type=int, default=10_000)
    s.set_defaults(func=cmd_transport)
    return p


def read_config(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{n}: expected key=value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(parser, argv):
    """Config-file values become subcommand defaults so explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    ns, rest = pre.parse_known_args(argv)
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((t for t in rest if t in sub.choices), None)
    if ns.config is None or command is None:
        return
    values = read_config(ns.config)
    sp = sub.choices[command]
    by_dest = {a.dest: a for a in sp._actions}
    if "lambda" in values:
        values["lam"] = values.pop("lambda")
    for key, raw in values.items():
        act = by_dest.get(key)
        if act is None:
            raise ConfigError(f"unknown config key {key!r} for {command}")
        val = act.type(raw) if act.type else raw
        if act.choices is not None and val not in act.choices:
            raise ConfigError(f"config {key}={raw!r} not in {list(act.choices)}")
        act.required = False
        sp.set_defaults(**{key: val})


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        doc = args.func(args)
        status = EXIT_SUITE if doc.get("passed") is False else EXIT_OK
        sys.stdout.write(emit.json_text(doc))
        return status
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ConfigError, DomainError, RangeError, PreconditionError, OSError, argparse.ArgumentTypeError) as exc:
        return _fail(exc, EXIT_CONFIG)
    except (NoSolution, Inconclusive, Divergent, ArithmeticError, RuntimeError) as exc:
        return _fail(exc, EXIT_NUMERIC)


def _fail(exc, code):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
