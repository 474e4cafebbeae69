"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 hypothesis warning under
``--strict``, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import platform
import sys
import time
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, checks, inversion, montecarlo, periodic, series_alg, tail_series
from .errors import GwimmError, HypothesisWarning, ModelError
from .inversion import DensityCurve
from .limits import DEFAULT_CONFIG
from .pgf import Model, load_model

EXIT_OK, EXIT_INVALID, EXIT_STRICT, EXIT_USAGE = 0, 1, 2, 64
SUBCOMMANDS = ("density", "series", "approx", "coeffs", "fourier", "simulate", "validate", "compare")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_grid(text: str) -> np.ndarray:
    try:
        x0, x1, count = text.split(":")
        x0, x1, count = float(x0), float(x1), int(count)
    except ValueError:
        raise UsageError(f"--grid expects x0:x1:count, got {text!r}") from None
    if not (0 < x0 < x1) or count < 2:
        raise UsageError("--grid needs 0 < x0 < x1 and count >= 2")
    return np.linspace(x0, x1, count)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gwimm", description="Limit density of a Galton-Watson process with immigration")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--model", required=True, metavar="PATH", help="JSON {\"p\": [...], \"q\": [...]}")
        sp.add_argument("--out", metavar="PATH")
        prof = sp.add_mutually_exclusive_group()
        prof.add_argument("--paper", action="store_true", help="y_max=2000, n_points=1000000, t_iter=70")
        prof.add_argument("--fast", action="store_true", help="y_max=500, n_points=200000")
        sp.add_argument("--n-terms", type=int)
        sp.add_argument("--m-max", type=int)
        sp.add_argument("--grid", metavar="x0:x1:count")
        sp.add_argument("--seed", type=int, default=montecarlo.SimConfig.seed)
        sp.add_argument("--paths", type=int, default=montecarlo.SimConfig.n_paths)
        sp.add_argument("--horizon", type=int, default=montecarlo.SimConfig.t_horizon)
        sp.add_argument("--strict", action="store_true", help="exit 2 on hypothesis warnings")
        if name == "compare":
            sp.add_argument("--methods", default="fourier,quick")
        if name in ("compare", "simulate"):
            sp.add_argument("--against", metavar="CSV", help="previously written curve to compare with")
    return ap


# ---------------------------------------------------------------------------

def _profile(args) -> dict:
    return inversion.FAST_PROFILE if args.fast else inversion.PAPER_PROFILE


# the left-tail series is only evaluated on moderate x unless asked otherwise
MODERATE_GRID = "0.02:3:300"


def _grid(args) -> np.ndarray:
    if args.grid:
        return parse_grid(args.grid)
    if args.command == "density":
        return inversion.default_grid()
    return parse_grid(MODERATE_GRID)


def _fourier_curve(model, args, xs) -> DensityCurve:
    prof = _profile(args)
    cfg = replace(DEFAULT_CONFIG, t_iter=prof["t_iter"])
    return inversion.density_fourier(model, cfg, xs, prof["y_max"], prof["n_points"])


def _tail_pieces(model, args, n_needed):
    m_max = 8 if args.m_max is None else args.m_max
    n_max = max(16, n_needed)
    return tail_series.prepare(model, DEFAULT_CONFIG, n_max=n_max, m_max=m_max)


def _series_curve(model, args, xs) -> DensityCurve:
    n_terms = 11 if args.n_terms is None else args.n_terms
    a, table = _tail_pieces(model, args, n_terms - 1)
    ps, last = tail_series.density_series(model, a, table, xs, n_terms)
    return DensityCurve(xs, ps, "series", {"n_terms": n_terms, "m_max": table.m_max,
                                           "max_last_term": float(np.max(last)),
                                           "model": model.to_dict()})


def _quick_curve(model, args, xs) -> DensityCurve:
    m_terms = 10 if args.n_terms is None else args.n_terms
    a, table = _tail_pieces(model, args, m_terms)
    ps = tail_series.density_quick(model, a, table, xs, m_terms)
    return DensityCurve(xs, ps, "quick", {"M": m_terms, "model": model.to_dict()})


CURVE_BUILDERS = {"fourier": _fourier_curve, "series": _series_curve, "quick": _quick_curve}


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, default=inversion._jsonable) + "\n")


def _manifest(args, argv, outputs, started, extra=None) -> dict:
    knobs = {k: v for k, v in vars(args).items() if k not in ("command", "model", "out")}
    out = {"tool": "gwimm", "version": __version__, "python": platform.python_version(),
           "subcommand": args.command, "model_path": str(args.model), "argv": list(argv),
           "knobs": knobs, "outputs": [str(o) for o in outputs],
           "wall_clock_s": round(time.perf_counter() - started, 6)}
    if extra:
        out.update(extra)
    return out


def _sidecar(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def _emit(args, argv, started, payload_path, extra=None):
    if payload_path is None:
        return
    _write_json(_sidecar(payload_path), _manifest(args, argv, [payload_path], started, extra))


def _hypothesis_problems(model: Model, probe: bool) -> list[str]:
    problems = []
    if not model.hypothesis_flags.exponent_below_minus_one:
        problems.append(f"log_E(p1 q0) = {model.schroder_exponent:.6g} is not < -1")
    if probe:
        rep = periodic.julia_sector_probe(model)
        if not rep.hypothesis_pi_ok:
            problems.append(f"critical-angle probe lower bound {rep.theta_star_lower:.3f} is not > pi")
    return problems


def _load_curve_checked(path, model: Model) -> DensityCurve:
    side = _sidecar(path)
    meta = json.loads(side.read_text()) if side.exists() else {}
    other = meta.get("curve", {}).get("params", {}).get("model")
    if other is not None and other != model.to_dict():
        raise ModelError(f"{path} was computed for a different model: {other}")
    method = meta.get("curve", {}).get("method", "fourier")
    return DensityCurve.from_csv(path, method=method)


# ---------------------------------------------------------------------------

def _cmd_curve(kind):
    def run(model, args, argv, started):
        xs = _grid(args)
        curve = CURVE_BUILDERS[kind](model, args, xs)
        print(json.dumps(curve.metadata(), default=inversion._jsonable))
        if args.out:
            curve.to_csv(args.out)
            _emit(args, argv, started, args.out, {"curve": curve.metadata()})
        return EXIT_OK
    return run


def _cmd_coeffs(model, args, argv, started):
    n = 32 if args.n_terms is None else args.n_terms
    g = series_alg.phi_inv_coeffs(model, n)
    h = series_alg.psi_of_phi_inv_coeffs(model, g, n)
    a = series_alg.a_coeffs(model, n)
    doc = {"g": g.tolist(), "h": h.tolist(), "A": a.tolist()}
    _dump(doc, args, argv, started)
    return EXIT_OK


def _cmd_fourier(model, args, argv, started):
    n = 16 if args.n_terms is None else args.n_terms
    m = 8 if args.m_max is None else args.m_max
    table = periodic.fourier_table(model, DEFAULT_CONFIG, n_max=n, m_max=m)
    _dump(table.records(), args, argv, started, {"dps": table.dps, "grid_size": table.grid_size})
    return EXIT_OK


def _dump(doc, args, argv, started, extra=None):
    text = json.dumps(doc, default=inversion._jsonable)
    if args.out:
        Path(args.out).write_text(text + "\n")
        _emit(args, argv, started, args.out, extra)
    else:
        print(text)


def _cmd_simulate(model, args, argv, started):
    cfg = montecarlo.SimConfig(n_paths=args.paths, t_horizon=args.horizon, seed=args.seed)
    samples = montecarlo.simulate(model, cfg)
    summ = montecarlo.summary(samples, model)
    summ["seed"] = cfg.seed
    summ["t_horizon"] = cfg.t_horizon
    if args.against:
        summ["ks"] = montecarlo.ks_distance(samples, _load_curve_checked(args.against, model))
    if args.out:
        np.savetxt(args.out, samples, header="w", comments="", fmt="%.17g")
        _emit(args, argv, started, args.out, {"summary": summ})
    print(json.dumps(summ))
    return EXIT_OK


def _cmd_validate(model, args, argv, started):
    report = checks.residual_report(model, DEFAULT_CONFIG)
    probe = periodic.julia_sector_probe(model)
    report["flags"] = model.hypothesis_flags.as_dict()
    report["critical_angle_lower"] = probe.theta_star_lower
    report["hypothesis_pi_ok"] = probe.hypothesis_pi_ok
    _dump(report, args, argv, started)
    return EXIT_OK if report["ok"] else EXIT_INVALID


def _cmd_compare(model, args, argv, started):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in CURVE_BUILDERS]
    if bad or not methods:
        raise UsageError(f"--methods must be drawn from {sorted(CURVE_BUILDERS)}")
    xs = _grid(args)
    cols = {m: CURVE_BUILDERS[m](model, args, xs).ps for m in methods}
    if args.against:
        other = _load_curve_checked(args.against, model)
        cols["against"] = np.interp(xs, other.xs, other.ps)
    names = list(cols)
    ref = cols[names[0]]
    scale = float(np.max(np.abs(ref)))
    diffs = {n: float(np.max(np.abs(cols[n] - ref))) for n in names[1:]}
    summary = {"reference": names[0], "sup_diff": diffs,
               "sup_diff_rel": {k: v / scale for k, v in diffs.items()}, "ref_max": scale}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(",".join(["x"] + names) + "\n")
            for i, x in enumerate(xs):
                fh.write(",".join([repr(float(x))] + [repr(float(cols[n][i])) for n in names]) + "\n")
        _emit(args, argv, started, args.out, {"summary": summary})
    print(json.dumps(summary))
    return EXIT_OK


COMMANDS = {
    "density": _cmd_curve("fourier"), "series": _cmd_curve("series"), "approx": _cmd_curve("quick"),
    "coeffs": _cmd_coeffs, "fourier": _cmd_fourier, "simulate": _cmd_simulate,
    "validate": _cmd_validate, "compare": _cmd_compare,
}


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        model = load_model(args.model)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"gwimm: cannot read model: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, ValueError) as exc:
        print(f"gwimm: invalid model: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.strict:
        problems = _hypothesis_problems(model, probe=args.command in ("series", "approx", "validate"))
        if problems:
            for p in problems:
                print(f"gwimm: strict: {p}", file=sys.stderr)
            return EXIT_STRICT
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisWarning)
            return COMMANDS[args.command](model, args, argv, started)
    except UsageError as exc:
        print(f"gwimm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, GwimmError) as exc:
        print(f"gwimm: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
