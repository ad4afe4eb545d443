"""Batch command line: sample, density, law, recursion, compare."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import equilibrium as eq
from . import kernels, recursion, sampler, stats
from .errors import SpectralGasError, Unsolved
from .potentials import Potential, by_name, critical_temperature

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_UNSOLVED = 0, 2, 3, 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- helpers

def parse_temperature(text: str, potential: Potential) -> float:
    t = text.strip().lower()
    if t.endswith("tc"):
        factor = t[:-2]
        return (float(factor) if factor else 1.0) * critical_temperature(potential)
    value = float(t)
    if value <= 0:
        raise ValueError("temperature must be positive")
    return value


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def write_columns(path, header, *cols) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def potential_from_args(args) -> Potential:
    return by_name(args.potential, eps=args.epsilon, m=args.m, b=args.b)


def _add_potential_flags(p):
    p.add_argument("--potential", choices=["quadratic", "critical-quartic", "singular"], default="quadratic")
    p.add_argument("--epsilon", "--eps", dest="epsilon", type=float, default=0.5)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--T", dest="T", default="1", help="number or multiple of tc, e.g. 0.5tc")


def _add_sample_flags(p):
    p.add_argument("--config", help="JSON file with GasConfig fields (overrides flags)")
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--sweeps", type=int, default=200, help="burn-in sweeps")
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=40)


def _gas_config(args) -> tuple[sampler.GasConfig, dict]:
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
            pot = raw.get("potential", {"name": "quadratic"})
            if "coefficients" in pot:
                v = Potential.from_json(json.dumps(pot))
            else:
                v = by_name(pot.get("name", "quadratic"), **pot.get("params", {}))
            T = parse_temperature(str(raw.get("temperature", "1")), v)
            cfg = sampler.GasConfig(
                int(raw["n"]), T, float(raw.get("beta", 1.0)), v,
                float(raw.get("proposal_sigma", 0.1)), int(raw.get("seed", 0)),
            )
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad config file: {exc}") from exc
        sched = {
            "burnin": int(raw.get("burnin_sweeps", args.sweeps)),
            "thin": int(raw.get("thin_sweeps", args.thin)),
            "samples": int(raw.get("n_samples", args.samples)),
            "chains": int(raw.get("n_chains", args.chains)),
        }
        return cfg, sched
    try:
        v = potential_from_args(args)
        T = parse_temperature(args.T, v)
        cfg = sampler.GasConfig(args.N, T, args.beta, v, args.sigma, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return cfg, {"burnin": args.sweeps, "thin": args.thin, "samples": args.samples, "chains": args.chains}


def _hist_range(data):
    lo, hi = float(np.min(data)), float(np.max(data))
    pad = 0.05 * max(hi - lo, 1e-12)
    return lo - pad, hi + pad


def _run_sample(args, out):
    cfg, sched = _gas_config(args)
    res = sampler.sample_ensemble(cfg, sched["samples"], sched["burnin"], sched["thin"], sched["chains"])
    paths = [os.path.join(out, n) for n in ("samples.csv", "samples.json", "histogram.csv")]
    sampler.write_samples_csv(paths[0], res.samples)
    sampler.write_sidecar(paths[1], cfg, res, schedule=sched)
    stats.histogram(res.pooled, args.bins, _hist_range(res.pooled)).write_csv(paths[2])
    return cfg, sched, res, paths


def _measure_summary(m: eq.EquilibriumMeasure) -> dict:
    d = json.loads(m.to_json())
    d["q"] = m.q
    d["regularity"] = eq.classify_regularity(m).value
    d["filling_fractions"] = m.filling_fractions()
    d["mass"] = m.mass()
    for i, c in enumerate(m.cuts, 1):
        d[f"a{i}"], d[f"b{i}"] = c.a, c.b
    return d


# ---------------------------------------------------------------- commands

def cmd_sample(args, out):
    cfg, sched, res, paths = _run_sample(args, out)
    return cfg.to_dict() | {"schedule": sched}, paths, cfg.seed


def cmd_density(args, out):
    try:
        v = potential_from_args(args)
        T = parse_temperature(args.T, v)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    m = eq.solve_auto(v, T)
    lo, hi = m.support
    pad = 0.1 * (hi - lo)
    xs = np.linspace(lo - pad, hi + pad, args.points)
    paths = [os.path.join(out, "density.csv"), os.path.join(out, "measure.json")]
    eq.write_density_csv(paths[0], m, xs)
    write_json(paths[1], _measure_summary(m))
    config = {"potential": json.loads(v.to_json()), "T": T, "points": args.points}
    return config, paths, None


def _law_values(args):
    xs = np.linspace(args.lo, args.hi, args.points)
    meta = {"kind": args.law, "order": args.order, "lambda": 1.0}
    if args.law == "surmise":
        return xs, {"formula": kernels.wigner_surmise(xs)}, meta
    if args.law == "cluster":
        meta["ensemble"] = args.ensemble
        xs = xs[xs > 0]
        return xs, {"formula": np.array([kernels.cluster_w2(x, args.ensemble) for x in xs])}, meta
    routes = ["fredholm", "painleve"] if args.route == "both" else [args.route]
    vals = {}
    if args.law == "tw":
        for r in routes:
            vals[r] = np.array([kernels.tw_cdf(x, route=r) for x in xs])
        errs = [
            kernels.fredholm_det(kernels.GapProblem(kernels.KernelKind.AIRY, x, math.inf, 1.0, kernels.laws._tw_order(x))).err_estimate
            for x in xs
        ] if "fredholm" in routes else [0.0]
    else:
        xs = xs[xs >= 0]
        for r in routes:
            vals[r] = np.array([kernels.gaudin_density(x, args.order, route=r) for x in xs])
        errs = [
            kernels.fredholm_det(kernels.GapProblem(kernels.KernelKind.SINE, 0.0, x, 1.0, args.order)).err_estimate
            for x in xs
        ] if "fredholm" in routes else [0.0]
    meta["err_estimate"] = float(max(errs))
    return xs, vals, meta


def cmd_law(args, out):
    if args.law in ("surmise", "cluster") and args.route == "both":
        raise UsageError("--route both applies to gaudin and tw only")
    xs, vals, meta = _law_values(args)
    paths = []
    for route, ys in vals.items():
        name = "law.csv" if len(vals) == 1 else f"law_{route}.csv"
        path = os.path.join(out, name)
        write_columns(path, ["x", "value"], xs, ys)
        paths.append(path)
    if len(vals) == 2:
        a, b = vals.values()
        meta["max_discrepancy"] = float(np.max(np.abs(a - b)))
    meta["routes"] = list(vals)
    side = os.path.join(out, "law.json")
    write_json(side, meta)
    paths.append(side)
    config = {"law": args.law, "lo": args.lo, "hi": args.hi, "points": args.points, "route": args.route}
    return config, paths, None


def _curve_from_args(args):
    if args.curve == "gaussian":
        return recursion.gaussian_curve(float(args.T)), None
    if args.curve == "rescaled":
        spec = recursion.RescaledCurveSpec.build(args.m, args.b, args.epsilon)
        return recursion.rescaled_curve(spec), spec
    v = potential_from_args(args)
    m = eq.solve_one_cut(v, parse_temperature(args.T, v))
    return eq.build_spectral_curve(m), None


def _parse_points(text, count):
    if text:
        pts = [complex(s.replace(" ", "")) for s in text.split(",")]
    else:
        pts = [complex(2.0 + k) for k in range(count)]
    if len(pts) != count:
        raise UsageError(f"need {count} spectator points")
    return pts


def cmd_recursion(args, out):
    try:
        recursion.validate_indices(args.n, args.g, args.max_depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    curve, spec = _curve_from_args(args)
    pts = _parse_points(args.spectators, args.n - 1)
    rf = recursion.correlator_rational(curve, args.n, args.g, pts)
    payload = json.loads(recursion.rational_to_json(rf, args.n, args.g, pts))
    payload["curve"] = {
        "kind": args.curve,
        "center": [complex(curve.center).real, complex(curve.center).imag],
        "halfwidth": [complex(curve.halfwidth).real, complex(curve.halfwidth).imag],
    }
    if spec is not None:
        payload["rescaled_spec"] = json.loads(spec.to_json())
    if args.n == 1 and args.g >= 1:
        fg = recursion.f_g(curve, args.g)
        payload["F_g"] = [fg.real, fg.imag]
    path = os.path.join(out, "correlator.json")
    write_json(path, payload)
    config = {"curve": args.curve, "n": args.n, "g": args.g, "spectators": [[p.real, p.imag] for p in pts]}
    return config, [path], None


def cmd_compare(args, out):
    cfg, sched, res, paths = _run_sample(args, out)
    m = eq.solve_auto(cfg.potential, cfg.temperature)
    ks = stats.ks_distance(res.pooled, m.cdf)
    report = {"ks_distance": ks, "measure": _measure_summary(m), "acceptance_rate": res.acceptance_rate}
    path = os.path.join(out, "compare.json")
    write_json(path, report)
    return cfg.to_dict() | {"schedule": sched}, paths + [path], cfg.seed


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spectralgas", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="run the log-gas sampler")
    _add_potential_flags(p)
    _add_sample_flags(p)

    p = sub.add_parser("density", help="equilibrium density")
    _add_potential_flags(p)
    p.add_argument("--points", type=int, default=401)

    p = sub.add_parser("law", help="universal law curves")
    p.add_argument("--law", required=True, choices=["gaudin", "tw", "surmise", "cluster"])
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=4.0)
    p.add_argument("--points", type=int, default=81)
    p.add_argument("--route", choices=["fredholm", "painleve", "both"], default="fredholm")
    p.add_argument("--ensemble", choices=[e.value for e in kernels.Ensemble], default="hermitian")
    p.add_argument("--order", type=int, default=40)

    p = sub.add_parser("recursion", help="topological recursion correlators")
    p.add_argument("--curve", choices=["gaussian", "rescaled", "equilibrium"], default="gaussian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--spectators", help="comma-separated complex z values, e.g. 2,3+1j")
    p.add_argument("--max-depth", type=int, default=recursion.MAX_DEPTH)
    _add_potential_flags(p)

    p = sub.add_parser("compare", help="sample and compare against the equilibrium CDF")
    _add_potential_flags(p)
    _add_sample_flags(p)

    for sp in sub.choices.values():
        sp.add_argument("--out", default=".", help="output directory")
    return ap


COMMANDS = {
    "sample": cmd_sample,
    "density": cmd_density,
    "law": cmd_law,
    "recursion": cmd_recursion,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    os.makedirs(args.out, exist_ok=True)
    start = time.perf_counter()
    try:
        config, outputs, seed = COMMANDS[args.command](args, args.out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"spectralgas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Unsolved as exc:
        print(f"spectralgas: unsolved: {exc}", file=sys.stderr)
        return EXIT_UNSOLVED
    except (SpectralGasError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"spectralgas: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    manifest = {
        "command": args.command,
        "config": config,
        "outputs": outputs,
        "wall_time": time.perf_counter() - start,
        "seed": seed,
    }
    path = os.path.join(args.out, "manifest.json")
    write_json(path, manifest)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
