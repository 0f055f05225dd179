"""Command-line front door: analyze spectra, run cross-check suites,
generate corpus members, emit deterministic reports."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import checks, corpus, heat, means, zeta
from .errors import DivergenceError, InputError, SingtraceError
from .means import LimitConfig
from .report import (AnalysisReport, canonical_json, limit_entry,
                     scalar_entry, seminorm_entry, sup_entry)
from .spaces import (LOG_SQ, PSI_1, make_psi, norm_convention_ratio,
                     power_residue_seminorm, quasinorm, residue_seminorm)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CONVERGED = 3

QUANTITIES = ("norm", "quasinorm", "z1", "zp", "dixmier", "zeta-limit",
              "residue", "heat-limit", "small-ideal", "triple")


def _parse_psi(spec: str):
    if spec == "psi1":
        return PSI_1
    if spec == "log2":
        return LOG_SQ
    if spec.startswith("psi_p:"):
        return make_psi("psi_p", p=float(spec.split(":", 1)[1]))
    if spec.startswith("custom:"):
        path = spec.split(":", 1)[1]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
            table = (data["ln_t"], data["ln_psi"])
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"cannot read custom psi from {path}: {exc}")
        return make_psi("custom", table=table,
                        name=str(data.get("name", "custom")))
    raise InputError(f"unknown psi spec {spec!r} "
                     "(use psi1 | psi_p:<p> | log2 | custom:<file>)")


def _load_input(spec: str):
    if spec.startswith("gen:"):
        return corpus.parse_gen_spec(spec), {"generator": spec}
    if spec == "-":
        return corpus.load_spectrum(sys.stdin), {"stream": "stdin"}
    if not os.path.exists(spec):
        raise InputError(f"input file not found: {spec}")
    with open(spec, "r", encoding="utf-8") as fh:
        return corpus.load_spectrum(fh), {"path": spec}


def _default_tolerance() -> float:
    raw = os.environ.get("SINGTRACE_TOL")
    if raw is None:
        return 1e-3
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"SINGTRACE_TOL is not a number: {raw!r}")


def cmd_analyze(args, tol: float) -> int:
    x, descriptor = _load_input(args.input)
    psi = _parse_psi(args.psi)
    wanted = [q.strip() for q in args.quantities.split(",") if q.strip()]
    for q in wanted:
        if q not in QUANTITIES:
            raise InputError(f"unknown quantity {q!r} "
                             f"(choose from {', '.join(QUANTITIES)})")
    horizon_ln = args.horizon_ln
    if args.horizon is not None:
        if horizon_ln is not None:
            raise InputError("pass only one of --horizon and --horizon-ln")
        if not args.horizon > 1.0:
            raise InputError("--horizon must exceed 1")
        horizon_ln = math.log(args.horizon)
    cfg = LimitConfig(tolerance=tol)

    started = time.perf_counter()
    quantities: dict = {}
    verdicts: dict = {}
    unconverged = []
    for q in wanted:
        if q == "norm":
            full, restricted, ratio = norm_convention_ratio(x, psi)
            quantities[q] = sup_entry(full, psi=psi.name)
            quantities[q]["restricted_to_t_ge_1"] = restricted.value
            quantities[q]["convention_ratio"] = ratio
        elif q == "quasinorm":
            quantities[q] = sup_entry(quasinorm(x, psi), psi=psi.name)
        elif q == "z1":
            quantities[q] = seminorm_entry(residue_seminorm(x))
        elif q == "zp":
            rep = power_residue_seminorm(x, args.p)
            quantities[q] = {
                "kind": "seminorm",
                "value": rep.value,
                "plus_variant": rep.plus_variant,
                "variant_ratio": rep.variant_ratio,
                "q": rep.q,
                "band": list(rep.base.limsup_band),
                "notes": rep.base.notes,
            }
        elif q == "dixmier":
            est = means.dixmier_estimate(x, psi, cfg, horizon_ln=horizon_ln)
            quantities[q] = limit_entry(est)
            if not est.converged:
                unconverged.append(q)
        elif q == "zeta-limit":
            rep = zeta.zeta_limit(x, args.p)
            quantities[q] = limit_entry(rep.estimate)
            quantities[q]["p"] = args.p
            quantities[q]["marcinkiewicz_finite"] = rep.marcinkiewicz_finite
            if not rep.converged:
                unconverged.append(q)
        elif q == "residue":
            rep = zeta.residue_estimate(x, args.p)
            quantities[q] = limit_entry(rep.estimate)
            quantities[q]["p"] = args.p
            if not rep.estimate.converged:
                unconverged.append(q)
        elif q == "heat-limit":
            rep = heat.heat_profile_limit(x, args.p, args.q,
                                          horizon_ln=horizon_ln)
            quantities[q] = limit_entry(rep.estimate)
            quantities[q].update({
                "p": args.p, "q": args.q,
                "gamma_factor": rep.gamma_factor,
                "zeta_side_band": list(rep.zeta_side_band),
                "dixmier_side_band": list(rep.dixmier_side_band),
            })
            if rep.passed is not None:
                verdicts["heat-limit-overlap"] = rep.passed
            if not rep.estimate.converged:
                unconverged.append(q)
        elif q == "small-ideal":
            quantities[q] = sup_entry(heat.small_ideal_constant(x))
        elif q == "triple":
            tr = means.dixmier_triple(x, psi, cfg, horizon_ln=horizon_ln)
            quantities[q] = {
                "kind": "triple",
                "mean": limit_entry(tr.mean),
                "truncated": limit_entry(tr.truncated),
                "windowed": limit_entry(tr.windowed),
                "max_band_gap": tr.max_band_gap,
                "max_value_spread": tr.max_value_spread,
            }
            verdicts["triple-converged-flags-agree"] = tr.converged_agree
            if not tr.mean.converged:
                unconverged.append(q)
    if "zp" in wanted and "quasinorm" in wanted:
        zp_val = quantities["zp"]["plus_variant"]
        qn_val = quantities["quasinorm"]["value"]
        verdicts["separation"] = bool(math.isfinite(zp_val)
                                      and qn_val == math.inf)

    report = AnalysisReport(descriptor, psi.name,
                            {"p": args.p, "q": args.q},
                            quantities, verdicts,
                            {"tolerance": tol},
                            wall_time_s=time.perf_counter() - started)
    _emit(report.to_json() if args.format == "json" else report.to_csv(),
          args.out)
    print(f"analyzed {args.input} in {report.wall_time_s:.3f}s",
          file=sys.stderr)
    if args.require_converged and unconverged:
        print(f"not converged: {', '.join(unconverged)}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_check(args, tol: float) -> int:
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    payload = {"schema": "1", "tool": "singtrace", "suites": {}}
    all_ok = True
    started = time.perf_counter()
    for name in names:
        cases = checks.run_suite(name)
        payload["suites"][name] = [
            {"case": c.name, "passed": c.passed, "details": c.details}
            for c in cases
        ]
        all_ok &= all(c.passed for c in cases)
    payload["all_passed"] = all_ok
    _emit(canonical_json(payload) + "\n", args.out)
    print(f"checked {', '.join(names)} in "
          f"{time.perf_counter() - started:.3f}s", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args, tol: float) -> int:
    x = corpus.gen_spectrum(args.kind, *args.params, head=args.head,
                            sort=args.sort)
    if args.out == "-":
        corpus.save_spectrum(x, sys.stdout)
    else:
        corpus.save_spectrum(x, args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singtrace",
        description="Numerics for singular-value data: weighted-mean "
                    "norms, residue seminorms, averaged-trace bands, "
                    "zeta limits and heat asymptotics.")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="compute quantities for a spectrum")
    a.add_argument("input",
                   help="spectrum file, '-' for stdin, or gen:<kind>[:p...]")
    a.add_argument("--psi", default="psi1",
                   help="psi1 | psi_p:<p> | log2 | custom:<file>")
    a.add_argument("--p", type=float, default=1.0,
                   help="power for zp/zeta-limit/residue/heat-limit")
    a.add_argument("--q", type=float, default=2.0,
                   help="heat exponent for heat-limit")
    a.add_argument("--quantities", default="norm,z1,dixmier",
                   help="comma list: " + ",".join(QUANTITIES))
    a.add_argument("--tol", type=float, default=None,
                   help="band tolerance (default SINGTRACE_TOL or 1e-3)")
    a.add_argument("--horizon", type=float, default=None,
                   help="limit-curve horizon in t")
    a.add_argument("--horizon-ln", type=float, default=None,
                   help="limit-curve horizon as ln t (for huge horizons)")
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.add_argument("--require-converged", action="store_true",
                   help="exit 3 when a requested limit reports band-only")
    a.add_argument("--out", default=None, help="write report to a file")

    c = sub.add_parser("check", help="run a named cross-check suite")
    c.add_argument("suite", choices=tuple(checks.SUITES) + ("all",))
    c.add_argument("--out", default=None)

    g = sub.add_parser("gen", help="generate a corpus spectrum file")
    g.add_argument("kind", help="harmonic | power | oscillating | "
                                "small_ideal | counterexample_z | "
                                "counterexample_x | finite")
    g.add_argument("params", nargs="*", help="kind-specific parameters")
    g.add_argument("out", help="output path or '-' for stdout")
    g.add_argument("--head", type=int, default=corpus.DEFAULT_HEAD,
                   help="explicit head length for power spectra")
    g.add_argument("--sort", action="store_true",
                   help="sort finite value lists into decreasing order")
    return parser


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if getattr(args, "tol", None) is not None \
            else _default_tolerance()
        if args.command == "analyze":
            return cmd_analyze(args, tol)
        if args.command == "check":
            return cmd_check(args, tol)
        if args.command == "gen":
            return cmd_gen(args, tol)
        raise InputError(f"unknown command {args.command!r}")
    except (InputError, DivergenceError, OSError) as exc:
        code = getattr(exc, "code", "error")
        print(f"error[{code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SingtraceError as exc:
        print(f"error[{getattr(exc, 'code', 'error')}]: {exc}",
              file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
