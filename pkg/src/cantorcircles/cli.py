"""Command-line surface: construct, solve, certify, render, trace, classify.

Exit codes: 0 success, 1 certificate/verification failure, 2 usage error.
All numeric arguments are decimal strings parsed at the job's working
precision, so no value silently round-trips through a double.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from . import certify as cert
from . import dynamics, solver, symbolic
from .errors import CantorCirclesError, CertificateFailed, ConstraintViolated
from .families import (
    KIND_F,
    KIND_P,
    KIND_Q,
    KIND_R,
    MapSpec,
    make_f_map,
    make_p_map,
    ref_poly_g,
    ref_poly_gmn,
    ref_rat_h,
    ref_rat_hmn,
    spec_to_json,
    validate_degrees,
)
from .numerics import DEFAULT_SOLVER_DIGITS, PrecisionContext

PRECISION_ENV = "CANTOR_PRECISION"


@dataclass
class JobConfig:
    command: str
    family: str | None = None
    degrees: tuple = ()
    s: str | None = None
    rings: tuple = ()
    precision: int = DEFAULT_SOLVER_DIGITS
    viewport: tuple | None = None
    resolution: tuple = (256, 256)
    budget: int = 10_000
    workers: int = 1
    word: str | None = None
    out: str | None = None


def _num(ctx: PrecisionContext, text: str):
    with ctx.workdps():
        return mp.mpf(text)


def _nstr(x, digits=20) -> str:
    return mp.nstr(mp.mpf(x) if not isinstance(x, (mp.mpf, mp.mpc)) else x, digits)


def _build_spec(args, ctx: PrecisionContext) -> MapSpec:
    family = args.family
    ref = {"g": ref_poly_g, "h": ref_rat_h}
    ref2 = {"gmn": ref_poly_gmn, "hmn": ref_rat_hmn}
    if family in ref:
        return ref[family](int(args.degrees.split(",")[0]), ctx)
    if family in ref2:
        m, n = (int(x) for x in args.degrees.split(","))
        return ref2[family](m, n, ctx)
    degrees = tuple(int(x) for x in args.degrees.split(","))
    rings = []
    for i in range(1, 10):
        val = getattr(args, f"a{i}", None)
        if val is not None:
            rings.append(_num(ctx, val))
    if getattr(args, "rings", None):
        rings = [_num(ctx, v) for v in args.rings.split(",")]
    s = _num(ctx, args.s) if args.s is not None else None
    if family == KIND_P:
        return make_p_map(degrees, s=s, rings=rings or None, precision=ctx)
    if family == KIND_F:
        return make_f_map(degrees, p=args.p, s=s, rings=rings or None, precision=ctx)
    if family == KIND_Q:
        if s is None:
            raise ConstraintViolated("family Q needs --s (rings follow the schedule)")
        return solver.build_q_map(degrees, s, ctx)
    if family == KIND_R:
        if s is None:
            raise ConstraintViolated("family R needs --s")
        return solver.build_r_map(degrees, s, ctx)
    raise ConstraintViolated(f"unknown family {family!r}")


def write_report(report, path: str):
    """JSON for dicts, PPM/PNG for label grids, CSV for curves."""
    if isinstance(report, dynamics.LabelGrid):
        if path.endswith(".png"):
            from PIL import Image

            lut = np.zeros((256, 3), dtype=np.uint8)
            for tag, rgb in dynamics.PALETTE.items():
                lut[int(tag)] = rgb
            img = lut[report.tags].reshape(report.px_h, report.px_w, 3)
            Image.fromarray(img, "RGB").save(path)
        else:
            dynamics.write_ppm(report, path)
        return
    if isinstance(report, symbolic.ComponentCurve):
        with open(path, "w") as fh:
            fh.write(symbolic.curve_to_csv(report))
        return
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(doc, out: str | None):
    if out:
        write_report(doc, out)
    else:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def _cmd_params(args, ctx):
    spec = _build_spec(args, ctx)
    doc = spec_to_json(spec)
    if spec.degrees is not None:
        d = spec.degrees
        with ctx.workdps():
            doc["derived"] = {
                "nu": str(d.nu),
                "nu_value": _nstr(d.nu_value(ctx)),
                "tau": _nstr(d.tau_value(ctx)),
                "mu": _nstr(d.mu_value(ctx)),
                "d_max": d.d_max,
                "D": list(d.D),
                "degree": d.total_degree,
            }
    _emit(doc, args.out)
    return 0


def _cmd_solve(args, ctx):
    degrees = tuple(int(x) for x in args.degrees.split(","))
    fn = {KIND_Q: solver.solve_q, KIND_R: solver.solve_r}.get(args.family)
    if fn is None:
        raise ConstraintViolated("solve supports families Q and R")
    with ctx.workdps():
        s = mp.mpf(args.s)
        sol = fn(degrees, s, ctx)
        doc = {
            "family": args.family,
            "degrees": list(degrees),
            "s": _nstr(s, ctx.significant_digits),
            "precision": ctx.significant_digits,
            "coefficients": {
                k: mp.nstr(v, ctx.significant_digits) for k, v in sol.values.items()
            },
            "residual_norm": _nstr(sol.residual_norm, 8),
            "iterations": sol.iterations,
            "asymptotic_ratios": {
                name: {"value": _nstr(v, 20), "limit": _nstr(lim, 20)}
                for name, (v, lim) in sol.asymptotic_ratios.items()
            },
        }
        if args.grid:
            rows = solver.asymptotic_regression(
                args.family, degrees, [mp.mpf(x) for x in args.grid.split(",")], ctx
            )
            doc["regression"] = [
                {
                    "s": _nstr(row["s"], 8),
                    "ratios": {
                        k: {"value": _nstr(v, 16), "limit": _nstr(l, 16),
                            "deviation": _nstr(dev, 6)}
                        for k, (v, l, dev) in row["ratios"].items()
                    },
                }
                for row in rows
            ]
    _emit(doc, args.out)
    return 0


def _cmd_certify(args, ctx):
    spec = _build_spec(args, ctx)
    checks = args.checks.split(",") if args.checks else ["parabolic", "critical", "trapping"]
    bundle = {"family": args.family, "checks": {}}
    failed = False
    with ctx.workdps():
        if "parabolic" in checks and spec.kind in (KIND_P, KIND_Q, KIND_R, "g", "h", "gmn", "hmn"):
            rep = cert.check_parabolic(spec)
            bundle["checks"]["parabolic"] = {
                "passed": rep.passed,
                "residuals": {k: _nstr(v, 6) for k, v in rep.residuals.items()},
                "tolerance": _nstr(rep.tolerance, 4),
            }
            failed |= not rep.passed
        if "critical" in checks and spec.kind in (KIND_P, KIND_Q, KIND_R):
            rep = cert.certify_critical_points(spec)
            bundle["checks"]["critical"] = {
                "passed": rep.passed,
                "total_multiplicity": rep.total_multiplicity,
                "expected": rep.expected_multiplicity,
                "max_seed_distance": _nstr(
                    max((p[3] for p in rep.points if p[2] not in ("origin", "infinity")),
                        default=mp.mpf(0)), 6),
            }
            failed |= not rep.passed
        if "trapping" in checks:
            reports = cert.certify_canonical_traps(spec, args.samples)
            bundle["checks"]["trapping"] = {
                name: {
                    "passed": rep.passed,
                    "worst_margin": _nstr(rep.worst_margin, 6),
                    "samples": rep.sample_count,
                    "iterate": rep.iterate,
                }
                for name, rep in reports.items()
            }
            failed |= any(not rep.passed for rep in reports.values())
    bundle["passed"] = not failed
    _emit(bundle, args.out)
    return 1 if failed else 0


def _cmd_render(args, ctx):
    spec = _build_spec(args, ctx)
    xmin, xmax, ymin, ymax = (float(x) for x in args.viewport.split(","))
    vp = dynamics.Viewport.from_bounds(xmin, xmax, ymin, ymax)
    res = tuple(int(x) for x in args.res.split("x")) if "x" in args.res else (int(args.res),) * 2
    grid = dynamics.render(spec, vp, res, args.budget, workers=args.workers)
    if args.out:
        write_report(grid, args.out)
    else:
        sys.stdout.write(
            json.dumps({tag.name: grid.fraction(tag) for tag in dynamics.BasinTag}) + "\n"
        )
    return 0


def _cmd_trace(args, ctx):
    spec = _build_spec(args, ctx)
    word = symbolic.parse_word(args.word)
    if word.period:
        raise ConstraintViolated("trace takes a finite word (no parentheses)")
    curve = symbolic.trace_component(
        spec, word.preperiod, base_radius=args.base_radius, samples=args.samples
    )
    turning = symbolic.turning_constant(curve, args.pair_budget) if args.turning else None
    if args.out:
        write_report(curve, args.out)
        env_path = os.path.splitext(args.out)[0] + ".json"
        write_report(symbolic.curve_envelope(curve, turning), env_path)
    else:
        _emit(symbolic.curve_envelope(curve, turning), None)
    return 0


def _cmd_classify(args, ctx):
    if args.runs:
        verdict = symbolic.classify_run_lengths(int(x) for x in args.runs.split(","))
    else:
        word = symbolic.parse_word(args.word)
        verdict = symbolic.classify_itinerary(args.family, args.n, word)
    _emit({"verdict": verdict}, args.out)
    return 0


def _cmd_turning(args, ctx):
    if args.curve:
        verts = symbolic.curve_from_csv(open(args.curve).read())
        value = symbolic.turning_constant(verts, args.pair_budget)
    else:
        spec = _build_spec(args, ctx)
        word = symbolic.parse_word(args.word)
        curve = symbolic.trace_component(
            spec, word.preperiod, base_radius=args.base_radius, samples=args.samples
        )
        value = symbolic.turning_constant(curve, args.pair_budget)
    _emit({"turning": value}, args.out)
    return 0


# --------------------------------------------------------------------------
# worked-example reproduction suite
# --------------------------------------------------------------------------

def _repro_rows(ctx: PrecisionContext):
    from .families import coefficients_P, explicit_rings

    rows = []

    def check(name, measured, expected, tol, relative=False):
        measured = mp.mpf(measured)
        expected = mp.mpf(expected)
        err = abs(measured - expected)
        if relative:
            err = err / abs(expected)
        rows.append(
            {
                "name": name,
                "measured": _nstr(measured, 16),
                "expected": _nstr(expected, 16),
                "tolerance": _nstr(mp.mpf(tol), 4),
                "relative": relative,
                "pass": bool(err < mp.mpf(tol)),
            }
        )

    with ctx.workdps():
        d33 = validate_degrees((3, 3))
        rings33 = explicit_rings([mp.mpf("0.25")], ctx)
        A2, B2, _ = coefficients_P(d33, rings33, ctx)
        check("P(3,3) A2", A2, mp.mpf("0.99878079"), "5e-8")
        check("P(3,3) B2", B2, mp.mpf("0.00146306"), "5e-8")

        d444 = validate_degrees((4, 4, 4))
        rings444 = explicit_rings([mp.mpf("0.1"), mp.mpf("0.01")], ctx)
        A3, B3, _ = coefficients_P(d444, rings444, ctx)
        check("P(4,4,4) A3-1", A3 - 1, mp.mpf("-7e-8"), "1e-8")
        check("P(4,4,4) B3", B3, mp.mpf("8e-8"), "1e-8")

        state = solver.q_system(d444, mp.mpf("1e-8"), ctx)
        check("Q b1", abs(state.rings.values[0]), 2 * mp.sqrt(2) / 100, "1e-30")
        check("Q b2", abs(state.rings.values[1]), mp.mpf("4e-4"), "1e-30")
        rho1, rho2, rho3, rho4 = state.rho
        check("Q rho1-1", rho1 - 1, mp.mpf("-4.096e-13"), 0.01, relative=True)
        check("Q rho3", rho3, mp.mpf("3.2768e-12"), 0.01, relative=True)
        check("Q rho4", rho4, mp.mpf("2.6e-15"), 0.10, relative=True)
        check("Q s^nu", state.s_nu, mp.mpf("4.64e-6"), 0.01, relative=True)

        sol = solver.solve_q(d444, mp.mpf("1e-8"), ctx)
        check("Q X3-1", sol.values["X"] - 1, mp.mpf("1.5471913857e-6"), "1e-9", relative=True)
        check("Q Y3", sol.values["Y"], mp.mpf("9.2832930409e-6"), "1e-9", relative=True)
        check("Q Z3-1", sol.values["Z"] - 1, mp.mpf("-5.38605e-11"), "1e-4", relative=True)
        check("Q W3", sol.values["W"], mp.mpf("3.4811916252e-6"), "1e-9", relative=True)

        sR = mp.mpf(2) ** 8 * mp.mpf("1e-12")
        stR = solver.r_system(d444, sR, ctx)
        check("R mu*s^nu", stR.mu_s_nu, mp.mpf("1e-8"), "1e-30")
        check("R c1", abs(stR.rings.values[0]), mp.mpf("8e-3"), "1e-30")
        check("R c2", abs(stR.rings.values[1]), mp.mpf("3.2e-5"), "1e-30")
        check("R kappa3", stR.kappa3, mp.mpf("-1.34217728e-16"), "1e-22")
        solR = solver.solve_r(d444, sR, ctx)
        check("R I3-1", solR.values["I"] - 1, mp.mpf("2.5e-7"), 0.10, relative=True)
        check("R J3-1", solR.values["J"] - 1, mp.mpf("9e-8"), 0.10, relative=True)
        check("R z1-1", solR.values["z1"] - 1, mp.mpf("1e-7"), 0.10, relative=True)
        check("R S3", solR.values["S"], mp.mpf("1e-8"), "1e-6", relative=True)
        check("R T3", solR.values["T"], mp.mpf("1.5e-7"), "1e-6", relative=True)
        check("R z0", solR.values["z0"], mp.mpf("1.6e-7"), "1e-6", relative=True)

        ptol = mp.mpf("1e-30")
        specs = {
            "P(3,3)": make_p_map((3, 3), rings=rings33, precision=ctx),
            "P(4,4,4)": make_p_map((4, 4, 4), rings=rings444, precision=ctx),
            "Q(4,4,4)": solver.build_q_map((4, 4, 4), mp.mpf("1e-8"), ctx),
            "R(4,4,4)": solver.build_r_map((4, 4, 4), sR, ctx),
        }
        for name, spec in specs.items():
            rep = cert.check_parabolic(spec, tol=ptol)
            worst = max(rep.residuals.values())
            check(f"parabolic {name}", worst, 0, "1e-30")

    table = [
        ("P", 4, "(1133)", symbolic.QUASICIRCLE),
        ("P", 3, "(123)", symbolic.QUASICIRCLE),
        ("Q", 3, "(122)", symbolic.QUASICIRCLE),
        ("R", 3, "(112)", symbolic.QUASICIRCLE),
        ("P", 2, "(1)", symbolic.NOT_QUASICIRCLE),
        ("Q", 3, "(1)", symbolic.NOT_QUASICIRCLE),
    ]
    for kind, n, text, expected in table:
        verdict = symbolic.classify_itinerary(kind, n, symbolic.parse_word(text))
        rows.append(
            {
                "name": f"classify {kind} n={n} {text}",
                "measured": verdict,
                "expected": expected,
                "pass": verdict == expected,
            }
        )
    return rows


def _cmd_repro(args, ctx):
    rows = _repro_rows(ctx)
    ok = all(r["pass"] for r in rows)
    doc = {"passed": ok, "checks": rows}
    _emit(doc, args.out)
    return 0 if ok else 1


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _add_family_args(p: argparse.ArgumentParser):
    p.add_argument("--family", default="P", help="P, Q, R, f, g, h, gmn, hmn")
    p.add_argument("--degrees", default="3,3", help="comma list, e.g. 4,4,4")
    p.add_argument("--s", default=None, help="ring scale (decimal string)")
    p.add_argument("--rings", default=None, help="explicit ring values, comma list")
    for i in range(1, 5):
        p.add_argument(f"--a{i}", default=None, help=f"explicit ring value a_{i}")
    p.add_argument("--p", type=int, default=1, help="parity for family f")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cantorcircles",
        description="Cantor-circle Julia sets: parabolic families, solves, "
        "certificates, rendering, tracing, classification.",
    )
    ap.add_argument(
        "--precision",
        type=int,
        default=int(os.environ.get(PRECISION_ENV, DEFAULT_SOLVER_DIGITS)),
        help="decimal working precision",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="construct a family and print its parameters")
    _add_family_args(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("solve", help="solve the Q or R coefficient system")
    _add_family_args(p)
    p.add_argument("--grid", default=None, help="s grid for the asymptotic table")
    p.add_argument("--out", default=None)

    p = sub.add_parser("certify", help="run numerical certificates")
    _add_family_args(p)
    p.add_argument("--checks", default=None, help="comma subset of parabolic,critical,trapping")
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--out", default=None)

    p = sub.add_parser("render", help="raster the basin structure")
    _add_family_args(p)
    p.add_argument("--viewport", default="-1,1,-1,1", help="xmin,xmax,ymin,ymax")
    p.add_argument("--res", default="256", help="N or WxH pixels")
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("trace", help="trace a Julia component by its word")
    _add_family_args(p)
    p.add_argument("--word", required=True)
    p.add_argument("--samples", type=int, default=symbolic.DEFAULT_SAMPLES)
    p.add_argument("--base-radius", type=float, default=None, dest="base_radius")
    p.add_argument("--turning", action="store_true")
    p.add_argument("--pair-budget", type=int, default=symbolic.DEFAULT_PAIR_BUDGET,
                   dest="pair_budget")
    p.add_argument("--out", default=None)

    p = sub.add_parser("classify", help="quasicircle verdict for an itinerary")
    p.add_argument("--family", default="P")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--word", default=None, help='periodic words use parens: "11(33)"')
    p.add_argument("--runs", default=None, help="explicit run-length profile")
    p.add_argument("--out", default=None)

    p = sub.add_parser("turning", help="bounded-turning estimate of a curve")
    _add_family_args(p)
    p.add_argument("--curve", default=None, help="CSV produced by trace")
    p.add_argument("--word", default=None)
    p.add_argument("--samples", type=int, default=symbolic.DEFAULT_SAMPLES)
    p.add_argument("--base-radius", type=float, default=None, dest="base_radius")
    p.add_argument("--pair-budget", type=int, default=symbolic.DEFAULT_PAIR_BUDGET,
                   dest="pair_budget")
    p.add_argument("--out", default=None)

    p = sub.add_parser("repro", help="reproduce the worked examples end to end")
    p.add_argument("--out", default=None)

    return ap


_COMMANDS = {
    "params": _cmd_params,
    "solve": _cmd_solve,
    "certify": _cmd_certify,
    "render": _cmd_render,
    "trace": _cmd_trace,
    "classify": _cmd_classify,
    "turning": _cmd_turning,
    "repro": _cmd_repro,
}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ctx = PrecisionContext(args.precision)
    try:
        return _COMMANDS[args.command](args, ctx)
    except CertificateFailed as exc:
        print(f"certificate failed: {exc}", file=sys.stderr)
        return 1
    except (ConstraintViolated, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CantorCirclesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
