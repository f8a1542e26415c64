"""Command-line surface: identity suites, spectra, Bethe solving, comparison.

Subcommands
-----------
check       structural and functional identity suites on a model file
spectrum    CSV export of all exact eigenvalue curves on a real u-grid
solve       solve the Bethe-root system in one sector, emit states JSON
compare     compare states from a JSON file against exact curves
degenerate  two-term reduction checks on a constrained model

Every command reads the model from a JSON config (--config) and writes a
run manifest next to its outputs.  Floating output carries 15 significant
digits; all comparisons happen on in-memory values, never on printed text.
Data artifacts are deterministic for a fixed --rng-seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bethe import (
    DegenerateSpec,
    bae_residuals,
    degenerate_reduce,
    lambda_tq,
    load_states,
    refine_state,
    save_states,
    solve_bae,
    state_to_dict,
    verify_state,
)
from .functional import check_truncation, scalar_functions
from .model import ModelConfig, ValidationError, check_rll, load_config, validate
from .spectrum import spectrum_curves
from .transfer import (
    charge_commutation_residual,
    charge_power_residual,
    charge_q,
    commutativity_residual,
    constants,
    laurent_charges,
    quantum_determinant,
    quasi_periodicity_residual,
    rtt_residual,
    transfer,
)

_FLOAT_FMT = "{:.15g}"


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{_FLOAT_FMT.format(x.real)}{x.imag:+.15g}i"
    return _FLOAT_FMT.format(x)


def _random_points(rng, count, re_span=1.5, im_span=np.pi):
    return rng.uniform(-re_span, re_span, count) + 1j * rng.uniform(
        -im_span, im_span, count
    )


# ---------------------------------------------------------------------------
# check

def run_checks(config: ModelConfig, rng_seed: int = 0, n_points: int = 20,
               tol: float = 1e-10) -> list[dict]:
    """The identity suite; one record per check with residual and verdict."""
    rng = np.random.default_rng(rng_seed)
    checks: list[dict] = []

    def add(name, residual, tolerance=tol):
        checks.append(
            {
                "name": name,
                "residual": float(residual),
                "tolerance": tolerance,
                "pass": bool(residual <= tolerance),
            }
        )

    rep = validate(config)
    checks.append(
        {
            "name": "site_constraints",
            "residual": max(
                [r.minus_residual for r in rep.site_reports]
                + [r.plus_residual for r in rep.site_reports]
                + [0.0]
            ),
            "tolerance": 1e-12,
            "pass": rep.ok,
            "problems": list(rep.problems),
        }
    )
    if not rep.ok:
        return checks

    us = _random_points(rng, n_points)
    vs = _random_points(rng, n_points)

    add("rll", max(
        check_rll(u, v, site, config)
        for u, v in zip(us[:5], vs[:5])
        for site in range(1, config.n_sites + 1)
    ))
    add("rtt", max(rtt_residual(u, v, config) for u, v in zip(us[:5], vs[:5])))
    add("transfer_commutativity",
        max(commutativity_residual(u, v, config) for u, v in zip(us, vs)))
    add("quasi_periodicity",
        max(quasi_periodicity_residual(u, config) for u in us))
    add("charge_commutation",
        max(charge_commutation_residual(u, config) for u in us))
    add("charge_power", charge_power_residual(config))

    sf = scalar_functions(config)
    qdet_worst = 0.0
    for u in us[:10]:
        op = quantum_determinant(u, config)
        target = sf.delta(u) * np.eye(config.dim)
        scale = max(np.abs(op).max(), abs(sf.delta(u)), 1e-300)
        qdet_worst = max(qdet_worst, float(np.abs(op - target).max() / scale))
    add("quantum_determinant", qdet_worst)

    # averaged entries: closed-form site products vs p-fold operator products
    avg_worst = 0.0
    for u in us[:3]:
        mono_a = np.eye(config.dim, dtype=np.complex128)
        mono_d = np.eye(config.dim, dtype=np.complex128)
        for m in range(1, config.p + 1):
            from .transfer import monodromy

            t = monodromy(u - m * config.eta, config)
            mono_a = mono_a @ t.a
            mono_d = mono_d @ t.d
        for op, ref in ((mono_a, sf.cal_a(u)), (mono_d, sf.cal_d(u))):
            scale = max(np.abs(op).max(), abs(ref), 1e-300)
            avg_worst = max(
                avg_worst, float(np.abs(op - ref * np.eye(config.dim)).max() / scale)
            )
    add("averaged_entries", avg_worst, 1e-8)

    # eta-periodicity of the averages and their Laurent extremes
    cs = constants(config)
    per_worst = 0.0
    asym_worst = 0.0
    from .laurent import fit_laurent

    for fn, lead, trail in (
        (sf.cal_a, cs.d_plus**config.p, cs.d_minus**config.p),
        (sf.cal_d, cs.f_plus**config.p, cs.f_minus**config.p),
    ):
        for u in us[:5]:
            per_worst = max(
                per_worst,
                abs(fn(u + config.eta) - fn(u)) / max(abs(fn(u)), 1e-300),
            )
        poly = fit_laurent(fn, max_deg=config.p * config.n_sites,
                           spacing=2 * config.p, nodes="unit")
        asym_worst = max(
            asym_worst,
            abs(poly.leading - lead) / max(abs(lead), 1e-300),
            abs(poly.trailing - trail) / max(abs(trail), 1e-300),
        )
    add("average_periodicity", per_worst, 1e-9)
    add("average_asymptotics", asym_worst, 1e-9)

    # charge identities for the extreme conserved charges
    tmats = laurent_charges(config)
    qmat = charge_q(config)
    qinv = np.linalg.matrix_power(qmat, config.p - 1)
    from .algebra import rel_residual

    t_top = cs.d_plus * qmat + cs.f_plus * qinv
    t_bot = cs.d_minus * qinv + cs.f_minus * qmat
    add("charge_identities",
        max(rel_residual(tmats[-1], t_top), rel_residual(tmats[0], t_bot)), 1e-9)

    return checks


def _cmd_check(args) -> int:
    config = load_config(args.config)
    t0 = time.perf_counter()
    checks = run_checks(config, rng_seed=args.rng_seed, tol=args.tol)
    elapsed = time.perf_counter() - t0
    ok = all(c["pass"] for c in checks)
    report = {
        "command": "check",
        "config": str(args.config),
        "rng_seed": args.rng_seed,
        "tool_version": __version__,
        "checks": checks,
        "pass": ok,
        "elapsed_s": elapsed,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for c in checks:
            status = "PASS" if c["pass"] else "FAIL"
            print(f"[{status}] {c['name']:<24} residual {_fmt(c['residual'])} "
                  f"(tol {_fmt(c['tolerance'])})")
            for prob in c.get("problems", []):
                print(f"         {prob}")
        print(f"overall: {'PASS' if ok else 'FAIL'} ({elapsed:.2f} s)")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# spectrum

def _cmd_spectrum(args) -> int:
    config = load_config(args.config)
    curves = spectrum_curves(config)
    grid = np.linspace(args.u_min, args.u_max, args.points)
    lines = ["u,k,curve_index,re_lambda,im_lambda"]
    for curve in curves:
        vals = curve(grid)
        for u, val in zip(grid, vals):
            lines.append(
                f"{_FLOAT_FMT.format(u)},{curve.sector},{curve.index},"
                f"{_FLOAT_FMT.format(val.real)},{_FLOAT_FMT.format(val.imag)}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        _write_manifest(args, {"curves": len(curves), "rows": len(lines) - 1},
                        [str(args.out)])
        print(f"wrote {len(curves)} curves x {args.points} points to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# solve

def _cmd_solve(args) -> int:
    config = load_config(args.config)
    phi = _parse_complex(args.phi)
    seeds = load_states(args.seeds) if args.seeds else None
    if seeds is not None:
        seeds = [s for s in seeds if s.k == args.k]
    selected, rejected = solve_bae(
        config, args.k, phi, seeds=seeds, n_starts=args.starts,
        rng_seed=args.rng_seed, full_output=True,
    )
    curves = spectrum_curves(config) if (args.compare or selected) else []
    rows = []
    for state in selected:
        res = bae_residuals(state, config)
        row = {
            **state_to_dict(state),
            "max_bulk_residual": float(np.abs(res[:-2]).max()),
            "leading_residual": float(abs(res[-2])),
            "trailing_residual": float(abs(res[-1])),
        }
        if curves:
            rep = verify_state(state, config, curves)
            row["matched_curve"] = rep.matched_curve
            row["matched_sector"] = rep.matched_sector
            if args.compare:
                row["max_curve_deviation"] = rep.max_deviation
        rows.append(row)

    print(f"sector k={args.k}, phi={phi}: "
          f"{len(selected)} selected / {len(rejected)} rejected states")
    for i, row in enumerate(rows):
        extra = ""
        if "max_curve_deviation" in row:
            extra = f"  |dLambda| {_fmt(row['max_curve_deviation'])}"
        print(f"  state {i}: bulk {_fmt(row['max_bulk_residual'])} "
              f"lead {_fmt(row['leading_residual'])} "
              f"trail {_fmt(row['trailing_residual'])}"
              f"  curve {row.get('matched_curve', '-')}{extra}")
    if args.out:
        payload = {"command": "solve", "k": args.k,
                   "phi": [phi.real, phi.imag], "rng_seed": args.rng_seed,
                   "states": rows}
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
        _write_manifest(args, {"selected": len(selected)}, [str(args.out)])
    return 0 if selected else 1


# ---------------------------------------------------------------------------
# compare

def _cmd_compare(args) -> int:
    config = load_config(args.config)
    states = load_states(args.states)
    curves = spectrum_curves(config)
    grid = np.linspace(args.u_min, args.u_max, args.points)
    ok = True
    for i, state in enumerate(states):
        rep = verify_state(state, config, curves, u_grid=grid, match_tol=args.tol)
        verdict = "spurious" if rep.spurious else "matched"
        ok = ok and not rep.spurious
        print(f"state {i} (k={state.k}): {verdict} curve {rep.matched_curve} "
              f"(sector {rep.matched_sector}, sector_match={rep.sector_match}) "
              f"max|dLambda| {_fmt(rep.max_deviation)} "
              f"truncation {_fmt(rep.truncation_residual)}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# degenerate

def _cmd_degenerate(args) -> int:
    config = load_config(args.config)
    roots = ()
    if args.roots:
        roots = tuple(
            complex(r, i) for r, i in json.loads(Path(args.roots).read_text())
        )
    spec = DegenerateSpec(m_roots=args.m, branch=args.branch, roots=roots)
    try:
        phi, lambda_fn, residual_fn, report = degenerate_reduce(config, args.k, spec)
    except (ValueError, ValidationError) as err:
        print(f"degenerate reduction failed: {err}")
        return 1
    print(f"phi = {_fmt(phi)}")
    print(f"constraint residual  {_fmt(report.constraint_residual)}")
    print(f"max |F|/scale        {_fmt(report.f_grid_max)}")
    print(f"extreme coefficients {_fmt(report.extreme_coeff_max)}")
    res = residual_fn()
    if len(res):
        print(f"reduced-system residuals: {[_fmt(abs(r)) for r in res]}")
    curves = spectrum_curves(config)
    grid = np.linspace(args.u_min, args.u_max, args.points)
    vals = np.array([lambda_fn(u) for u in grid])
    devs = [float(np.abs(vals - c(grid)).max()) for c in curves]
    best = int(np.argmin(devs))
    print(f"matches curve {curves[best].index} (sector {curves[best].sector}) "
          f"with max|dLambda| {_fmt(devs[best])}")
    return 0 if devs[best] <= args.tol else 1


# ---------------------------------------------------------------------------

def _parse_complex(text: str) -> complex:
    if "," in text:
        re_s, im_s = text.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(float(text))


def _write_manifest(args, results: dict, outputs: list[str]):
    manifest = {
        "command": args.command,
        "config": str(args.config),
        "rng_seed": getattr(args, "rng_seed", None),
        "tool_version": __version__,
        "outputs": outputs,
        "results": results,
        "wall_clock_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = Path(outputs[0]).with_suffix(".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tau2",
        description="Cyclic-chain transfer matrices and their T-Q spectral solver",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=False):
        p.add_argument("--config", required=True, help="model JSON file")
        p.add_argument("--rng-seed", type=int, default=0, dest="rng_seed")
        p.add_argument("--out", default=None, help="output path")
        if grid:
            p.add_argument("--u-min", type=float, default=-2.0, dest="u_min")
            p.add_argument("--u-max", type=float, default=2.0, dest="u_max")
            p.add_argument("--points", type=int, default=101)

    p_check = sub.add_parser("check", help="run the identity suites")
    common(p_check)
    p_check.add_argument("--tol", type=float, default=1e-10)
    p_check.add_argument("--json", action="store_true", help="machine-readable report")
    p_check.set_defaults(func=_cmd_check)

    p_spec = sub.add_parser("spectrum", help="export eigenvalue curves as CSV")
    common(p_spec, grid=True)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_solve = sub.add_parser("solve", help="solve the Bethe-root system")
    common(p_solve)
    p_solve.add_argument("--k", type=int, required=True, help="charge sector")
    p_solve.add_argument("--phi", default="0", help="shift parameter RE or RE,IM")
    p_solve.add_argument("--seeds", default=None, help="states JSON for seeding")
    p_solve.add_argument("--starts", type=int, default=200,
                         help="random starts after seeds")
    p_solve.add_argument("--compare", action="store_true",
                         help="also report max |Lambda_TQ - Lambda_diag|")
    p_solve.set_defaults(func=_cmd_solve)

    p_cmp = sub.add_parser("compare", help="compare states against exact curves")
    common(p_cmp, grid=True)
    p_cmp.add_argument("--states", required=True, help="states JSON file")
    p_cmp.add_argument("--tol", type=float, default=1e-6,
                       help="spurious-state threshold")
    p_cmp.set_defaults(func=_cmd_compare)

    p_deg = sub.add_parser("degenerate", help="two-term reduction checks")
    common(p_deg, grid=True)
    p_deg.add_argument("--k", type=int, default=0, help="sector label")
    p_deg.add_argument("--m", type=int, default=0, help="reduced root count")
    p_deg.add_argument("--branch", choices=("ff", "dd"), default="ff")
    p_deg.add_argument("--roots", default=None,
                       help="JSON file with [[re,im],...] reduced roots")
    p_deg.add_argument("--tol", type=float, default=1e-8)
    p_deg.set_defaults(func=_cmd_degenerate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, FileNotFoundError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
