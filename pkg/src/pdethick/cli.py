"""Command-line front end.

Subcommands:

  analytic   print the closed-form solution record for a shape
  solve      run the matching discrete solver and write field CSVs
  sweep      sweep the diffusion parameter, write a JSON/CSV report
  oracle     brute-force inscribed-ball thickness, write CSV
  verify     run the verification suite; exit 1 on any failed bound

Exit codes: 0 success, 1 verification failure, 2 configuration error.
Outputs carry no timestamps, so identical flags give byte-identical files.
Flags may also be loaded from a JSON config file (``--config``); explicit
flags override file values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from . import analytic, geometry, harness, solver, thickness
from .errors import PdeThickError
from .shapes import Family, PeriodicBoundary, ShapeSpec

_FAMILIES = [f.value for f in Family]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2


class _CliError(Exception):
    """Configuration problem; printed as a single diagnostic, exit 2."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdethick",
        description="PDE-based shape thickness: closed forms, FEM solves and bound verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shape_flags(p):
        p.add_argument("--family", required=False, choices=_FAMILIES)
        p.add_argument("--fl", type=float, help="left interface / inner radius")
        p.add_argument("--fr", type=float, help="right interface / outer radius")
        p.add_argument("--bl", type=float, help="lower fictitious boundary (mean level for bands)")
        p.add_argument("--br", type=float, help="upper fictitious boundary (mean level for bands; inscribed radius for annulus-general)")
        p.add_argument("--bl-cos-amp", type=float, default=0.0, help="first-harmonic cosine amplitude of the lower band boundary")
        p.add_argument("--br-cos-amp", type=float, default=0.0, help="first-harmonic cosine amplitude of the upper band boundary")
        p.add_argument("--L", type=float, help="band period")
        p.add_argument("--config", help="JSON file with default flag values")

    p_analytic = sub.add_parser("analytic", help="closed-form solution record")
    add_shape_flags(p_analytic)
    p_analytic.add_argument("--a", type=float)
    p_analytic.add_argument("--pretty", action="store_true")

    p_solve = sub.add_parser("solve", help="discrete solve, fields to CSV")
    add_shape_flags(p_solve)
    p_solve.add_argument("--a", type=float)
    p_solve.add_argument("--cells", type=int, help="cells across the shape thickness")
    p_solve.add_argument("--out", help="nodal field CSV path")
    p_solve.add_argument("--thickness-out", help="optional inverse-thickness CSV path")
    p_solve.add_argument("--matrix-out", help="optional triplet dump of the assembled matrix")

    p_sweep = sub.add_parser("sweep", help="diffusion-parameter sweep")
    add_shape_flags(p_sweep)
    p_sweep.add_argument("--a-list", help="comma-separated a values (>= 4, spanning >= 2 decades)")
    p_sweep.add_argument("--json", dest="json_path")
    p_sweep.add_argument("--csv", dest="csv_path")

    p_oracle = sub.add_parser("oracle", help="inscribed-ball geometric thickness")
    add_shape_flags(p_oracle)
    p_oracle.add_argument("--cells", type=int, help="cells across the shape thickness")
    p_oracle.add_argument("--out", help="thickness CSV path")

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--suite", default="default", choices=sorted(harness.SUITES))
    p_verify.add_argument("--json", dest="json_path")
    p_verify.add_argument("--csv", dest="csv_path")
    p_verify.add_argument("--pretty", action="store_true")
    p_verify.add_argument("--config", help="JSON file with default flag values")
    return parser


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    path = getattr(args, "config", None)
    if not path:
        return args
    try:
        with open(path) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _CliError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise _CliError(f"config {path} must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise _CliError(f"config {path}: unknown option {key!r}")
        if getattr(args, attr) in (None, 0.0) or (
            isinstance(getattr(args, attr), bool) and not getattr(args, attr)
        ):
            setattr(args, attr, value)
    return args


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            raise _CliError(f"missing required parameter --{name}")


def _shape_from_args(args: argparse.Namespace) -> ShapeSpec:
    _require(args, "family", "fl", "fr")
    family = Family(args.family)
    if family == Family.INTERVAL_WHOLE:
        return ShapeSpec(family, args.fl, args.fr)
    if family == Family.INTERVAL_GENERAL:
        _require(args, "bl", "br")
        return ShapeSpec(family, args.fl, args.fr, b_l=args.bl, b_r=args.br)
    if family == Family.BAND_WHOLE:
        _require(args, "L")
        return ShapeSpec(family, args.fl, args.fr, L=args.L)
    if family == Family.BAND_GENERAL:
        _require(args, "bl", "br", "L")
        b_l = PeriodicBoundary(
            period=args.L,
            mean=args.bl,
            cosine_coeffs=(args.bl_cos_amp,) if args.bl_cos_amp else (),
        )
        b_r = PeriodicBoundary(
            period=args.L,
            mean=args.br,
            cosine_coeffs=(args.br_cos_amp,) if args.br_cos_amp else (),
        )
        return ShapeSpec(family, args.fl, args.fr, b_l=b_l, b_r=b_r, L=args.L)
    if family == Family.ANNULUS_WHOLE:
        return ShapeSpec(family, args.fl, args.fr)
    _require(args, "br")
    return ShapeSpec(family, args.fl, args.fr, b_r=args.br)


def _solution_dict(sol: analytic.AnalyticSolution) -> dict:
    return {
        "family": sol.shape.family.value,
        "f_l": sol.shape.f_l,
        "f_r": sol.shape.f_r,
        "a": sol.a,
        "p_star": sol.p_star,
        "thickness_pde": sol.thickness_pde,
        "thickness_geometric": sol.shape.thickness,
        "thickness_error": sol.thickness_error,
        "lower_bound": sol.lower_bound,
        "upper_bound": sol.upper_bound,
        "coefficients": dict(sol.coefficients),
    }


def _cmd_analytic(args: argparse.Namespace) -> int:
    shape = _shape_from_args(args)
    _require(args, "a")
    if shape.family in (Family.BAND_GENERAL, Family.ANNULUS_GENERAL):
        bound = analytic.general_bound(shape, args.a)
        record = {
            "family": shape.family.value,
            "a": args.a,
            "thickness_geometric": shape.thickness,
            "l2_envelope": bound,
            "lower_bound": 0.0,
        }
        if args.pretty:
            print(f"{shape.family.value}: T_bar = {shape.thickness:g}, L2 envelope = {bound:.6g}")
        else:
            print(harness.dumps_json(record))
        return EXIT_OK
    sol = analytic.solve_family(shape, args.a)
    if args.pretty:
        print(
            f"{shape.family.value}: T_bar = {shape.thickness:g}, "
            f"T^a = {sol.thickness_pde:.12g}, p* = {sol.p_star:.12g}, "
            f"T^a - T_bar in [{sol.lower_bound:.6g}, {sol.upper_bound:.6g}]"
        )
    else:
        print(harness.dumps_json(_solution_dict(sol)))
    return EXIT_OK


def _grid_for_solve(shape: ShapeSpec, a: float, cells: int):
    h = shape.thickness / cells
    if shape.family == Family.INTERVAL_WHOLE:
        grid = solver.build_interval_grid(shape, h, solver.whole_line_box(shape, a))
        return grid, "1d"
    if shape.family == Family.INTERVAL_GENERAL:
        grid = solver.build_interval_grid(shape, h, (shape.b_l, shape.b_r))
        return grid, "1d"
    if shape.family == Family.ANNULUS_WHOLE:
        return solver.build_radial_grid(shape, h, a=a), "radial"
    if shape.family == Family.BAND_WHOLE:
        return harness.band_whole_grid(shape, h, a), "2d"
    if shape.family == Family.BAND_GENERAL:
        return harness.band_general_grid(shape, h), "2d"
    return harness.annulus_general_grid(shape, h), "2d"


def _cmd_solve(args: argparse.Namespace) -> int:
    shape = _shape_from_args(args)
    _require(args, "a", "cells", "out")
    grid, kind = _grid_for_solve(shape, args.a, args.cells)
    if kind == "1d":
        system = solver.assemble_1d(grid, shape, args.a)
    elif kind == "radial":
        system = solver.assemble_radial(grid, shape, args.a)
    else:
        system = solver.assemble_2d(grid, shape, args.a)
    field = solver.solve_spd(system)
    solver.write_field_csv(field, args.out)
    if args.matrix_out:
        solver.dump_triplets(system, args.matrix_out)
    if args.thickness_out:
        div = thickness.divergence(field)
        inv = thickness.inverse_thickness(div, args.a, system.classification)
        thickness.write_inverse_thickness_csv(inv, args.thickness_out, shape.thickness)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    shape = _shape_from_args(args)
    if not getattr(args, "a_list", None):
        raise _CliError("missing required parameter --a-list")
    try:
        a_values = [float(tok) for tok in str(args.a_list).split(",") if tok.strip()]
    except ValueError as exc:
        raise _CliError(f"bad --a-list: {exc}")
    report = harness.sweep_a(shape, a_values)
    if args.json_path:
        harness.write_report_json(report, args.json_path)
    if args.csv_path:
        with open(args.csv_path, "w") as handle:
            handle.write(harness.report_csv_text(report))
    if not args.json_path and not args.csv_path:
        print(harness.dumps_json(report.to_dict()))
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    shape = _shape_from_args(args)
    _require(args, "cells", "out")
    h = shape.thickness / args.cells
    pad = max(shape.thickness, 2 * h)
    if shape.family in (Family.INTERVAL_WHOLE, Family.INTERVAL_GENERAL):
        lo = shape.b_l if shape.family == Family.INTERVAL_GENERAL else shape.f_l - pad
        hi = shape.b_r if shape.family == Family.INTERVAL_GENERAL else shape.f_r + pad
        n = math.ceil((hi - lo) / h)
        grid = geometry.build_grid([(lo, lo + n * h)], n)
    elif shape.family in (Family.BAND_WHOLE, Family.BAND_GENERAL):
        nx = max(4, round(shape.L / h))
        lo = shape.f_l - pad
        ny = math.ceil((shape.thickness + 2 * pad) / h)
        grid = geometry.StructuredGrid(
            dim=2, origin=(0.0, lo), h=shape.L / nx, cells=(nx, ny), periodic_x=True
        )
    else:
        half_n = math.ceil((shape.f_r + pad) / h)
        grid = geometry.StructuredGrid(
            dim=2, origin=(-half_n * h, -half_n * h), h=h, cells=(2 * half_n, 2 * half_n)
        )
    field = geometry.geometric_thickness_oracle(grid, shape)
    geometry.write_thickness_csv(field, args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    report = harness.verify_theorems(args.suite)
    text = harness.dumps_json(report.to_dict())
    if args.json_path:
        with open(args.json_path, "w") as handle:
            handle.write(text)
            handle.write("\n")
    if args.csv_path:
        with open(args.csv_path, "w") as handle:
            handle.write(report.csv_text())
    if args.pretty:
        for check in report.checks:
            status = "pass" if check.passed else "FAIL"
            print(f"{check.case}: {status} ({len(check.samples)} samples)")
        print(f"suite {report.suite}: {'pass' if report.passed else 'FAIL'}")
    elif not args.json_path:
        print(text)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


_HANDLERS = {
    "analytic": _cmd_analytic,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
}


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse prints its own diagnostic; normalize usage errors to 2
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        args = _apply_config(args)
        return _HANDLERS[args.command](args)
    except (_CliError, PdeThickError) as exc:
        print(f"pdethick: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"pdethick: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
