"""Command-line entry point.

Subcommands::

    converge           run a convergence study, write CSV and optional SVG
    verify-identities  check the sym Curl complex identities on random fields
    mesh-export        write a structured cube mesh as legacy ASCII VTK
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import CASE_NAMES, EXACT, LEVELS, estimate_rate, run_convergence
from .elements import ElementError, Family
from .identities import run_identity_suite
from .mesh import MeshError, generate_cube_mesh, write_vtk
from .svgplot import loglog_svg
from .system import SolverError

CSV_HEADER = "elements,dofs,l2_error,hsc_error"

log = logging.getLogger("hsymcurl")


def _levels(text: str) -> list[int]:
    try:
        levels = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must be comma-separated integers, got {text!r}") from None
    bad = [n for n in levels if n not in LEVELS]
    if not levels or bad:
        raise argparse.ArgumentTypeError(f"levels must be a non-empty subset of {','.join(map(str, LEVELS))}")
    return levels


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def format_csv(records) -> str:
    lines = [CSV_HEADER]
    lines += [f"{r.elements},{r.dofs},{r.l2_error:.14e},{r.hsc_error:.14e}" for r in records]
    return "\n".join(lines) + "\n"


def _rate_text(records, which) -> str:
    try:
        rate = estimate_rate(records, which)
    except ValueError:
        return "n/a"
    return EXACT if rate == EXACT else f"{rate:.4f}"


def cmd_converge(args) -> int:
    family = Family.parse(args.element)
    try:
        records = run_convergence(
            family,
            args.benchmark,
            args.levels,
            tol=args.tol,
            stiffness_degree=args.stiffness_degree,
            load_degree=args.load_degree,
            norm_degree=args.norm_degree,
        )
    except (SolverError, MeshError, ElementError) as exc:
        print(f"error: solve stage failed for {args.benchmark}/{family.value}: {exc}", file=sys.stderr)
        return 1
    text = format_csv(records)
    if args.csv:
        try:
            Path(args.csv).write_text(text)
        except OSError as exc:
            print(f"error: cannot write CSV {args.csv}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    if args.svg:
        dofs = [r.dofs for r in records]
        try:
            loglog_svg(
                [
                    ("L2", dofs, [r.l2_error for r in records]),
                    ("H(sym Curl)", dofs, [r.hsc_error for r in records]),
                ],
                args.svg,
                ylabel=f"{args.benchmark} / {family.value}",
                guides=[("O(h)", -1 / 3), ("O(h^2)", -2 / 3), ("O(sqrt h)", -1 / 6)],
            )
        except (OSError, ValueError) as exc:
            print(f"error: cannot write SVG {args.svg}: {exc}", file=sys.stderr)
            return 1
    print(f"rate l2: {_rate_text(records, 'l2')}")
    print(f"rate hsc: {_rate_text(records, 'hsc')}")
    return 0


def cmd_verify_identities(args) -> int:
    if args.count == 0:
        print("warning: count is 0, identities checked vacuously", file=sys.stderr)
    ok = True
    for res in run_identity_suite(args.seed, args.count):
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}  ({res.checked} fields, seed {args.seed})")
        if not res.passed:
            ok = False
            print(f"    offending field: {res.failure}")
    return 0 if ok else 1


def cmd_mesh_export(args) -> int:
    mesh = generate_cube_mesh(args.n)
    try:
        write_vtk(mesh, args.path)
    except OSError as exc:
        print(f"error: cannot write {args.path}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {mesh.n_vertices} points, {mesh.n_tets} cells to {args.path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsymcurl", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("converge", help="run a convergence study")
    p.add_argument("--element", required=True, choices=[f.value for f in Family])
    p.add_argument("--benchmark", required=True, choices=CASE_NAMES)
    p.add_argument("--levels", type=_levels, default=list(LEVELS), help="comma list of n (default 2,4,6,8,10)")
    p.add_argument("--csv", help="CSV output path (default: stdout)")
    p.add_argument("--svg", help="optional log-log SVG plot path")
    p.add_argument("--tol", type=_positive_float, default=1e-12, help="solver relative tolerance")
    p.add_argument("--stiffness-degree", type=int, default=2, choices=range(2, 7))
    p.add_argument("--load-degree", type=int, default=4, choices=range(1, 7))
    p.add_argument("--norm-degree", type=int, default=6, choices=range(1, 7))
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify-identities", help="check sym Curl complex identities")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("mesh-export", help="write a cube mesh as legacy VTK")
    p.add_argument("n", type=int, help="cells per axis (even)")
    p.add_argument("path")
    p.set_defaults(func=cmd_mesh_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.command == "mesh-export" and (args.n < 2 or args.n % 2):
        parser.error(f"n must be an even integer >= 2, got {args.n}")
    if args.command == "verify-identities" and args.count < 0:
        parser.error("count must be non-negative")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
