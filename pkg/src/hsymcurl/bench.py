"""Analytical benchmark cases, error norms and convergence studies."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .elements import Family
from .mesh import generate_cube_mesh
from .quadrature import tet_rule
from .system import (
    NORM_DEGREE,
    SolverError,
    apply_dirichlet,
    assemble,
    build_dof_map,
    element_bases,
    interpolate_field,
    solve,
)
from .tensorcalc import X, Y, Z, PiecewiseField, PolyMatrix, matrix_curl, strong_operator, sym_part

LEVELS = (2, 4, 6, 8, 10)
EXACT = "exact"
EXACT_THRESHOLD = 1e-12

CASE_NAMES = ("vortex", "normal-jump", "identity-jump")


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    exact: PiecewiseField
    load: PiecewiseField
    smoothness: str

    @property
    def sym_curl_exact(self) -> PiecewiseField:
        return self.exact.map(lambda P: sym_part(matrix_curl(P)))


def vortex_field() -> PolyMatrix:
    row = ((1 - X * X) * (-Y - Z), (1 - X * X) * X, (1 - X * X) * X)
    return PolyMatrix((row, row, row))


def vortex_moment_printed() -> PolyMatrix:
    """Micro-moment of the vortex case, transcribed entry by entry."""
    h = Fraction(1, 2)
    x2, x3 = X * X, X * X * X
    m12 = h * (x2 * Y - x3 + x2 * Z + 9 * X - Y - Z)
    m21 = h * (x2 * Y - x3 + x2 * Z + X - Y - Z)
    return PolyMatrix(
        (
            (x2 * Y + x2 * Z - Y - Z, m12, m12),
            (m21, -x3 + X, -x3 + 9 * X),
            (m21, -x3 + 9 * X, -x3 + X),
        )
    )


def make_case(name: str) -> BenchmarkCase:
    if name == "vortex":
        P = vortex_field()
        M = strong_operator(P)
        if M != vortex_moment_printed():
            raise AssertionError("vortex micro-moment does not match sym P + Curl sym Curl P")
        return BenchmarkCase(name, PiecewiseField.smooth(P), PiecewiseField.smooth(M), "H1-smooth")
    if name == "normal-jump":
        P = PolyMatrix.from_constant([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
        field = PiecewiseField(P, PolyMatrix.zeros())
        return BenchmarkCase(name, field, field, "Hcurl-only")
    if name == "identity-jump":
        field = PiecewiseField(PolyMatrix.identity(), PolyMatrix.zeros())
        return BenchmarkCase(name, field, field, "HsymCurl-only")
    raise ValueError(f"unknown benchmark {name!r}; choose from {', '.join(CASE_NAMES)}")


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    elements: int
    dofs: int
    l2_error: float
    hsc_error: float
    wall_time: float = 0.0

    @property
    def h(self) -> float:
        return 2.0 / self.n


def error_norms(family, mesh, dofmap, coeffs, case: BenchmarkCase, degree: int = NORM_DEGREE):
    """L2 and H(sym Curl) norms of ``exact - discrete``.

    The exact piece is chosen per element from its centroid, which is valid
    because no element straddles ``x = 0``.
    """
    rule = tet_rule(degree)
    bases = element_bases(family, mesh)
    coeffs = np.asarray(coeffs)
    exact = case.exact
    exact_sc = case.sym_curl_exact
    centroids = mesh.centroids
    l2, sc = 0.0, 0.0
    for t, basis in enumerate(bases):
        x = basis.to_physical(rule.points)
        w = rule.weights * basis.detJ
        a = coeffs[dofmap.cell_dofs[t]]
        piece = exact.piece(centroids[t])
        diff = piece(x).reshape(-1, 9) - basis.ansatz(x) @ a
        dsc = exact_sc.piece(centroids[t])(x).reshape(-1, 9) - basis.sym_curl(x) @ a
        l2 += w @ np.einsum("qi,qi->q", diff, diff)
        sc += w @ np.einsum("qi,qi->q", dsc, dsc)
    return float(np.sqrt(l2)), float(np.sqrt(l2 + sc))


def _record(n, mesh, dofmap, errs, t0) -> ConvergenceRecord:
    return ConvergenceRecord(n, mesh.n_tets, dofmap.n_dofs, errs[0], errs[1], time.perf_counter() - t0)


def interpolation_error(family, case, levels=LEVELS) -> list[ConvergenceRecord]:
    """Errors of the canonical interpolant of the exact field."""
    if isinstance(case, str):
        case = make_case(case)
    records = []
    for n in levels:
        t0 = time.perf_counter()
        mesh = generate_cube_mesh(n)
        dofmap = build_dof_map(family, mesh)
        coeffs = interpolate_field(family, mesh, dofmap, case.exact)
        records.append(_record(n, mesh, dofmap, error_norms(family, mesh, dofmap, coeffs, case), t0))
    return records


def solve_case(family, case, n: int, tol: float = 1e-12, stiffness_degree=2, load_degree=4):
    """Full pipeline on one mesh; returns ``(mesh, dofmap, system, coeffs)``."""
    if isinstance(case, str):
        case = make_case(case)
    family = Family.parse(family)
    mesh = generate_cube_mesh(n)
    dofmap = build_dof_map(family, mesh)
    system = assemble(family, mesh, dofmap, case.load, stiffness_degree, load_degree)
    boundary_values = interpolate_field(family, mesh, dofmap, case.exact)
    reduced = apply_dirichlet(system, dofmap, boundary_values)
    coeffs = solve(reduced, tol, context=f"{case.name}/{family.value}/n={n}")
    return mesh, dofmap, system, coeffs


def run_convergence(family, case, levels=LEVELS, tol: float = 1e-12, stiffness_degree=2,
                    load_degree=4, norm_degree=NORM_DEGREE) -> list[ConvergenceRecord]:
    if isinstance(case, str):
        case = make_case(case)
    family = Family.parse(family)
    bad = [n for n in levels if n not in LEVELS]
    if bad:
        raise ValueError(f"levels must be a subset of {LEVELS}, got {bad}")
    records = []
    for n in levels:
        t0 = time.perf_counter()
        try:
            mesh, dofmap, _, coeffs = solve_case(family, case, n, tol, stiffness_degree, load_degree)
        except SolverError as exc:
            raise SolverError(f"level n={n}: {exc}") from exc
        errs = error_norms(family, mesh, dofmap, coeffs, case, norm_degree)
        records.append(_record(n, mesh, dofmap, errs, t0))
    return records


def estimate_rate(records, which: str = "l2"):
    """Least-squares slope of log(error) against log(h), h = 2/n.

    Returns :data:`EXACT` if any error is at round-off level.
    """
    attr = {"l2": "l2_error", "hsc": "hsc_error"}[which]
    errs = np.array([getattr(r, attr) for r in records])
    if len(errs) and np.any(errs <= EXACT_THRESHOLD):
        return EXACT
    if len(records) < 3:
        raise ValueError("need at least three records to estimate a rate")
    h = np.array([r.h for r in records])
    slope = np.polyfit(np.log(h), np.log(errs), 1)[0]
    return float(slope)
