"""Lagrange, Nedelec and H(sym Curl) tetrahedral elements for matrix-valued fields.

Solves ``sym P + Curl(sym Curl P) = M`` on the cube [-1, 1]^3 with three
conforming discretisations and measures convergence against analytical fields.
"""

from .bench import (
    BenchmarkCase,
    ConvergenceRecord,
    error_norms,
    estimate_rate,
    interpolation_error,
    make_case,
    run_convergence,
)
from .elements import Family, local_basis, local_load, local_stiffness
from .mesh import Mesh, generate_cube_mesh, locate_point
from .quadrature import edge_rule, exact_tet_monomial, tet_rule
from .system import apply_dirichlet, assemble, build_dof_map, fe_evaluate, interpolate_field, solve

__version__ = "0.1.0"
