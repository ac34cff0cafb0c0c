"""Global DOF numbering, assembly, Dirichlet elimination and the linear solve."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .elements import DOF_FUNCTIONALS, Family, LocalBasis, local_basis, local_load, local_stiffness
from .mesh import Mesh, locate_point
from .quadrature import edge_rule, tet_rule

logger = logging.getLogger(__name__)

STIFFNESS_DEGREE = 2
LOAD_DEGREE = 4
NORM_DEGREE = 6
DENSE_LIMIT = 2000


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class DofMap:
    family: Family
    n_dofs: int
    cell_dofs: np.ndarray  # (T, n_loc) local -> global
    boundary: np.ndarray  # sorted global indices constrained by Dirichlet data

    def __len__(self) -> int:
        return self.n_dofs


def build_dof_map(family, mesh: Mesh) -> DofMap:
    family = Family.parse(family)
    V, T, E = mesh.n_vertices, mesh.n_tets, mesh.n_edges
    if family is Family.LAGRANGE:
        cell = (9 * mesh.tets[:, :, None] + np.arange(9)).reshape(T, 36)
        boundary = (9 * mesh.boundary_vertices[:, None] + np.arange(9)).ravel()
        n = 9 * V
    elif family is Family.NEDELEC:
        cell = (3 * mesh.tet_edges[:, :, None] + np.arange(3)).reshape(T, 18)
        boundary = (3 * mesh.boundary_edges[:, None] + np.arange(3)).ravel()
        n = 3 * E
    else:
        cell = np.empty((T, 4, 9), dtype=np.int64)
        cell[:, :, :8] = 8 * mesh.tets[:, :, None] + np.arange(8)
        # trace functional is never shared between elements
        cell[:, :, 8] = 8 * V + 4 * np.arange(T)[:, None] + np.arange(4)
        cell = cell.reshape(T, 36)
        boundary = (8 * mesh.boundary_vertices[:, None] + np.arange(8)).ravel()
        n = 8 * V + 4 * T
    boundary = np.sort(boundary)
    cell.setflags(write=False)
    boundary.setflags(write=False)
    return DofMap(family, int(n), cell, boundary)


def element_bases(family, mesh: Mesh) -> list[LocalBasis]:
    """Local bases of every tet, cached on the mesh."""
    family = Family.parse(family)
    key = ("bases", family)
    if key not in mesh._cache:
        mesh._cache[key] = [local_basis(family, mesh, t) for t in range(mesh.n_tets)]
    return mesh._cache[key]


def interpolate_field(family, mesh: Mesh, dofmap: DofMap, field) -> np.ndarray:
    """Canonical interpolant: the family's DOF functionals applied to ``field``.

    Shared functionals evaluate ``field`` pointwise (``x = 0`` belongs to the
    ``x >= 0`` piece); element-local trace functionals use the piece that
    contains the element.
    """
    family = Family.parse(family)
    coeffs = np.zeros(dofmap.n_dofs)
    if family is Family.LAGRANGE:
        coeffs[:] = field(mesh.vertices).reshape(-1)
    elif family is Family.NEDELEC:
        t, w = edge_rule(3)
        a = mesh.vertices[mesh.edges[:, 0]]
        b = mesh.vertices[mesh.edges[:, 1]]
        tau = b - a
        pts = a[:, None, :] + t[None, :, None] * tau[:, None, :]  # (E, q, 3)
        vals = field(pts)  # (E, q, 3, 3)
        coeffs[:] = np.einsum("q,eqrc,ec->er", w, vals, tau).reshape(-1)
    else:
        V = mesh.n_vertices
        vals = field(mesh.vertices).reshape(V, 9)
        coeffs[: 8 * V] = (vals @ DOF_FUNCTIONALS[:8].T).reshape(-1)
        centroids = mesh.centroids
        for t in range(mesh.n_tets):
            piece = field.piece(centroids[t]) if hasattr(field, "piece") else None
            X = mesh.vertices[mesh.tets[t]]
            local = (piece(X) if piece is not None else field(X)).reshape(4, 9)
            coeffs[8 * V + 4 * t : 8 * V + 4 * t + 4] = local @ DOF_FUNCTIONALS[8]
    return coeffs


@dataclass
class LinearSystem:
    """Sparse symmetric system, optionally reduced by Dirichlet elimination.

    After :func:`apply_dirichlet`, ``matrix``/``rhs`` act on the ``free``
    unknowns only and ``fixed``/``fixed_values`` hold the eliminated ones.
    """

    matrix: sp.csr_matrix
    rhs: np.ndarray
    n_full: int
    free: np.ndarray | None = None
    fixed: np.ndarray | None = None
    fixed_values: np.ndarray | None = None

    @property
    def reduced(self) -> bool:
        return self.free is not None

    def expand(self, x_free: np.ndarray) -> np.ndarray:
        if not self.reduced:
            return np.asarray(x_free)
        full = np.zeros(self.n_full)
        full[self.free] = x_free
        full[self.fixed] = self.fixed_values
        return full


def assemble(family, mesh: Mesh, dofmap: DofMap, M=None, stiffness_degree=STIFFNESS_DEGREE,
             load_degree=LOAD_DEGREE) -> LinearSystem:
    """Global stiffness and load; elements are visited in index order."""
    family = Family.parse(family)
    bases = element_bases(family, mesh)
    krule, frule = tet_rule(stiffness_degree), tet_rule(load_degree)
    n_loc = family.n_loc
    T = mesh.n_tets
    Kloc = np.empty((T, n_loc, n_loc))
    rhs = np.zeros(dofmap.n_dofs)
    for t, basis in enumerate(bases):
        Kloc[t] = local_stiffness(basis, krule)
        if M is not None:
            np.add.at(rhs, dofmap.cell_dofs[t], local_load(basis, M, frule))
    rows = np.repeat(dofmap.cell_dofs, n_loc, axis=1).ravel()
    cols = np.tile(dofmap.cell_dofs, (1, n_loc)).ravel()
    K = sp.coo_matrix((Kloc.ravel(), (rows, cols)), shape=(dofmap.n_dofs,) * 2).tocsr()
    K.sum_duplicates()
    return LinearSystem(K, rhs, dofmap.n_dofs)


def apply_dirichlet(system: LinearSystem, dofmap: DofMap, prescribed) -> LinearSystem:
    """Eliminate the boundary DOFs symmetrically, moving them to the rhs."""
    prescribed = np.asarray(prescribed, dtype=float)
    fixed = dofmap.boundary
    mask = np.ones(system.n_full, dtype=bool)
    mask[fixed] = False
    free = np.flatnonzero(mask)
    g = prescribed[fixed]
    K = system.matrix
    K_ff = K[free][:, free].tocsr()
    rhs = system.rhs[free] - K[free][:, fixed] @ g
    return LinearSystem(K_ff, rhs, system.n_full, free, fixed, g)


def _pcg(A: sp.csr_matrix, b: np.ndarray, rtol: float, maxiter: int):
    d = A.diagonal()
    if np.any(d <= 0):
        raise SolverError("matrix has a non-positive diagonal entry")
    inv_d = 1.0 / d
    x = np.zeros_like(b)
    r = b.copy()
    z = inv_d * r
    p = z.copy()
    rz = r @ z
    bnorm = np.linalg.norm(b)
    for it in range(1, maxiter + 1):
        Ap = A @ p
        pAp = p @ Ap
        if pAp <= 0:
            raise SolverError("matrix is not positive definite (p^T A p <= 0)")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        if np.linalg.norm(r) <= rtol * bnorm:
            # guard against drift of the recursive residual
            if np.linalg.norm(b - A @ x) <= rtol * bnorm:
                return x, it
            r = b - A @ x
        z = inv_d * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise SolverError(f"conjugate gradients did not converge in {maxiter} iterations")


def solve(system: LinearSystem, tol: float = 1e-12, context: str = "") -> np.ndarray:
    """Solve the (reduced) SPD system; returns the full coefficient vector."""
    A, b = system.matrix, system.rhs
    n = A.shape[0]
    where = f" [{context}]" if context else ""
    if n == 0 or not np.any(b):
        return system.expand(np.zeros(n))
    if n < DENSE_LIMIT:
        try:
            x = scipy.linalg.cho_solve(scipy.linalg.cho_factor(A.toarray()), b)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"Cholesky failed, matrix not positive definite{where}") from exc
    else:
        try:
            x, its = _pcg(A, b, tol, 20 * n)
        except SolverError as exc:
            raise SolverError(f"{exc}{where}") from exc
        logger.debug("PCG converged in %d iterations (n=%d)%s", its, n, where)
    res = np.linalg.norm(A @ x - b) / np.linalg.norm(b)
    if res > max(tol, 1e-12):
        raise SolverError(f"relative residual {res:.3e} exceeds {tol:.1e}{where}")
    return system.expand(x)


def fe_evaluate(family, mesh: Mesh, dofmap: DofMap, coeffs, point) -> tuple[np.ndarray, np.ndarray]:
    """Discrete field value and its sym Curl (both 3x3) at ``point``."""
    t, _ = locate_point(mesh, point)
    basis = element_bases(family, mesh)[t]
    a = np.asarray(coeffs)[dofmap.cell_dofs[t]]
    x = np.asarray(point, dtype=float)
    value = (basis.ansatz(x) @ a).reshape(3, 3)
    symcurl = (basis.sym_curl(x) @ a).reshape(3, 3)
    return value, symcurl


def energy(system: LinearSystem, coeffs) -> float:
    """Discrete energy ``1/2 a^T K a - a^T f`` of the unreduced system."""
    a = np.asarray(coeffs)
    return float(0.5 * a @ (system.matrix @ a) - a @ system.rhs)
