"""Structured tetrahedral meshes of the cube [-1, 1]^3.

Each of the n^3 cells is split into five tetrahedra (four corner tets around
one central tet). Neighbouring cells use mirrored splits in a 3D checkerboard
so that the face diagonals of adjacent cells coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Local vertex (i, j, k) offsets of a hexahedral cell, index = i + 2j + 4k.
_CORNERS = np.array([[i, j, k] for k in (0, 1) for j in (0, 1) for i in (0, 1)])

# Five-tet split of a cell whose corner (0,0,0) is cut off.
_SPLIT_EVEN = np.array(
    [
        [0, 1, 2, 4],
        [3, 1, 2, 7],
        [5, 1, 4, 7],
        [6, 2, 4, 7],
        [1, 2, 4, 7],
    ]
)
# Mirror image in x: swaps i -> 1 - i.
_MIRROR_X = np.array([1, 0, 3, 2, 5, 4, 7, 6])
_SPLIT_ODD = _MIRROR_X[_SPLIT_EVEN]

# Local edges of a tet as pairs of local vertices, ordered to match the
# Nedelec reference basis: (1,2), (2,3), (1,3), (1,4), (2,4), (3,4).
LOCAL_EDGES = np.array([[0, 1], [1, 2], [0, 2], [0, 3], [1, 3], [2, 3]])


class MeshError(RuntimeError):
    pass


@dataclass(frozen=True)
class Mesh:
    n: int
    vertices: np.ndarray  # (V, 3)
    tets: np.ndarray  # (T, 4)
    edges: np.ndarray  # (E, 2), sorted pairs
    tet_edges: np.ndarray  # (T, 6) global edge index per local edge
    tet_edge_signs: np.ndarray  # (T, 6) +1 if local direction runs low -> high
    boundary_vertices: np.ndarray
    boundary_edges: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def h(self) -> float:
        return 2.0 / self.n

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_tets(self) -> int:
        return len(self.tets)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def tet_vertices(self, t: int) -> np.ndarray:
        return self.vertices[self.tets[t]]

    @property
    def centroids(self) -> np.ndarray:
        return self.vertices[self.tets].mean(axis=1)

    @property
    def jacobians(self) -> np.ndarray:
        """All Jacobi matrices, shape (T, 3, 3), columns x_k - x_1."""
        if "J" not in self._cache:
            X = self.vertices[self.tets]
            self._cache["J"] = np.transpose(X[:, 1:] - X[:, :1], (0, 2, 1))
        return self._cache["J"]


def _vertex_index(i, j, k, n):
    return i + (n + 1) * (j + (n + 1) * k)


def generate_cube_mesh(n: int) -> Mesh:
    """Mesh of [-1,1]^3 with ``n`` cells per axis and ``5 n^3`` tetrahedra."""
    if not isinstance(n, (int, np.integer)) or n < 2 or n % 2:
        raise ValueError(f"subdivision must be an even integer >= 2, got {n!r}")
    n = int(n)
    g = np.linspace(-1.0, 1.0, n + 1)
    kk, jj, ii = np.meshgrid(np.arange(n + 1), np.arange(n + 1), np.arange(n + 1), indexing="ij")
    vertices = np.stack([g[ii.ravel()], g[jj.ravel()], g[kk.ravel()]], axis=1)

    tets = []
    for k in range(n):
        for j in range(n):
            for i in range(n):
                corners = _vertex_index(i + _CORNERS[:, 0], j + _CORNERS[:, 1], k + _CORNERS[:, 2], n)
                split = _SPLIT_EVEN if (i + j + k) % 2 == 0 else _SPLIT_ODD
                tets.append(corners[split])
    tets = np.array(tets).reshape(-1, 4)

    # positive orientation: swap the last two vertices where det J < 0
    X = vertices[tets]
    det = np.linalg.det(np.transpose(X[:, 1:] - X[:, :1], (0, 2, 1)))
    flip = det < 0
    tets[flip, 2], tets[flip, 3] = tets[flip, 3].copy(), tets[flip, 2].copy()

    pairs = tets[:, LOCAL_EDGES]  # (T, 6, 2)
    sorted_pairs = np.sort(pairs, axis=2)
    edges, inverse = np.unique(sorted_pairs.reshape(-1, 2), axis=0, return_inverse=True)
    tet_edges = inverse.reshape(-1, 6)
    signs = np.where(pairs[:, :, 0] < pairs[:, :, 1], 1, -1)

    on_plane = np.abs(np.abs(vertices) - 1.0) < 1e-12  # (V, 3): |coord| == 1
    boundary_vertices = np.flatnonzero(on_plane.any(axis=1))
    a, b = vertices[edges[:, 0]], vertices[edges[:, 1]]
    same_plane = (np.abs(a - b) < 1e-12) & (np.abs(np.abs(a) - 1.0) < 1e-12)
    boundary_edges = np.flatnonzero(same_plane.any(axis=1))

    for arr in (vertices, tets, edges, tet_edges, signs, boundary_vertices, boundary_edges):
        arr.setflags(write=False)
    return Mesh(n, vertices, tets, edges, tet_edges, signs, boundary_vertices, boundary_edges)


def jacobian(mesh: Mesh, t: int) -> tuple[np.ndarray, float, np.ndarray]:
    """Return ``(J, det J, J^{-T})`` for tet ``t``."""
    J = mesh.jacobians[t]
    det = float(np.linalg.det(J))
    if abs(det) < 1e-14 * mesh.h**3:
        raise MeshError(f"degenerate tetrahedron {t} (det J = {det:.3e})")
    return J, det, np.linalg.inv(J).T


def reference_to_physical(mesh: Mesh, t: int, ref) -> np.ndarray:
    """Affine map x = x1 + J (xi, eta, zeta)."""
    x1 = mesh.vertices[mesh.tets[t, 0]]
    return x1 + np.asarray(ref, dtype=float) @ mesh.jacobians[t].T


def barycentric(mesh: Mesh, t: int, point) -> np.ndarray:
    """Barycentric coordinates (1-xi-eta-zeta, xi, eta, zeta) of ``point``."""
    J, _, JinvT = jacobian(mesh, t)
    ref = JinvT.T @ (np.asarray(point, dtype=float) - mesh.vertices[mesh.tets[t, 0]])
    return np.concatenate([[1.0 - ref.sum()], ref])


def locate_point(mesh: Mesh, point) -> tuple[int, np.ndarray]:
    """Find a tet containing ``point``; returns its index and reference coords."""
    p = np.asarray(point, dtype=float)
    if p.shape != (3,) or np.any(np.abs(p) > 1.0 + 1e-12):
        raise ValueError(f"point {point!r} lies outside [-1, 1]^3")
    n = mesh.n
    cell = np.clip(np.floor((p + 1.0) / mesh.h).astype(int), 0, n - 1)
    # a point on a cell boundary may belong to a neighbouring cell's tets only
    candidates = []
    for off in np.ndindex(3, 3, 3):
        c = cell + np.array(off) - 1
        if np.all((c >= 0) & (c < n)):
            base = 5 * (c[0] + n * (c[1] + n * c[2]))
            candidates.append(range(base, base + 5))
    best, best_lam = -1, None
    for rng in candidates:
        for t in rng:
            lam = barycentric(mesh, t, p)
            if lam.min() >= -1e-12:
                return t, lam[1:]
            if best_lam is None or lam.min() > best_lam.min():
                best, best_lam = t, lam
    raise MeshError(f"could not locate {point!r} (closest tet {best})")


def write_vtk(mesh: Mesh, path) -> None:
    """Legacy ASCII VTK unstructured grid (cell type 10 = tetra)."""
    lines = [
        "# vtk DataFile Version 3.0",
        f"cube mesh n={mesh.n}",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {mesh.n_vertices} double",
    ]
    lines += [f"{x:.17g} {y:.17g} {z:.17g}" for x, y, z in mesh.vertices]
    lines.append(f"CELLS {mesh.n_tets} {5 * mesh.n_tets}")
    lines += [f"4 {a} {b} {c} {d}" for a, b, c, d in mesh.tets]
    lines.append(f"CELL_TYPES {mesh.n_tets}")
    lines += ["10"] * mesh.n_tets
    Path(path).write_text("\n".join(lines) + "\n")
