"""Local element families for 3x3 matrix fields in Voigt form.

A matrix field P is flattened row-major to a 9-vector. Every family exposes a
:class:`LocalBasis` whose ``ansatz`` and ``curl`` methods return the 9 x n_loc
matrices of basis values and their row-wise Curls at physical points.

Local DOF layouts
-----------------
LAGRANGE  column ``9 k + c``: hat function of vertex k times the unit Voigt
          vector e_c.
NEDELEC   column ``3 i + r``: edge function theta_i placed in matrix row r.
SYMCURL   column ``9 k + j``: dual to functional l_j at vertex k.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .mesh import Mesh, jacobian
from .quadrature import QuadRule


class ElementError(RuntimeError):
    pass


class Family(str, Enum):
    LAGRANGE = "lagrange"
    NEDELEC = "nedelec"
    SYMCURL = "symcurl"

    @property
    def n_loc(self) -> int:
        return {"lagrange": 36, "nedelec": 18, "symcurl": 36}[self.value]

    @classmethod
    def parse(cls, name) -> Family:
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown element family {name!r}") from None


def voigt_sym_matrix() -> np.ndarray:
    """9x9 matrix S with ``S @ voigt(P) == voigt(sym P)``."""
    S = np.zeros((9, 9))
    for i in range(3):
        for j in range(3):
            S[3 * i + j, 3 * i + j] += 0.5
            S[3 * i + j, 3 * j + i] += 0.5
    return S


SYM = voigt_sym_matrix()


def dof_functionals() -> np.ndarray:
    """Vertex functionals of the sym-Curl element as rows of a 9x9 matrix.

    Rows 0 and 4 are P11 - P22 and P22 - P33, row 8 is the trace, the other
    rows pick the off-diagonal entries. Rows 0..7 are shared between
    neighbouring elements; row 8 stays element-local.
    """
    L = np.eye(9)
    L[0] = [1, 0, 0, 0, -1, 0, 0, 0, 0]
    L[4] = [0, 0, 0, 0, 1, 0, 0, 0, -1]
    L[8] = [1, 0, 0, 0, 1, 0, 0, 0, 1]
    return L


DOF_FUNCTIONALS = dof_functionals()


def curl_of_scalar_columns(grads: np.ndarray) -> np.ndarray:
    """Curls of the fields ``phi_k * E_c`` for scalar functions with gradients ``grads``.

    ``grads`` has shape (..., m, 3). Returns (..., 9, 9 m); column ``9 k + c``
    is the Voigt Curl of ``phi_k`` times the unit Voigt vector e_c. Row r of
    ``phi E_{rs}`` is ``phi e_s``, whose curl is ``grad phi x e_s``.
    """
    grads = np.asarray(grads, dtype=float)
    m = grads.shape[-2]
    out = np.zeros(grads.shape[:-2] + (9, 9 * m))
    g1, g2, g3 = grads[..., 0], grads[..., 1], grads[..., 2]
    # cross(g, e_s) is column s of anti(g)
    A = np.zeros(grads.shape[:-1] + (3, 3))
    A[..., 0, 1], A[..., 0, 2] = -g3, g2
    A[..., 1, 0], A[..., 1, 2] = g3, -g1
    A[..., 2, 0], A[..., 2, 1] = -g2, g1
    for k in range(m):
        for r in range(3):
            out[..., 3 * r : 3 * r + 3, 9 * k + 3 * r : 9 * k + 3 * r + 3] = A[..., k, :, :]
    return out


# Reference Nedelec functions theta_i(xi) = a_i + B_i xi, on edges
# (1,2), (2,3), (1,3), (1,4), (2,4), (3,4).
_NED_A = np.array(
    [[1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0], [0, 0, 0]], dtype=float
)
_NED_B = np.array(
    [
        [[0, -1, -1], [1, 0, 0], [1, 0, 0]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, 1, 0], [-1, 0, -1], [0, 1, 0]],
        [[0, 0, 1], [0, 0, 1], [-1, -1, 0]],
        [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
    ],
    dtype=float,
)


def _curl_affine(B: np.ndarray) -> np.ndarray:
    return np.stack([B[..., 2, 1] - B[..., 1, 2], B[..., 0, 2] - B[..., 2, 0], B[..., 1, 0] - B[..., 0, 1]], axis=-1)


NED_REF_CURLS = _curl_affine(_NED_B)


def nedelec_reference(ref) -> np.ndarray:
    """Reference edge functions at ``ref`` (..., 3) -> (..., 6, 3)."""
    ref = np.asarray(ref, dtype=float)
    return _NED_A + np.einsum("iab,...b->...ia", _NED_B, ref)


class LocalBasis:
    """Basis of one family on one tetrahedron, evaluated in physical space."""

    family: Family

    def __init__(self, vertices: np.ndarray):
        self.vertices = np.asarray(vertices, dtype=float)
        self.J = (self.vertices[1:] - self.vertices[0]).T
        self.detJ = float(np.linalg.det(self.J))
        if self.detJ <= 0:
            raise ElementError(f"tetrahedron must be positively oriented (det J = {self.detJ:.3e})")
        self.Jinv = np.linalg.inv(self.J)

    @property
    def n_loc(self) -> int:
        return self.family.n_loc

    def to_reference(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.vertices[0]) @ self.Jinv.T

    def to_physical(self, ref) -> np.ndarray:
        return self.vertices[0] + np.asarray(ref, dtype=float) @ self.J.T

    def ansatz(self, x) -> np.ndarray:
        raise NotImplementedError

    def curl(self, x) -> np.ndarray:
        raise NotImplementedError

    def sym_curl(self, x) -> np.ndarray:
        return SYM @ self.curl(x)

    def field(self, coeffs, x) -> np.ndarray:
        """Voigt value of the expansion with local coefficients ``coeffs``."""
        return self.ansatz(x) @ np.asarray(coeffs, dtype=float)


class LagrangeBasis(LocalBasis):
    family = Family.LAGRANGE

    def __init__(self, vertices):
        super().__init__(vertices)
        # physical gradients of the barycentric hats
        g = self.Jinv
        self.grads = np.vstack([-g.sum(axis=0), g])
        self._curl = curl_of_scalar_columns(self.grads)

    def hats(self, x) -> np.ndarray:
        ref = self.to_reference(x)
        return np.concatenate([1.0 - ref.sum(axis=-1, keepdims=True), ref], axis=-1)

    def ansatz(self, x) -> np.ndarray:
        lam = self.hats(x)
        return np.einsum("...k,ij->...ikj", lam, np.eye(9)).reshape(lam.shape[:-1] + (9, 36))

    def curl(self, x) -> np.ndarray:
        shape = np.asarray(x).shape[:-1]
        return np.broadcast_to(self._curl, shape + (9, 36))


class NedelecBasis(LocalBasis):
    family = Family.NEDELEC

    def __init__(self, vertices, signs=None):
        super().__init__(vertices)
        self.signs = np.ones(6) if signs is None else np.asarray(signs, dtype=float)
        # covariant map for values, contravariant map for curls
        self._curl_vectors = self.signs[:, None] * (NED_REF_CURLS @ self.J.T) / self.detJ
        self._curl = self._block(self._curl_vectors)

    @staticmethod
    def _block(vectors: np.ndarray) -> np.ndarray:
        # vectors (..., 6, 3) -> (..., 9, 18), theta_i in row block r at column 3i + r
        out = np.zeros(vectors.shape[:-2] + (9, 18))
        for i in range(6):
            for r in range(3):
                out[..., 3 * r : 3 * r + 3, 3 * i + r] = vectors[..., i, :]
        return out

    def vectors(self, x) -> np.ndarray:
        """Mapped edge functions at ``x`` (..., 3) -> (..., 6, 3)."""
        ref_vals = nedelec_reference(self.to_reference(x))
        return self.signs[:, None] * (ref_vals @ self.Jinv)

    def curl_vectors(self) -> np.ndarray:
        return self._curl_vectors

    def ansatz(self, x) -> np.ndarray:
        return self._block(self.vectors(x))

    def curl(self, x) -> np.ndarray:
        shape = np.asarray(x).shape[:-1]
        return np.broadcast_to(self._curl, shape + (9, 18))


class SymCurlBasis(LocalBasis):
    """Linear H(sym Curl) element built directly on the physical tetrahedron.

    The monomial ansatz uses coordinates relative to the centroid. Column
    ``9 k + j`` of ``C`` holds the monomial coefficients of the basis function
    dual to functional ``l_j`` at vertex ``k``.
    """

    family = Family.SYMCURL
    max_condition = 1e12

    def __init__(self, vertices):
        super().__init__(vertices)
        self.center = self.vertices.mean(axis=0)
        Cinv = np.vstack([DOF_FUNCTIONALS @ self.monomials(v) for v in self.vertices])
        cond = np.linalg.cond(Cinv)
        if not np.isfinite(cond) or cond > self.max_condition:
            raise ElementError(f"sym-Curl element is ill-conditioned (cond {cond:.3e})")
        self.C = np.linalg.solve(Cinv, np.eye(36))
        self._curl = _MONOMIAL_CURLS @ self.C

    def monomials(self, x) -> np.ndarray:
        """Ansatz matrix ``[1 I9, x I9, y I9, z I9]`` at ``x`` (..., 3) -> (..., 9, 36)."""
        s = np.asarray(x, dtype=float) - self.center
        m = np.concatenate([np.ones(s.shape[:-1] + (1,)), s], axis=-1)
        return np.einsum("...k,ij->...ikj", m, np.eye(9)).reshape(m.shape[:-1] + (9, 36))

    def ansatz(self, x) -> np.ndarray:
        return self.monomials(x) @ self.C

    def curl(self, x) -> np.ndarray:
        shape = np.asarray(x).shape[:-1]
        return np.broadcast_to(self._curl, shape + (9, 36))


_MONOMIAL_CURLS = curl_of_scalar_columns(np.vstack([np.zeros(3), np.eye(3)]))


def lagrange_local(mesh: Mesh, t: int) -> LagrangeBasis:
    jacobian(mesh, t)
    return LagrangeBasis(mesh.tet_vertices(t))


def nedelec_local(mesh: Mesh, t: int, signs=None) -> NedelecBasis:
    jacobian(mesh, t)
    if signs is None:
        signs = mesh.tet_edge_signs[t]
    return NedelecBasis(mesh.tet_vertices(t), signs)


def symcurl_local(mesh: Mesh, t: int) -> SymCurlBasis:
    jacobian(mesh, t)
    return SymCurlBasis(mesh.tet_vertices(t))


def local_basis(family, mesh: Mesh, t: int) -> LocalBasis:
    family = Family.parse(family)
    if family is Family.LAGRANGE:
        return lagrange_local(mesh, t)
    if family is Family.NEDELEC:
        return nedelec_local(mesh, t)
    return symcurl_local(mesh, t)


def local_stiffness(basis: LocalBasis, rule: QuadRule) -> np.ndarray:
    """``int N^T S N + (Curl N)^T S (Curl N) dX`` over the element."""
    if rule.degree < 2:
        raise ValueError("stiffness needs a rule of degree >= 2")
    x = basis.to_physical(rule.points)
    N = basis.ansatz(x)
    CN = basis.curl(x)
    w = (rule.weights * basis.detJ)[:, None, None]
    K = np.einsum("qai,qaj->ij", w * N, SYM @ N) + np.einsum("qai,qaj->ij", w * CN, SYM @ CN)
    return 0.5 * (K + K.T)


def local_load(basis: LocalBasis, M, rule: QuadRule) -> np.ndarray:
    """``int N^T M dX`` with ``M`` a :class:`PiecewiseField` or callable returning 3x3 values."""
    x = basis.to_physical(rule.points)
    Mv = np.asarray(M(x)).reshape(len(x), 9)
    N = basis.ansatz(x)
    return np.einsum("q,qai,qa->i", rule.weights * basis.detJ, N, Mv)
