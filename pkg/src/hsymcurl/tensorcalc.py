"""Exact polynomial calculus for 3x3 matrix fields.

Polynomials in ``x, y, z`` are stored with :class:`fractions.Fraction`
coefficients so that differential identities can be checked to exact zero.
Matrix fields are 3x3 tuples of :class:`Poly3`; the Voigt flattening used
throughout the package is row-major (P11, P12, P13, P21, ..., P33).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

import numpy as np

Exponent = tuple[int, int, int]

AXES = {"x": 0, "y": 1, "z": 2, 0: 0, 1: 1, 2: 2}


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**12)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Poly3:
    """Trivariate polynomial with exact rational coefficients.

    Stored in canonical form: no zero coefficients, exponents are
    non-negative integer triples. Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        canon: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != 3 or min(exp) < 0:
                raise ValueError(f"invalid exponent {exp}")
            c = _coerce(c)
            if c:
                canon[exp] = canon.get(exp, Fraction(0)) + c
                if not canon[exp]:
                    del canon[exp]
        self._terms = dict(sorted(canon.items()))
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c) -> Poly3:
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, axis) -> Poly3:
        exp = [0, 0, 0]
        exp[AXES[axis]] = 1
        return cls({tuple(exp): 1})

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly3.const(other)
        if not isinstance(other, Poly3):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "Poly3(0)"
        parts = []
        for (a, b, c), coef in self._terms.items():
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in zip("xyz", (a, b, c)) if e
            )
            parts.append(f"{coef}" + (f"*{mono}" if mono else ""))
        return "Poly3(" + " + ".join(parts) + ")"

    # arithmetic
    def __add__(self, other) -> Poly3:
        other = _as_poly(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly3(terms)

    __radd__ = __add__

    def __neg__(self) -> Poly3:
        return Poly3({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Poly3:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> Poly3:
        return _as_poly(other) - self

    def __mul__(self, other) -> Poly3:
        other = _as_poly(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Poly3(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly3:
        out = Poly3.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, point) -> float:
        return poly_eval(self, point)


def _as_poly(p) -> Poly3:
    if isinstance(p, Poly3):
        return p
    return Poly3.const(p)


X = Poly3.var("x")
Y = Poly3.var("y")
Z = Poly3.var("z")
ZERO = Poly3()
ONE = Poly3.const(1)


def poly_eval(p: Poly3, point) -> float | np.ndarray:
    """Evaluate ``p`` at a point (3,) or a stack of points (..., 3)."""
    pts = np.asarray(point, dtype=float)
    xs, ys, zs = pts[..., 0], pts[..., 1], pts[..., 2]
    out = np.zeros(pts.shape[:-1])
    for (a, b, c), coef in p._terms.items():
        out = out + float(coef) * xs**a * ys**b * zs**c
    return float(out) if out.ndim == 0 else out


def poly_diff(p: Poly3, axis) -> Poly3:
    k = AXES[axis]
    terms = {}
    for e, c in p._terms.items():
        if e[k]:
            d = list(e)
            d[k] -= 1
            terms[tuple(d)] = c * e[k]
    return Poly3(terms)


def gradient(p: Poly3) -> tuple[Poly3, Poly3, Poly3]:
    return tuple(poly_diff(p, k) for k in range(3))


@dataclass(frozen=True)
class PolyMatrix:
    """3x3 matrix of :class:`Poly3` entries."""

    entries: tuple[tuple[Poly3, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_as_poly(p) for p in row) for row in self.entries)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("PolyMatrix needs 3x3 entries")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zeros(cls) -> PolyMatrix:
        return cls(((ZERO,) * 3,) * 3)

    @classmethod
    def from_constant(cls, A) -> PolyMatrix:
        A = np.asarray(A) if not isinstance(A, (list, tuple)) else A
        return cls(tuple(tuple(Poly3.const(_coerce(A[i][j])) for j in range(3)) for i in range(3)))

    @classmethod
    def identity(cls, scale: Poly3 | int = 1) -> PolyMatrix:
        s = _as_poly(scale)
        return cls(tuple(tuple(s if i == j else ZERO for j in range(3)) for i in range(3)))

    def __getitem__(self, ij) -> Poly3:
        i, j = ij
        return self.entries[i][j]

    def map(self, f) -> PolyMatrix:
        return PolyMatrix(tuple(tuple(f(p) for p in row) for row in self.entries))

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        return PolyMatrix(
            tuple(tuple(self[i, j] + other[i, j] for j in range(3)) for i in range(3))
        )

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self + (-other)

    def __neg__(self) -> PolyMatrix:
        return self.map(lambda p: -p)

    def __mul__(self, s) -> PolyMatrix:
        s = _as_poly(s)
        return self.map(lambda p: p * s)

    __rmul__ = __mul__

    @property
    def T(self) -> PolyMatrix:
        return PolyMatrix(tuple(tuple(self[j, i] for j in range(3)) for i in range(3)))

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def degree(self) -> int:
        return max(p.degree() for row in self.entries for p in row)

    def voigt(self) -> tuple[Poly3, ...]:
        return tuple(p for row in self.entries for p in row)

    def __call__(self, points) -> np.ndarray:
        return matrix_eval(self, points)


def matrix_eval(P: PolyMatrix, points) -> np.ndarray:
    """Evaluate at (3,) -> (3, 3) or at (..., 3) -> (..., 3, 3)."""
    pts = np.asarray(points, dtype=float)
    vals = [poly_eval(p, pts) for p in P.voigt()]
    return np.stack(np.broadcast_arrays(*vals), axis=-1).reshape(pts.shape[:-1] + (3, 3))


def vector_curl(v: Iterable[Poly3]) -> tuple[Poly3, Poly3, Poly3]:
    v1, v2, v3 = v
    return (
        poly_diff(v3, 1) - poly_diff(v2, 2),
        poly_diff(v1, 2) - poly_diff(v3, 0),
        poly_diff(v2, 0) - poly_diff(v1, 1),
    )


def matrix_curl(P: PolyMatrix) -> PolyMatrix:
    """Row-wise curl."""
    return PolyMatrix(tuple(vector_curl(row) for row in P.entries))


def sym_part(P: PolyMatrix) -> PolyMatrix:
    return (P + P.T) * Fraction(1, 2)


def skew_part(P: PolyMatrix) -> PolyMatrix:
    return (P - P.T) * Fraction(1, 2)


def trace(P: PolyMatrix) -> Poly3:
    return P[0, 0] + P[1, 1] + P[2, 2]


def dev_part(P: PolyMatrix) -> PolyMatrix:
    return P - PolyMatrix.identity(trace(P) * Fraction(1, 3))


def matrix_div(P: PolyMatrix) -> tuple[Poly3, Poly3, Poly3]:
    """Row-wise divergence (``Di``)."""
    return tuple(
        poly_diff(P[i, 0], 0) + poly_diff(P[i, 1], 1) + poly_diff(P[i, 2], 2)
        for i in range(3)
    )


def div_div(P: PolyMatrix) -> Poly3:
    d = matrix_div(P)
    return poly_diff(d[0], 0) + poly_diff(d[1], 1) + poly_diff(d[2], 2)


def gradient_rows(u: Iterable[Poly3]) -> PolyMatrix:
    """Displacement-gradient layout: row i is grad u_i."""
    return PolyMatrix(tuple(gradient(ui) for ui in u))


def anti(v) -> np.ndarray:
    """Skew matrix with ``anti(v) @ w == cross(v, w)``."""
    v1, v2, v3 = np.asarray(v, dtype=float)
    return np.array([[0.0, -v3, v2], [v3, 0.0, -v1], [-v2, v1, 0.0]])


def anti_poly(v: Iterable[Poly3]) -> PolyMatrix:
    v1, v2, v3 = (_as_poly(p) for p in v)
    return PolyMatrix(((ZERO, -v3, v2), (v3, ZERO, -v1), (-v2, v1, ZERO)))


def _check_normal(normal) -> np.ndarray:
    nu = np.asarray(normal, dtype=float)
    if nu.shape != (3,) or abs(np.linalg.norm(nu) - 1.0) > 1e-12:
        raise ValueError("normal must be a unit 3-vector")
    return nu


def trace_hcurl(P, normal) -> np.ndarray:
    """Tangential trace ``P Anti(nu)^T`` of a matrix value."""
    nu = _check_normal(normal)
    return np.asarray(P, dtype=float) @ anti(nu).T


def trace_hsymcurl(P, normal) -> np.ndarray:
    T = trace_hcurl(P, normal)
    return 0.5 * (T + T.T)


def strong_operator(P: PolyMatrix) -> PolyMatrix:
    """``sym P + Curl(sym Curl P)``: the load that makes ``P`` the exact solution."""
    return sym_part(P) + matrix_curl(sym_part(matrix_curl(P)))


@dataclass(frozen=True)
class PiecewiseField:
    """Matrix field on the cube split at the plane ``x = 0``.

    ``left`` is active where ``x < 0``; ``right`` everywhere else, including
    the plane itself.
    """

    left: PolyMatrix
    right: PolyMatrix = field(default=None)

    def __post_init__(self):
        if self.right is None:
            object.__setattr__(self, "right", self.left)

    @classmethod
    def smooth(cls, P: PolyMatrix) -> PiecewiseField:
        return cls(P, P)

    @property
    def is_smooth(self) -> bool:
        return self.left == self.right

    def piece(self, point) -> PolyMatrix:
        return self.left if float(np.asarray(point)[0]) < 0 else self.right

    def __call__(self, points) -> np.ndarray:
        """Pointwise evaluation with the ``x < 0`` convention."""
        pts = np.asarray(points, dtype=float)
        if self.is_smooth:
            return matrix_eval(self.left, pts)
        mask = (pts[..., 0] < 0)[..., None, None]
        return np.where(mask, matrix_eval(self.left, pts), matrix_eval(self.right, pts))

    def map(self, op) -> PiecewiseField:
        return PiecewiseField(op(self.left), op(self.right))

    def degree(self) -> int:
        return max(self.left.degree(), self.right.degree())


def random_poly(rng: np.random.Generator, degree: int = 3, coeff_range: int = 5) -> Poly3:
    """Random polynomial with integer coefficients in ``[-coeff_range, coeff_range]``."""
    terms = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                terms[(a, b, c)] = int(rng.integers(-coeff_range, coeff_range + 1))
    return Poly3(terms)


def random_poly_matrix(rng: np.random.Generator, degree: int = 3, coeff_range: int = 5) -> PolyMatrix:
    return PolyMatrix(
        tuple(tuple(random_poly(rng, degree, coeff_range) for _ in range(3)) for _ in range(3))
    )
