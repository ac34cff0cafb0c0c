"""Quadrature on the reference tetrahedron and the unit interval.

Reference tetrahedron: vertices (0,0,0), (1,0,0), (0,1,0), (0,0,1), volume 1/6.
Rules of degree >= 3 are conical (Duffy) products of Gauss-Jacobi rules, so
every weight is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


@dataclass(frozen=True)
class QuadRule:
    points: np.ndarray  # (npts, 3) reference coordinates
    weights: np.ndarray  # (npts,)
    degree: int

    def __len__(self) -> int:
        return len(self.weights)


def exact_tet_monomial(a: int, b: int, c: int) -> Fraction:
    """Integral of xi^a eta^b zeta^c over the reference tetrahedron."""
    if min(a, b, c) < 0:
        raise ValueError("exponents must be non-negative")
    return Fraction(factorial(a) * factorial(b) * factorial(c), factorial(a + b + c + 3))


def _conical_rule(degree: int) -> tuple[np.ndarray, np.ndarray]:
    m = (degree + 2) // 2
    # Collapsed coordinates: xi = u, eta = (1-u) v, zeta = (1-u)(1-v) w; the
    # Jacobian (1-u)^2 (1-v) is absorbed into Jacobi weights on [-1, 1].
    tu, wu = roots_jacobi(m, 2.0, 0.0)
    tv, wv = roots_jacobi(m, 1.0, 0.0)
    tw, ww = roots_legendre(m)
    u, v, w = (tu + 1) / 2, (tv + 1) / 2, (tw + 1) / 2
    wu, wv, ww = wu / 8, wv / 4, ww / 2
    U, V, W = np.meshgrid(u, v, w, indexing="ij")
    WU, WV, WW = np.meshgrid(wu, wv, ww, indexing="ij")
    xi = U
    eta = (1 - U) * V
    zeta = (1 - U) * (1 - V) * W
    pts = np.stack([xi.ravel(), eta.ravel(), zeta.ravel()], axis=1)
    return pts, (WU * WV * WW).ravel()


@lru_cache(maxsize=None)
def tet_rule(degree: int) -> QuadRule:
    """Positive-weight rule exact for polynomials of total degree ``degree``."""
    if not isinstance(degree, (int, np.integer)) or not 1 <= degree <= 6:
        raise ValueError(f"unsupported tetrahedron rule degree {degree!r}; use 1..6")
    if degree == 1:
        pts = np.array([[0.25, 0.25, 0.25]])
        wts = np.array([1.0 / 6.0])
    elif degree == 2:
        a = (5.0 - np.sqrt(5.0)) / 20.0
        b = 1.0 - 3.0 * a
        pts = np.array([[a, a, a], [b, a, a], [a, b, a], [a, a, b]])
        wts = np.full(4, 1.0 / 24.0)
    else:
        pts, wts = _conical_rule(degree)
    pts.setflags(write=False)
    wts.setflags(write=False)
    return QuadRule(pts, wts, int(degree))


@lru_cache(maxsize=None)
def edge_rule(degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights on [0, 1], exact to ``degree``."""
    if not isinstance(degree, (int, np.integer)) or not 1 <= degree <= 5:
        raise ValueError(f"unsupported edge rule degree {degree!r}; use 1..5")
    t, w = roots_legendre(degree // 2 + 1)
    t, w = (t + 1) / 2, w / 2
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w
