"""Seeded checks of the sym Curl complex identities on random polynomial fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensorcalc import (
    PolyMatrix,
    anti_poly,
    div_div,
    gradient,
    gradient_rows,
    matrix_curl,
    random_poly,
    random_poly_matrix,
    sym_part,
)


@dataclass
class IdentityResult:
    name: str
    checked: int
    failure: object = None  # offending field, if any

    @property
    def passed(self) -> bool:
        return self.failure is None


def _range_in_divdiv_kernel(rng, count):
    for _ in range(count):
        P = random_poly_matrix(rng)
        if not div_div(sym_part(matrix_curl(P))).is_zero():
            return P
    return None


def _gradients_in_kernel(rng, count):
    for _ in range(count):
        u = [random_poly(rng) for _ in range(3)]
        if not sym_part(matrix_curl(gradient_rows(u))).is_zero():
            return u
    return None


def _spherical_in_kernel(rng, count):
    for _ in range(count):
        lam = random_poly(rng)
        if not sym_part(matrix_curl(PolyMatrix.identity(lam))).is_zero():
            return lam
    return None


def _curl_of_spherical(rng, count):
    for _ in range(count):
        lam = random_poly(rng)
        if not (matrix_curl(PolyMatrix.identity(lam)) + anti_poly(gradient(lam))).is_zero():
            return lam
    return None


IDENTITIES = (
    ("div Div sym Curl P = 0", _range_in_divdiv_kernel),
    ("sym Curl D u = 0", _gradients_in_kernel),
    ("sym Curl (lambda I) = 0", _spherical_in_kernel),
    ("Curl(lambda I) = -Anti(grad lambda)", _curl_of_spherical),
)


def run_identity_suite(seed: int = 0, count: int = 50) -> list[IdentityResult]:
    """Check every identity on ``count`` random degree-3 fields per group."""
    results = []
    for i, (name, check) in enumerate(IDENTITIES):
        rng = np.random.default_rng([seed, i])
        results.append(IdentityResult(name, count, check(rng, count)))
    return results
