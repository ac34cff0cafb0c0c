import numpy as np
import pytest
import sympy as sp

from hsymcurl.bench import make_case
from hsymcurl.elements import (
    DOF_FUNCTIONALS,
    SYM,
    ElementError,
    Family,
    LagrangeBasis,
    NedelecBasis,
    SymCurlBasis,
    nedelec_reference,
    local_load,
    local_stiffness,
)
from hsymcurl.mesh import LOCAL_EDGES
from hsymcurl.quadrature import edge_rule, exact_tet_monomial, tet_rule
from hsymcurl.tensorcalc import ZERO, PiecewiseField, Poly3, PolyMatrix

REF = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
BASES = {Family.LAGRANGE: LagrangeBasis, Family.NEDELEC: NedelecBasis, Family.SYMCURL: SymCurlBasis}


def random_tets(count, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        V = rng.uniform(-1, 1, size=(4, 3))
        J = (V[1:] - V[0]).T
        d = np.linalg.det(J)
        # keep reasonably shaped tets
        if abs(d) < 0.05:
            continue
        if d < 0:
            V[[2, 3]] = V[[3, 2]]
        out.append(V)
    return out


def local_interpolant(basis, field):
    """Apply the family's DOF functionals to ``field`` (callable x -> 3x3) on one tet."""
    V = basis.vertices
    if basis.family is Family.LAGRANGE:
        return np.concatenate([field(v).reshape(9) for v in V])
    if basis.family is Family.SYMCURL:
        return np.concatenate([DOF_FUNCTIONALS @ field(v).reshape(9) for v in V])
    t, w = edge_rule(3)
    a = np.zeros(18)
    for i, (p, q) in enumerate(LOCAL_EDGES):
        tau = V[q] - V[p]
        vals = np.array([field(V[p] + s * tau) for s in t])  # (nq, 3, 3)
        a[3 * i : 3 * i + 3] = basis.signs[i] * np.einsum("q,qrc,c->r", w, vals, tau)
    return a


def interior_points(V, count, rng):
    lam = rng.dirichlet(np.ones(4), size=count)
    return lam @ V


# --- Lagrange --------------------------------------------------------------


def test_lagrange_vertex_values_and_partition_of_unity():
    b = LagrangeBasis(REF)
    np.testing.assert_allclose(b.hats(REF[0]), [1, 0, 0, 0])
    rng = np.random.default_rng(0)
    for V in random_tets(5):
        b = LagrangeBasis(V)
        lam = b.hats(interior_points(V, 10, rng))
        np.testing.assert_allclose(lam.sum(axis=1), 1.0, atol=1e-14)
        np.testing.assert_allclose(b.hats(V), np.eye(4), atol=1e-13)


def test_lagrange_curl_of_constant_expansion_vanishes():
    b = LagrangeBasis(random_tets(1)[0])
    a = np.tile(np.arange(9.0), 4)
    np.testing.assert_allclose(b.curl(np.zeros(3)) @ a, 0, atol=1e-13)


# --- Nedelec ---------------------------------------------------------------


def test_nedelec_reference_values():
    np.testing.assert_array_equal(nedelec_reference([0, 0, 0])[0], [1, 0, 0])
    b = NedelecBasis(REF)
    np.testing.assert_array_equal(b.curl_vectors()[1], [0, 0, 2])


def test_nedelec_reference_edge_integrals_sympy():
    t = sp.symbols("t")
    xi, eta, zeta = sp.symbols("xi eta zeta")
    funcs = [
        (1 - eta - zeta, xi, xi),
        (-eta, xi, 0),
        (eta, 1 - xi - zeta, eta),
        (zeta, zeta, 1 - xi - eta),
        (-zeta, 0, xi),
        (0, -zeta, eta),
    ]
    for j, f in enumerate(funcs):
        # the hand-written table matches the implementation
        pt = np.array([0.2, 0.3, 0.1])
        val = [float(sp.sympify(c).subs({xi: pt[0], eta: pt[1], zeta: pt[2]})) for c in f]
        np.testing.assert_allclose(nedelec_reference(pt)[j], val, atol=1e-15)
        for i, (p, q) in enumerate(LOCAL_EDGES):
            a, b = REF[p].astype(int).tolist(), REF[q].astype(int).tolist()
            sub = {xi: a[0] + t * (b[0] - a[0]), eta: a[1] + t * (b[1] - a[1]), zeta: a[2] + t * (b[2] - a[2])}
            integrand = sum(sp.sympify(c).subs(sub) * (b[k] - a[k]) for k, c in enumerate(f))
            assert sp.integrate(integrand, (t, 0, 1)) == (1 if i == j else 0), (i, j)


@pytest.mark.parametrize("seed", range(20))
def test_nedelec_piola_duality_with_signs(seed):
    V = random_tets(1, seed)[0]
    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=6)
    b = NedelecBasis(V, signs)
    t, w = edge_rule(3)
    for i, (p, q) in enumerate(LOCAL_EDGES):
        tau = signs[i] * (V[q] - V[p])  # global orientation
        vals = b.vectors(V[p] + t[:, None] * (V[q] - V[p]))  # (nq, 6, 3)
        functional = w @ (vals @ tau)
        np.testing.assert_allclose(functional, np.eye(6)[i], atol=1e-12)


def test_nedelec_curl_map_matches_finite_differences():
    V = random_tets(1, 3)[0]
    b = NedelecBasis(V, [1, -1, 1, 1, -1, 1])
    x0 = V.mean(axis=0)
    h = 1e-5
    D = np.stack([(b.vectors(x0 + h * e) - b.vectors(x0 - h * e)) / (2 * h) for e in np.eye(3)], axis=-1)
    fd_curl = np.stack([D[:, 2, 1] - D[:, 1, 2], D[:, 0, 2] - D[:, 2, 0], D[:, 1, 0] - D[:, 0, 1]], axis=1)
    np.testing.assert_allclose(b.curl_vectors(), fd_curl, atol=1e-6)


# --- sym Curl element ------------------------------------------------------


def test_dof_functional_matrix():
    L = DOF_FUNCTIONALS
    for i in (1, 2, 3, 5, 6, 7):
        np.testing.assert_array_equal(L[i], np.eye(9)[i])
    np.testing.assert_array_equal(L[0], [1, 0, 0, 0, -1, 0, 0, 0, 0])
    np.testing.assert_array_equal(L[4], [0, 0, 0, 0, 1, 0, 0, 0, -1])
    np.testing.assert_array_equal(L[8], [1, 0, 0, 0, 1, 0, 0, 0, 1])
    assert abs(np.linalg.det(L)) > 0


def test_symcurl_identity_functionals():
    vals = DOF_FUNCTIONALS @ np.eye(3).reshape(9)
    np.testing.assert_array_equal(vals[:8], 0)
    assert vals[8] == 3


@pytest.mark.parametrize("seed", range(5))
def test_symcurl_kronecker_duality(seed):
    V = random_tets(1, seed)[0]
    b = SymCurlBasis(V)
    for k in range(4):
        block = DOF_FUNCTIONALS @ b.ansatz(V[k])  # (9, 36)
        np.testing.assert_allclose(block, np.eye(36)[9 * k : 9 * k + 9], atol=1e-12)


def test_symcurl_curl_of_x_identity():
    V = random_tets(1, 8)[0]
    b = SymCurlBasis(V)
    a = local_interpolant(b, lambda x: x[0] * np.eye(3))
    expected = np.array([[0, 0, 0], [0, 0, 1], [0, -1, 0]], dtype=float).reshape(9)
    for x in interior_points(V, 5, np.random.default_rng(0)):
        np.testing.assert_allclose(b.curl(x) @ a, expected, atol=1e-12)


def test_symcurl_rejects_degenerate_tet():
    V = REF.copy()
    V[3] = [1e-14, 1e-14, 1e-14]
    with pytest.raises(ElementError):
        SymCurlBasis(V)


# --- shared properties -----------------------------------------------------


def _linear_fields(rng):
    A, B = rng.normal(size=(2, 3, 3))
    c = rng.normal(size=(3, 3, 3))
    yield lambda x: x[0] * np.outer([1, 0, 0], [0, 1, 0])
    yield lambda x: A + np.einsum("ijk,k->ij", c, x)
    yield lambda x: B


def _nedelec_fields(rng):
    a, b = rng.normal(size=(2, 3, 3))
    yield lambda x: a
    yield lambda x: a + np.cross(b, x)  # every row in R^1


@pytest.mark.parametrize("family", list(Family))
def test_patch_reproduction(family):
    rng = np.random.default_rng(21)
    fields = _nedelec_fields(rng) if family is Family.NEDELEC else _linear_fields(rng)
    for field in fields:
        for V in random_tets(3, 5):
            b = BASES[family](V)
            a = local_interpolant(b, field)
            for x in interior_points(V, 10, rng):
                np.testing.assert_allclose(b.field(a, x), field(x).reshape(9), atol=1e-12)


@pytest.mark.parametrize("family", list(Family))
def test_curl_matches_finite_differences(family):
    rng = np.random.default_rng(2)
    V = random_tets(1, 11)[0]
    b = BASES[family](V)
    h = 1e-5
    for x in interior_points(V, 3, rng):
        D = np.stack([(b.ansatz(x + h * e) - b.ansatz(x - h * e)) / (2 * h) for e in np.eye(3)], axis=-1)
        D = D.reshape(3, 3, -1, 3)  # (row, component, column, derivative)
        fd = np.empty((3, 3, D.shape[2]))
        fd[:, 0] = D[:, 2, :, 1] - D[:, 1, :, 2]
        fd[:, 1] = D[:, 0, :, 2] - D[:, 2, :, 0]
        fd[:, 2] = D[:, 1, :, 0] - D[:, 0, :, 1]
        np.testing.assert_allclose(b.curl(x), fd.reshape(9, -1), atol=1e-6)


@pytest.mark.parametrize("family", list(Family))
def test_local_stiffness_symmetric_psd(family):
    rule = tet_rule(2)
    for V in random_tets(10, 17):
        K = local_stiffness(BASES[family](V), rule)
        assert K.shape == (family.n_loc,) * 2
        assert np.abs(K - K.T).max() <= 1e-12
        assert np.linalg.eigvalsh(K).min() >= -1e-10 * np.linalg.norm(K)


def test_local_stiffness_needs_degree_two():
    with pytest.raises(ValueError):
        local_stiffness(LagrangeBasis(REF), tet_rule(1))


def test_lagrange_skew_constant_in_kernel():
    A = np.array([[0, 1, -2], [-1, 0, 3], [2, -3, 0]], dtype=float)
    b = LagrangeBasis(random_tets(1, 4)[0])
    a = local_interpolant(b, lambda x: A)
    np.testing.assert_allclose(local_stiffness(b, tet_rule(2)) @ a, 0, atol=1e-12)


def test_symcurl_spherical_quadratic_form():
    V = random_tets(1, 6)[0]
    b = SymCurlBasis(V)
    g, c0 = np.array([0.3, -1.2, 0.7]), 0.4
    a = local_interpolant(b, lambda x: (c0 + g @ x) * np.eye(3))
    # sym Curl term vanishes for lambda I, so the form is 3 * int lambda^2
    np.testing.assert_allclose(SYM @ b.curl(V[0]) @ a, 0, atol=1e-12)
    lam = Poly3.const(c0) + sum((Poly3.var(k) * g[k] for k in range(3)), ZERO)
    expected = 3 * integrate_over_tet(lam * lam, V)
    assert a @ local_stiffness(b, tet_rule(2)) @ a == pytest.approx(expected, rel=1e-12)


# --- load vectors ----------------------------------------------------------


def compose_affine(p: Poly3, V) -> Poly3:
    """p(x1 + J xi) as a polynomial in xi."""
    x1, J = V[0], (V[1:] - V[0]).T
    maps = [Poly3.const(x1[i]) + sum((Poly3.var(k) * J[i, k] for k in range(3)), ZERO) for i in range(3)]
    out = ZERO
    for (a, b, c), coef in p.terms.items():
        out = out + coef * maps[0] ** a * maps[1] ** b * maps[2] ** c
    return out


def integrate_over_tet(p: Poly3, V) -> float:
    q = compose_affine(p, V)
    det = np.linalg.det((V[1:] - V[0]).T)
    return float(sum(c * exact_tet_monomial(*e) for e, c in q.terms.items())) * det


def test_load_of_zero_field():
    b = LagrangeBasis(random_tets(1)[0])
    assert not np.any(local_load(b, PiecewiseField.smooth(PolyMatrix.zeros()), tet_rule(4)))


def test_load_of_identity_on_left_tet():
    V = -0.5 * np.abs(random_tets(1, 2)[0]) - 0.01  # entirely in x < 0
    V = V if np.linalg.det((V[1:] - V[0]).T) > 0 else V[[0, 1, 3, 2]]
    b = LagrangeBasis(V)
    f = local_load(b, PiecewiseField(PolyMatrix.identity(), PolyMatrix.zeros()), tet_rule(4))
    np.testing.assert_allclose(f[[0, 9, 18, 27]], b.detJ / 24, rtol=1e-13)
    np.testing.assert_allclose(f[[1, 10, 19, 28]], 0, atol=1e-15)


@pytest.mark.parametrize("family", list(Family))
def test_vortex_load_against_exact_integration(family):
    V = random_tets(1, 9)[0]
    b = BASES[family](V)
    M = make_case("vortex").load
    f = local_load(b, M, tet_rule(4))
    # oracle: each basis column is linear, so integrate column * M exactly
    coeffs = np.linalg.lstsq(
        np.column_stack([np.ones(4), V]), b.ansatz(V).reshape(4, -1), rcond=None
    )[0].reshape(4, 9, -1)  # affine coefficients of every ansatz entry
    for j in range(0, family.n_loc, 5):
        total = 0.0
        for c in range(9):
            lin = Poly3.const(coeffs[0, c, j]) + sum((Poly3.var(k) * coeffs[k + 1, c, j] for k in range(3)), ZERO)
            total += integrate_over_tet(lin * M.left[c // 3, c % 3], V)
        assert f[j] == pytest.approx(total, rel=1e-12, abs=1e-12)
