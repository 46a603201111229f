import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import legendre as npleg

from infsup.errors import DomainError, InvalidParameterError
from infsup.polybasis import (
    BasisSet1D,
    edge_at,
    gll_rule,
    lagrange_at,
    lagrange_deriv_at,
    legendre,
)

DEGREES = range(1, 9)


def basis(N):
    return BasisSet1D.from_degree(N)


def sample_points(n=64):
    return np.concatenate([np.linspace(-1, 1, n), [-0.123456789, 0.987654321]])


# -- quadrature -------------------------------------------------------------

def test_gll_n1():
    r = gll_rule(1)
    assert r.nodes.tolist() == [-1.0, 1.0]
    assert r.weights.tolist() == [1.0, 1.0]


def test_gll_n2():
    r = gll_rule(2)
    np.testing.assert_allclose(r.nodes, [-1, 0, 1], atol=1e-15)
    np.testing.assert_allclose(r.weights, [1 / 3, 4 / 3, 1 / 3], rtol=1e-14)


def test_gll_n3():
    r = gll_rule(3)
    s = 1 / math.sqrt(5)
    np.testing.assert_allclose(r.nodes, [-1, -s, s, 1], atol=1e-15)
    np.testing.assert_allclose(r.weights, [1 / 6, 5 / 6, 5 / 6, 1 / 6], rtol=1e-14)


@pytest.mark.parametrize("N", list(DEGREES) + [12, 20])
def test_gll_nodes_match_legendre_derivative_roots(N):
    # independent route: numpy's companion-matrix roots of P_N'
    roots = np.sort(npleg.legroots(npleg.legder([0] * N + [1])).real)
    np.testing.assert_allclose(gll_rule(N).nodes[1:-1], roots, atol=1e-13)


@pytest.mark.parametrize("N", DEGREES)
def test_gll_symmetry_is_exact(N):
    r = gll_rule(N)
    assert np.array_equal(r.nodes, -r.nodes[::-1])
    assert np.array_equal(r.weights, r.weights[::-1])
    assert r.nodes[0] == -1.0 and r.nodes[-1] == 1.0
    assert np.all(np.diff(r.nodes) > 0)
    assert np.all(r.weights > 0)


@pytest.mark.parametrize("N", DEGREES)
def test_gll_exactness(N):
    r = gll_rule(N)
    assert abs(r.weights.sum() - 2.0) <= 1e-13
    for k in range(2 * N):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert abs(r.integrate(r.nodes**k) - exact) <= 1e-12, k


@pytest.mark.parametrize("N", DEGREES)
def test_gll_not_exact_one_degree_higher(N):
    # degree 2N is where the Lobatto rule first fails
    r = gll_rule(N)
    k = 2 * N
    assert abs(r.integrate(r.nodes**k) - 2.0 / (k + 1)) > 1e-6


@pytest.mark.parametrize("N", [1, 3, 8, 20])
def test_gll_newton_residual(N):
    x = gll_rule(N).nodes
    _, dp = legendre(N, x)
    assert np.max(np.abs((1 - x**2) * dp)) <= 1e-14 * max(1, N * (N + 1) / 2)


@pytest.mark.parametrize("N", [0, -2, 1.5])
def test_gll_invalid_degree(N):
    with pytest.raises(InvalidParameterError):
        gll_rule(N)


def test_legendre_matches_numpy():
    x = np.linspace(-1, 1, 31)
    for n in range(7):
        c = [0] * n + [1]
        p, dp = legendre(n, x)
        np.testing.assert_allclose(p, npleg.legval(x, c), atol=1e-13)
        np.testing.assert_allclose(dp, npleg.legval(x, npleg.legder(c)), atol=1e-12)


# -- Lagrange basis ---------------------------------------------------------

@pytest.mark.parametrize("N", DEGREES)
def test_kronecker_property(N):
    b = basis(N)
    np.testing.assert_allclose(lagrange_at(b, b.rule.nodes), np.eye(N + 1), atol=1e-13)


@pytest.mark.parametrize("N", DEGREES)
def test_partition_of_unity(N):
    vals = lagrange_at(basis(N), sample_points())
    assert np.max(np.abs(vals.sum(axis=0) - 1.0)) <= 1e-13


def test_lagrange_examples():
    np.testing.assert_allclose(lagrange_at(basis(1), [0.0])[:, 0], [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(lagrange_at(basis(2), [0.5])[:, 0], [-1 / 8, 3 / 4, 3 / 8],
                               atol=1e-15)


@pytest.mark.parametrize("N", DEGREES)
def test_lagrange_matches_monomial_interpolant(N):
    # oracle: solve the Vandermonde system for each basis polynomial
    x = gll_rule(N).nodes
    coef = np.linalg.solve(np.vander(x, increasing=True), np.eye(N + 1))
    pts = sample_points(20)
    expected = (np.vander(pts, N + 1, increasing=True) @ coef).T
    np.testing.assert_allclose(lagrange_at(basis(N), pts), expected, atol=1e-11)


def test_derivative_examples():
    d1 = lagrange_deriv_at(basis(1), np.linspace(-1, 1, 7))
    np.testing.assert_allclose(d1[0], -0.5, atol=1e-15)
    np.testing.assert_allclose(d1[1], 0.5, atol=1e-15)
    np.testing.assert_allclose(lagrange_deriv_at(basis(2), [0.0])[:, 0], [-0.5, 0, 0.5],
                               atol=1e-15)


@pytest.mark.parametrize("N", DEGREES)
def test_derivative_column_sums_vanish(N):
    d = lagrange_deriv_at(basis(N), sample_points())
    assert np.max(np.abs(d.sum(axis=0))) <= 1e-11


@pytest.mark.parametrize("N", DEGREES)
def test_derivative_central_difference(N):
    b = basis(N)
    pts = np.linspace(-0.9, 0.9, 11)
    eps = 1e-6
    fd = (lagrange_at(b, pts + eps) - lagrange_at(b, pts - eps)) / (2 * eps)
    np.testing.assert_allclose(lagrange_deriv_at(b, pts), fd, atol=1e-6 * N**2)


def test_derivative_at_nodes_is_spectral_matrix():
    # standard closed form for N=2 on {-1, 0, 1}: D[j, i] = h_i'(x_j)
    D = np.array([[-1.5, 2.0, -0.5], [-0.5, 0.0, 0.5], [0.5, -2.0, 1.5]])
    b = basis(2)
    np.testing.assert_allclose(lagrange_deriv_at(b, b.rule.nodes).T, D, atol=1e-14)


# -- edge basis -------------------------------------------------------------

def test_edge_n1_constant():
    np.testing.assert_allclose(edge_at(basis(1), np.linspace(-1, 1, 9)), 0.5, atol=1e-15)


def test_edge_n2_closed_form():
    pts = np.linspace(-1, 1, 9)
    e = edge_at(basis(2), pts)
    np.testing.assert_allclose(e[0], 0.5 - pts, atol=1e-14)
    np.testing.assert_allclose(e[1], 0.5 + pts, atol=1e-14)
    assert edge_at(basis(2), [0.0])[0, 0] == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("N", DEGREES)
def test_edge_integral_duality(N):
    # Gauss-Legendre with N+1 points is exact for degree N-1 edge polynomials
    b = basis(N)
    x = b.rule.nodes
    gx, gw = npleg.leggauss(N + 2)
    integrals = np.empty((N, N))
    for j in range(N):
        a, c = x[j], x[j + 1]
        pts = 0.5 * (c - a) * gx + 0.5 * (c + a)
        integrals[:, j] = edge_at(b, pts) @ gw * 0.5 * (c - a)
    np.testing.assert_allclose(integrals, np.eye(N), atol=1e-12)


@pytest.mark.parametrize("fn", [lagrange_at, lagrange_deriv_at, edge_at])
def test_points_outside_interval_rejected(fn):
    with pytest.raises(DomainError):
        fn(basis(2), [0.0, 1.0 + 1e-9])
    fn(basis(2), [-1 - 1e-13, 1 + 1e-13])


def test_basis_values_are_read_only():
    b = basis(3)
    with pytest.raises(ValueError):
        b.rule.nodes[0] = 0.0


@settings(max_examples=60, deadline=None)
@given(N=st.integers(1, 12), x=st.floats(-1, 1, allow_nan=False))
def test_partition_of_unity_property(N, x):
    b = basis(N)
    assert abs(lagrange_at(b, [x]).sum() - 1.0) <= 1e-12
    assert abs(lagrange_deriv_at(b, [x]).sum()) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(N=st.integers(1, 10), x=st.floats(-1, 1, allow_nan=False))
def test_edge_is_minus_cumulative_derivative(N, x):
    b = basis(N)
    d = lagrange_deriv_at(b, [x])[:, 0]
    e = edge_at(b, [x])[:, 0]
    for i in range(1, N + 1):
        assert e[i - 1] == pytest.approx(-d[:i].sum(), abs=1e-12)
    # sum of all h_k' is zero, so the last edge function equals h_N'
    assert e[-1] == pytest.approx(d[-1], abs=1e-10)


@pytest.mark.parametrize("x", [2.225073858507e-311, -5e-324, 1e-40, -1 + 1e-300])
def test_points_next_to_a_node_stay_finite(x):
    # barycentric terms overflow for subnormal distances to a node
    for N in (1, 2, 3, 4):
        b = basis(N)
        for fn in (lagrange_at, lagrange_deriv_at, edge_at):
            assert np.all(np.isfinite(fn(b, [x])))
        assert abs(lagrange_at(b, [x]).sum() - 1.0) <= 1e-14
