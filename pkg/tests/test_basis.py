import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import legendre as npleg

from dgblend.basis import build_basis, modal_to_nodal, nodal_to_modal


def test_two_point_lobatto():
    b = build_basis(1)
    np.testing.assert_array_equal(b.nodes, [-1.0, 1.0])
    np.testing.assert_allclose(b.weights, [1.0, 1.0], rtol=0, atol=1e-15)


def test_three_point_lobatto():
    b = build_basis(2)
    np.testing.assert_allclose(b.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(b.weights, [1 / 3, 4 / 3, 1 / 3], atol=1e-15)


def _mp_lgl(n, dps=50):
    """High-precision LGL nodes, weights and derivative matrix (independent oracle)."""
    with mpmath.workdps(dps):
        # P_n'(x) via its Legendre-series coefficients turned monomial
        c = [0] * n + [1]
        dpoly = npleg.leg2poly(npleg.legder(c))[::-1]
        interior = sorted(mpmath.re(r) for r in mpmath.polyroots([mpmath.mpf(int(round(v * 2**40))) / 2**40 for v in dpoly], maxsteps=200, extraprec=200))
        # polish with Newton on P_n' using mpmath's Legendre derivative
        polished = [mpmath.findroot(lambda t: mpmath.diff(lambda s: mpmath.legendre(n, s), t), r) for r in interior]
        x = [mpmath.mpf(-1)] + polished + [mpmath.mpf(1)]
        w = [mpmath.mpf(2) / (n * (n + 1) * mpmath.legendre(n, xi) ** 2) for xi in x]
        m = len(x)
        d = mpmath.matrix(m, m)
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                num = mpmath.fprod(x[j] - x[k] for k in range(m) if k != j)
                den = mpmath.fprod(x[i] - x[k] for k in range(m) if k != i)
                d[i, j] = den / num / (x[i] - x[j])
            d[i, i] = -mpmath.fsum(d[i, j] for j in range(m) if j != i)
        return x, w, d


def test_n7_against_high_precision_oracle():
    n = 7
    b = build_basis(n)
    x, w, d = _mp_lgl(n)
    np.testing.assert_allclose(b.nodes, [float(v) for v in x], rtol=0, atol=1e-15)
    np.testing.assert_allclose(b.weights, [float(v) for v in w], rtol=0, atol=1e-15)
    d_ref = np.array([[float(d[i, j]) for j in range(n + 1)] for i in range(n + 1)])
    np.testing.assert_allclose(b.diff_matrix, d_ref, rtol=0, atol=1e-12)
    q = b.sbp_q
    np.testing.assert_allclose(q + q.T, b.boundary_matrix, rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 10))
def test_basis_invariants(n):
    b = build_basis(n)
    assert b.nodes[0] == -1.0 and b.nodes[-1] == 1.0
    assert np.all(np.diff(b.nodes) > 0)
    assert np.all(b.weights > 0)
    assert abs(b.weights.sum() - 2.0) < 1e-13
    np.testing.assert_array_equal(b.weights, b.weights[::-1])
    q = b.sbp_q
    np.testing.assert_allclose(q + q.T, b.boundary_matrix, rtol=0, atol=1e-12)
    np.testing.assert_allclose(b.diff_matrix @ np.ones(n + 1), 0.0, atol=1e-12)
    np.testing.assert_allclose(b.vandermonde @ b.inv_vandermonde, np.eye(n + 1), atol=1e-12)


@pytest.mark.parametrize("n", [1, 3, 7, 9])
def test_derivative_exact_for_monomials(n):
    b = build_basis(n)
    x = b.nodes
    for k in range(n + 1):
        expected = k * x ** (k - 1) if k else np.zeros_like(x)
        np.testing.assert_allclose(b.diff_matrix @ x**k, expected, rtol=0, atol=1e-12 * max(1, k * k))


def test_zero_degree_is_single_subcell():
    b = build_basis(0)
    assert b.n_nodes == 1
    assert b.weights[0] == 2.0
    assert b.diff_matrix.shape == (1, 1) and b.diff_matrix[0, 0] == 0.0


def test_basis_arrays_are_read_only():
    b = build_basis(3)
    with pytest.raises(ValueError):
        b.nodes[0] = 0.0


def test_modal_constant_and_linear():
    b = build_basis(5)
    m = nodal_to_modal(b, np.full(6, 2.5))
    assert abs(m[0] - 2.5) < 1e-14
    np.testing.assert_allclose(m[1:], 0.0, atol=1e-14)
    m = nodal_to_modal(b, b.nodes)
    np.testing.assert_allclose(m, [0, 1, 0, 0, 0, 0], atol=1e-14)


@pytest.mark.parametrize("n", [2, 4, 7, 9])
def test_modal_matches_analytic_expansion(n):
    rng = np.random.default_rng(n)
    coeffs = rng.normal(size=n + 1)
    b = build_basis(n)
    values = npleg.legval(b.nodes, coeffs)
    np.testing.assert_allclose(nodal_to_modal(b, values), coeffs, rtol=0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 9), st.lists(st.floats(-1e3, 1e3), min_size=10, max_size=10))
def test_modal_round_trip(n, data):
    b = build_basis(n)
    u = np.array(data[: n + 1])
    back = modal_to_nodal(b, nodal_to_modal(b, u))
    np.testing.assert_allclose(back, u, rtol=0, atol=1e-12 * max(1.0, np.abs(u).max()))


def test_modal_length_mismatch():
    with pytest.raises(ValueError):
        nodal_to_modal(build_basis(3), np.ones(3))
