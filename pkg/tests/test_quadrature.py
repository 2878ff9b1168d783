import numpy as np
import pytest

from hexbench.quadrature import (
    gl_rule,
    gll_rule,
    lagrange_deriv,
    lagrange_eval,
    legendre_and_derivative,
)


def monomial_error(rule, max_degree):
    """Brute-force exactness oracle: worst error over all monomials."""
    err = 0.0
    for p in range(max_degree + 1):
        exact = 0.0 if p % 2 else 2.0 / (p + 1)
        err = max(err, abs(np.sum(rule.weights * rule.nodes**p) - exact))
    return err


class TestGaussLegendre:
    def test_midpoint(self):
        r = gl_rule(1)
        assert r.nodes.tolist() == [0.0]
        assert r.weights.tolist() == [2.0]

    def test_two_point(self):
        r = gl_rule(2)
        root = 0.5773502691896258  # roots of (3x^2 - 1)/2
        np.testing.assert_allclose(r.nodes, [-root, root], atol=1e-15)
        np.testing.assert_allclose(r.weights, [1.0, 1.0], atol=1e-14)
        assert monomial_error(r, 3) < 1e-14

    def test_three_point_quartic(self):
        r = gl_rule(3)
        assert abs(np.sum(r.weights * r.nodes**4) - 2.0 / 5.0) < 1e-13

    def test_rejects_bad_count(self):
        with pytest.raises(ValueError):
            gl_rule(0)

    @pytest.mark.parametrize("n", range(2, 21))
    def test_invariants(self, n):
        r = gl_rule(n)
        assert np.all(np.diff(r.nodes) > 0)
        assert np.all(np.abs(r.nodes) < 1.0)  # GL excludes the endpoints
        assert np.all(r.weights > 0)
        assert np.max(np.abs(r.nodes + r.nodes[::-1])) < 1e-14
        assert np.max(np.abs(r.weights - r.weights[::-1])) < 1e-14
        assert abs(np.sum(r.weights) - 2.0) < 1e-13
        assert monomial_error(r, 2 * n - 1) < 1e-12

    @pytest.mark.parametrize("n", range(2, 21))
    def test_newton_residual(self, n):
        p, _ = legendre_and_derivative(n, gl_rule(n).nodes)
        assert np.max(np.abs(p)) <= 1e-13


class TestGaussLobatto:
    def test_two_point(self):
        r = gll_rule(2)
        assert r.nodes.tolist() == [-1.0, 1.0]
        assert r.weights.tolist() == [1.0, 1.0]

    def test_three_point(self):
        r = gll_rule(3)
        np.testing.assert_allclose(r.nodes, [-1.0, 0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(r.weights, [1 / 3, 4 / 3, 1 / 3], atol=1e-14)
        assert monomial_error(r, 3) < 1e-14

    def test_weight_sum(self):
        assert abs(np.sum(gll_rule(4).weights) - 2.0) < 1e-13

    def test_rejects_bad_count(self):
        with pytest.raises(ValueError):
            gll_rule(1)

    @pytest.mark.parametrize("n", range(2, 21))
    def test_invariants(self, n):
        r = gll_rule(n)
        assert r.nodes[0] == -1.0 and r.nodes[-1] == 1.0
        assert np.all(np.diff(r.nodes) > 0)
        assert np.all(r.weights > 0)
        assert np.max(np.abs(r.nodes + r.nodes[::-1])) < 1e-14
        assert abs(np.sum(r.weights) - 2.0) < 1e-13
        assert monomial_error(r, 2 * n - 3) < 1e-12


class TestLegendre:
    def test_values_at_zero(self):
        assert legendre_and_derivative(2, 0.0) == (-0.5, 0.0)
        p, dp = legendre_and_derivative(1, 0.3)
        assert (p, dp) == (0.3, 1.0)

    def test_endpoint(self):
        p, dp = legendre_and_derivative(5, 1.0)
        assert p == 1.0
        assert dp == 15.0  # n(n+1)/2

    def test_derivative_vs_finite_difference(self):
        h = 1e-6
        for n in (3, 7, 12):
            for x in np.linspace(-0.9, 0.9, 7):
                _, dp = legendre_and_derivative(n, x)
                pp, _ = legendre_and_derivative(n, x + h)
                pm, _ = legendre_and_derivative(n, x - h)
                assert abs(dp - (pp - pm) / (2 * h)) < 1e-6 * max(1.0, abs(dp))

    def test_rejects_far_outside(self):
        with pytest.raises(ValueError):
            legendre_and_derivative(3, 1.5)


class TestLagrange:
    def test_cardinality(self):
        nodes = gll_rule(6).nodes
        for i in range(6):
            for j in range(6):
                assert lagrange_eval(nodes, i, nodes[j]) == (1.0 if i == j else 0.0)

    def test_partition_of_unity(self, rng):
        nodes = gll_rule(8).nodes
        for x in rng.uniform(-1, 1, 10):
            assert abs(sum(lagrange_eval(nodes, i, x) for i in range(8)) - 1) < 1e-13

    @pytest.mark.parametrize("degree", [1, 3, 7, 11, 15])
    def test_derivative_vs_finite_difference(self, degree, rng):
        nodes = gll_rule(degree + 1).nodes
        h = 1e-6
        for x in rng.uniform(-0.98, 0.98, 8):
            for i in range(degree + 1):
                fd = (lagrange_eval(nodes, i, x + h)
                      - lagrange_eval(nodes, i, x - h)) / (2 * h)
                d = lagrange_deriv(nodes, i, x)
                assert abs(d - fd) < 1e-6 * max(1.0, abs(fd))

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(ValueError):
            lagrange_eval([0.0, 0.0, 1.0], 0, 0.5)
