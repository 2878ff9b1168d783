"""Gauss-Legendre / Gauss-Lobatto-Legendre rules and Lagrange basis evaluation."""

from dataclasses import dataclass, field

import numpy as np

_NEWTON_TOL = 1e-14
_NEWTON_MAXIT = 100


@dataclass(frozen=True)
class QuadratureRule:
    """A 1D quadrature rule on [-1, 1] with ascending nodes."""

    kind: str  # "GL" or "GLL"
    n: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)


def legendre_and_derivative(n, x):
    """Evaluate (P_n(x), P_n'(x)) by the three-term recurrence.

    Accepts scalar or array x; |x| may exceed 1 by a small roundoff margin.
    """
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise ValueError("x outside [-1, 1]")
    if n == 0:
        return np.ones_like(x)[()], np.zeros_like(x)[()]
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    # derivative from P_n and P_{n-1}; endpoints via the closed form n(n+1)/2
    dp = np.where(
        np.abs(1.0 - x * x) > 1e-13,
        n * (p_prev - x * p) / np.maximum(1.0 - x * x, 1e-300),
        np.sign(x) ** (n + 1) * n * (n + 1) / 2.0,
    )
    return p[()], dp[()]


def gl_rule(n):
    """n-point Gauss-Legendre rule: roots of P_n via Newton from Chebyshev guesses."""
    if n < 1:
        raise ValueError("GL rule needs n >= 1")
    if n == 1:
        return QuadratureRule("GL", 1, np.array([0.0]), np.array([2.0]))
    # Chebyshev-type initial guesses, descending, later sorted ascending
    x = np.cos(np.pi * (np.arange(n) + 0.75) / (n + 0.5))
    for _ in range(_NEWTON_MAXIT):
        p, dp = legendre_and_derivative(n, np.clip(x, -1.0, 1.0))
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    p, dp = legendre_and_derivative(n, x)
    if np.max(np.abs(p)) > 1e-13:
        raise RuntimeError("Newton iteration for GL nodes failed to converge")
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # enforce exact symmetry about the origin
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule("GL", n, x, w)


def gll_rule(n):
    """n-point Gauss-Lobatto-Legendre rule: +-1 plus the roots of P'_{n-1}."""
    if n < 2:
        raise ValueError("GLL rule needs n >= 2")
    if n == 2:
        return QuadratureRule("GLL", 2, np.array([-1.0, 1.0]), np.array([1.0, 1.0]))
    m = n - 1
    x = np.cos(np.pi * np.arange(n) / m)  # Chebyshev-Lobatto initial guess, descending
    for _ in range(_NEWTON_MAXIT):
        # Newton on P'_m; use the Legendre ODE (1-x^2)P'' = 2xP' - m(m+1)P
        # to get P'' without a separate recurrence.
        xi = x[1:-1]
        p, dp = legendre_and_derivative(m, xi)
        ddp = (2.0 * xi * dp - m * (m + 1) * p) / (1.0 - xi * xi)
        dx = dp / ddp
        x[1:-1] = xi - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    p, _ = legendre_and_derivative(m, x)
    w = 2.0 / (m * n * p * p)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x[0], x[-1] = -1.0, 1.0
    return QuadratureRule("GLL", n, x, w)


def _barycentric_weights(nodes):
    nodes = np.asarray(nodes, dtype=float)
    diff = np.subtract.outer(nodes, nodes)
    np.fill_diagonal(diff, 1.0)
    if np.min(np.abs(diff)) == 0.0:
        raise ValueError("duplicate interpolation nodes")
    return 1.0 / np.prod(diff, axis=1)


def lagrange_eval(nodes, i, x):
    """Value of the i-th Lagrange cardinal polynomial at x (barycentric form)."""
    nodes = np.asarray(nodes, dtype=float)
    if not 0 <= i < len(nodes):
        raise ValueError("basis index out of range")
    bw = _barycentric_weights(nodes)
    d = x - nodes
    hit = np.abs(d) < 1e-14
    if np.any(hit):
        return 1.0 if hit[i] else 0.0
    terms = bw / d
    return (terms[i]) / np.sum(terms)


def lagrange_deriv(nodes, i, x):
    """First derivative of the i-th Lagrange cardinal polynomial at x."""
    nodes = np.asarray(nodes, dtype=float)
    if not 0 <= i < len(nodes):
        raise ValueError("basis index out of range")
    bw = _barycentric_weights(nodes)
    d = x - nodes
    hit = np.where(np.abs(d) < 1e-14)[0]
    if hit.size:
        # at a node x_j use the classical differentiation-matrix entries
        j = int(hit[0])
        others = [k for k in range(len(nodes)) if k != j]
        if i == j:
            return float(-np.sum([bw[k] / bw[j] / (nodes[j] - nodes[k])
                                  for k in others]))
        return float(bw[i] / bw[j] / (nodes[j] - nodes[i]))
    # derivative of the second barycentric form:
    # l_i' = l_i * (S'/S * (-1) ... ) = l_i * (-1/(x-x_i) - S'/S)
    terms = bw / d
    s = np.sum(terms)
    sp = -np.sum(terms / d)
    li = terms[i] / s
    return float(li * (-1.0 / d[i] - sp / s))


def check_rule(rule, tol_sym=1e-14, tol_sum=1e-13, tol_exact=1e-12):
    """Validate symmetry, positivity, weight sum and monomial exactness.

    Returns the maximal exactness error; raises AssertionError on violation.
    """
    x, w = rule.nodes, rule.weights
    n = rule.n
    assert np.all(np.diff(x) > 0), "nodes not strictly increasing"
    assert np.all(w > 0), "weights not positive"
    assert np.all(np.abs(x) <= 1.0 + 1e-15)
    assert np.max(np.abs(x + x[::-1])) <= tol_sym
    assert np.max(np.abs(w - w[::-1])) <= tol_sym
    assert abs(np.sum(w) - 2.0) <= tol_sum
    degree = 2 * n - 1 if rule.kind == "GL" else 2 * n - 3
    err = 0.0
    for p in range(degree + 1):
        exact = 0.0 if p % 2 else 2.0 / (p + 1)
        err = max(err, abs(np.sum(w * x**p) - exact))
    assert err <= tol_exact, f"monomial exactness violated: {err:.3e}"
    return err
