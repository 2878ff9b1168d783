"""Dense elemental matrices assembled straight from the quadrature sums.

These assemblies deliberately avoid sum factorization: every 3D basis
function is tabulated at every 3D quadrature point from 1D Lagrange
evaluations, and the matrices are the literal quadrature sums. They serve
as the correctness oracle for the matrix-free operators.
"""

from dataclasses import dataclass, field

import numpy as np

from .mesh import trilinear_jacobian
from .quadrature import gl_rule, gll_rule, lagrange_deriv, lagrange_eval
from .reference_ops import diff_matrix_gl, interp_matrix

MAX_ORACLE_DEGREE = 4


@dataclass(frozen=True)
class DenseElementMatrix:
    bp: str
    degree: int
    entries: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.entries.shape[0]


def _check_oracle_degree(n_deg):
    if not 1 <= n_deg <= MAX_ORACLE_DEGREE:
        raise ValueError(f"oracle degree must be in 1..{MAX_ORACLE_DEGREE}")


def _basis_tab(basis_nodes, quad_nodes):
    """Values and derivatives of each 1D cardinal polynomial at each point."""
    val = np.array([[lagrange_eval(basis_nodes, i, x) for i in range(len(basis_nodes))]
                    for x in quad_nodes])
    der = np.array([[lagrange_deriv(basis_nodes, i, x) for i in range(len(basis_nodes))]
                    for x in quad_nodes])
    return val, der


def _tabulate_3d(basis_nodes, quad_nodes):
    """Tabulate l_ijk and its gradient at every tensor quadrature point.

    Returns (L, Gr, Gs, Gt), each (P, n_basis**3); point index runs (k, j, i)
    C-order, basis index likewise.
    """
    val, der = _basis_tab(basis_nodes, quad_nodes)
    # l_ijk(r_a, s_b, t_c) = l_i(r_a) l_j(s_b) l_k(t_c); point (c,b,a)->(k,j,i)
    l3 = np.einsum("ck,bj,ai->cbakji", val, val, val)
    gr = np.einsum("ck,bj,ai->cbakji", val, val, der)
    gs = np.einsum("ck,bj,ai->cbakji", val, der, val)
    gt = np.einsum("ck,bj,ai->cbakji", der, val, val)
    p = len(quad_nodes) ** 3
    nb = len(basis_nodes) ** 3
    return (l3.reshape(p, nb), gr.reshape(p, nb),
            gs.reshape(p, nb), gt.reshape(p, nb))


def _quad_geometry(element, rule):
    """Per-point weighted |J| and weighted metric det(A) inv(A) inv(A)^T."""
    nodes, w = rule.nodes, rule.weights
    m = rule.n
    wdet = np.empty(m ** 3)
    metric = np.empty((m ** 3, 3, 3))
    p = 0
    for k in range(m):
        for j in range(m):
            for i in range(m):
                a, det = trilinear_jacobian(element, nodes[i], nodes[j], nodes[k])
                inv = np.linalg.inv(a)
                w3 = w[i] * w[j] * w[k]
                wdet[p] = w3 * det
                metric[p] = w3 * det * (inv @ inv.T)
                p += 1
    return wdet, metric


def assemble_mass(element, n_deg):
    """Mass matrix by the full GL quadrature sum over all basis pairs."""
    _check_oracle_degree(n_deg)
    gll = gll_rule(n_deg + 1)
    gl = gl_rule(n_deg + 2)
    l3, _, _, _ = _tabulate_3d(gll.nodes, gl.nodes)
    wdet, _ = _quad_geometry(element, gl)
    mat = np.einsum("p,pi,pj->ij", wdet, l3, l3)
    return DenseElementMatrix("BP1.0", n_deg, mat)


def assemble_stiffness_collocation(element, n_deg, lam=0.0):
    """Screened Poisson matrix with GLL collocation quadrature (BP3.5)."""
    _check_oracle_degree(n_deg)
    gll = gll_rule(n_deg + 1)
    _, gr, gs, gt = _tabulate_3d(gll.nodes, gll.nodes)
    wdet, metric = _quad_geometry(element, gll)
    grad = np.stack([gr, gs, gt])  # (3, P, nb)
    mat = np.einsum("pxy,xpi,ypj->ij", metric, grad, grad)
    # collocation mass is diagonal: basis values at the nodes are deltas
    mat += lam * np.diag(wdet)
    return DenseElementMatrix("BP3.5", n_deg, mat)


def assemble_stiffness_full_quadrature(element, n_deg, lam=0.0, cross_check=True):
    """Screened Poisson matrix with full GL quadrature (BP3.0).

    Assembled two independent ways: the direct quadrature sum with GLL basis
    gradients tabulated at the GL points, and the explicit dense product of
    interpolation / GL differentiation operators. The two must agree.
    """
    _check_oracle_degree(n_deg)
    gll = gll_rule(n_deg + 1)
    gl = gl_rule(n_deg + 2)
    l3, gr, gs, gt = _tabulate_3d(gll.nodes, gl.nodes)
    wdet, metric = _quad_geometry(element, gl)
    grad = np.stack([gr, gs, gt])
    mat = np.einsum("pxy,xpi,ypj->ij", metric, grad, grad)
    mat += lam * np.einsum("p,pi,pj->ij", wdet, l3, l3)

    if cross_check:
        i1 = interp_matrix(n_deg).entries
        d1 = diff_matrix_gl(n_deg).entries
        big_i = np.kron(i1, np.kron(i1, i1))
        eye = np.eye(n_deg + 2)
        dr = np.kron(eye, np.kron(eye, d1))
        ds = np.kron(eye, np.kron(d1, eye))
        dt = np.kron(d1, np.kron(eye, eye))
        gmat = np.zeros((3 * wdet.size, 3 * wdet.size))
        for x in range(3):
            for y in range(3):
                rows = slice(x * wdet.size, (x + 1) * wdet.size)
                cols = slice(y * wdet.size, (y + 1) * wdet.size)
                gmat[rows, cols] = np.diag(metric[:, x, y])
        dstack = np.vstack([dr @ big_i, ds @ big_i, dt @ big_i])
        alt = dstack.T @ gmat @ dstack + lam * big_i.T @ np.diag(wdet) @ big_i
        if np.max(np.abs(mat - alt)) > 1e-11 * max(1.0, np.max(np.abs(mat))):
            raise AssertionError("dense assembly routes disagree")
    return DenseElementMatrix("BP3.0", n_deg, mat)


def dense_apply(mat, q_e):
    return mat.entries @ np.asarray(q_e, dtype=float).ravel()
