"""1D interpolation/differentiation matrices and the tensor-contraction primitive.

Degree-N elements interpolate on N+1 GLL nodes; the de-aliased quadrature
lives on N+2 GL nodes. All operator matrices are small dense arrays.
"""

from dataclasses import dataclass, field

import numpy as np

from .quadrature import gl_rule, gll_rule, lagrange_deriv, lagrange_eval

MAX_DEGREE = 15


@dataclass(frozen=True)
class OperatorMatrix:
    kind: str  # "Interp", "DiffGLL", "DiffGL"
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=float))
        self.entries.setflags(write=False)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]


def _check_degree(n_deg):
    if not 1 <= n_deg <= MAX_DEGREE:
        raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {n_deg}")


def interp_matrix(n_deg):
    """(N+2) x (N+1) matrix of GLL Lagrange basis values at GL nodes.

    Centro-symmetric: entries[a, i] == entries[rows-1-a, cols-1-i], since
    both node families are symmetric about the origin.
    """
    _check_degree(n_deg)
    gll = gll_rule(n_deg + 1).nodes
    gl = gl_rule(n_deg + 2).nodes
    mat = np.array([[lagrange_eval(gll, i, a) for i in range(len(gll))] for a in gl])
    return OperatorMatrix("Interp", mat)


def diff_matrix_gll(n_deg):
    """(N+1) x (N+1) collocation differentiation matrix on the GLL nodes."""
    _check_degree(n_deg)
    gll = gll_rule(n_deg + 1).nodes
    mat = np.array([[lagrange_deriv(gll, i, a) for i in range(len(gll))] for a in gll])
    return OperatorMatrix("DiffGLL", mat)


def diff_matrix_gl(n_deg):
    """(N+2) x (N+2) collocation differentiation matrix on the GL nodes."""
    _check_degree(n_deg)
    gl = gl_rule(n_deg + 2).nodes
    mat = np.array([[lagrange_deriv(gl, i, a) for i in range(len(gl))] for a in gl])
    return OperatorMatrix("DiffGL", mat)


def contract_dim(op, tensor, axis):
    """Contract a 3D tensor with an operator matrix along one axis.

    out[.., a, ..] = sum_b op[a, b] * tensor[.., b, ..], with the other two
    axes untouched. Accepts an OperatorMatrix or a plain 2D array.
    """
    mat = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op, dtype=float)
    tensor = np.asarray(tensor, dtype=float)
    if tensor.ndim != 3:
        raise ValueError("contract_dim expects a 3D tensor")
    if axis not in (0, 1, 2):
        raise ValueError("axis must be 0, 1 or 2")
    if tensor.shape[axis] != mat.shape[1]:
        raise ValueError(
            f"extent {tensor.shape[axis]} along axis {axis} does not match "
            f"matrix columns {mat.shape[1]}"
        )
    return np.moveaxis(np.tensordot(mat, tensor, axes=(1, axis)), 0, axis)
