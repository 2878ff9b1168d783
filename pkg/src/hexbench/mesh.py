"""Structured hexahedral cube meshes, trilinear maps and geometric factors."""

import itertools
from dataclasses import dataclass, field

import numpy as np

# reference corners in lexicographic (r, s, t) order
_CORNERS = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))

# factor slot order within the 7-wide geometric factor array
FACTOR_NAMES = ("Grr", "Grs", "Grt", "Gss", "Gst", "Gtt", "GwJ")


class DegenerateGeometryError(ValueError):
    """Raised when a trilinear element map folds over (non-positive Jacobian)."""


@dataclass(frozen=True)
class HexMesh:
    n_el: int
    vertices: np.ndarray = field(repr=False)  # (n_el, 8, 3), lexicographic corners
    extent: float

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))
        self.vertices.setflags(write=False)


@dataclass(frozen=True)
class GeometricFactors:
    point_set: str  # "GLL" or "GL"
    n_per_axis: int
    weights_1d: np.ndarray = field(repr=False)
    # (n_el, 7, m, m, m) in (k, j, i) point layout; slots per FACTOR_NAMES
    data: np.ndarray = field(repr=False)

    def element(self, e):
        return self.data[e]

    @property
    def gwj(self):
        return self.data[:, 6]


def build_cube_mesh(elements_per_side, extent):
    """Regular mesh of elements_per_side**3 congruent hexahedra tiling a cube."""
    if elements_per_side < 1:
        raise ValueError("elements_per_side must be >= 1")
    if extent <= 0:
        raise ValueError("extent must be positive")
    h = extent / elements_per_side
    cells = []
    for cx, cy, cz in itertools.product(range(elements_per_side), repeat=3):
        origin = np.array([cx, cy, cz], dtype=float) * h
        corners = origin + (_CORNERS + 1.0) * (h / 2.0)
        cells.append(corners)
    return HexMesh(len(cells), np.array(cells), float(extent))


def perturb_mesh(mesh, amplitude=0.15, seed=0):
    """Jiggle every element's corners independently (deterministic, seeded).

    Elements stop tiling the cube; the operators are element-local so the
    oracle comparisons remain valid. Amplitude is relative to element size.
    """
    rng = np.random.default_rng(seed)
    h = mesh.extent / round(mesh.n_el ** (1 / 3))
    verts = mesh.vertices + rng.uniform(-1, 1, mesh.vertices.shape) * amplitude * h / 2
    out = HexMesh(mesh.n_el, verts, mesh.extent)
    for e in range(out.n_el):
        for r, s, t in itertools.product((-0.9, 0.0, 0.9), repeat=3):
            trilinear_jacobian(out.vertices[e], r, s, t)  # raises if folded
    return out


def trilinear_jacobian(element, r, s, t):
    """Forward-map Jacobian A = d(x,y,z)/d(r,s,t) and its determinant."""
    element = np.asarray(element, dtype=float)
    rc, sc, tc = _CORNERS[:, 0], _CORNERS[:, 1], _CORNERS[:, 2]
    dphi_dr = rc * (1 + s * sc) * (1 + t * tc) / 8.0
    dphi_ds = (1 + r * rc) * sc * (1 + t * tc) / 8.0
    dphi_dt = (1 + r * rc) * (1 + s * sc) * tc / 8.0
    a = np.column_stack(
        [element.T @ dphi_dr, element.T @ dphi_ds, element.T @ dphi_dt]
    )
    det = float(np.linalg.det(a))
    if abs(det) <= 1e-14:
        raise DegenerateGeometryError("trilinear map is degenerate")
    return a, det


def trilinear_map(element, r, s, t):
    """Physical coordinates of a reference point under the trilinear map."""
    element = np.asarray(element, dtype=float)
    rc, sc, tc = _CORNERS[:, 0], _CORNERS[:, 1], _CORNERS[:, 2]
    phi = (1 + r * rc) * (1 + s * sc) * (1 + t * tc) / 8.0
    return element.T @ phi


def geometric_factors(mesh, rule):
    """Weighted metric entries and Jacobians at the tensor-product points.

    At each point: A = forward Jacobian, G = det(A) * inv(A) * inv(A).T, each
    stored entry is scaled by the tensor-product weight w_i w_j w_k, and
    GwJ = det(A) * w_i w_j w_k.
    """
    m = rule.n
    nodes, w = rule.nodes, rule.weights
    # point p = (k, j, i) in C order; r varies with i, s with j, t with k
    tt, ss, rr = np.meshgrid(nodes, nodes, nodes, indexing="ij")
    r, s, t = rr.ravel(), ss.ravel(), tt.ravel()
    rc, sc, tc = _CORNERS[:, 0], _CORNERS[:, 1], _CORNERS[:, 2]
    dphi = np.stack(
        [
            rc * (1 + np.outer(s, sc)) * (1 + np.outer(t, tc)) / 8.0,
            (1 + np.outer(r, rc)) * sc * (1 + np.outer(t, tc)) / 8.0,
            (1 + np.outer(r, rc)) * (1 + np.outer(s, sc)) * tc / 8.0,
        ],
        axis=2,
    )  # (P, 8, 3)
    w3 = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()

    data = np.empty((mesh.n_el, 7, m * m * m))
    for e in range(mesh.n_el):
        a = np.einsum("cx,pcb->pxb", mesh.vertices[e], dphi)  # (P, 3, 3)
        det = np.linalg.det(a)
        if np.any(det <= 1e-14):
            raise DegenerateGeometryError("non-positive Jacobian determinant")
        inv = np.linalg.inv(a)
        g = det[:, None, None] * np.einsum("pxb,pyb->pxy", inv, inv)
        data[e, 0] = w3 * g[:, 0, 0]
        data[e, 1] = w3 * g[:, 0, 1]
        data[e, 2] = w3 * g[:, 0, 2]
        data[e, 3] = w3 * g[:, 1, 1]
        data[e, 4] = w3 * g[:, 1, 2]
        data[e, 5] = w3 * g[:, 2, 2]
        data[e, 6] = w3 * det
    return GeometricFactors(rule.kind, m, w, data.reshape(mesh.n_el, 7, m, m, m))
