"""Check the matrix-free operators against dense assembled matrices.

The matrix-free path never forms an element matrix; it interpolates,
differentiates and combines with precomputed geometric factors. The dense
path tabulates every basis function at every quadrature point and sums the
bilinear form directly. Agreement between the two on randomly perturbed
geometry is the core correctness argument.

Run with: python3 demos/operator_verification.py
"""

import numpy as np

from hexbench import dense
from hexbench.mesh import build_cube_mesh, perturb_mesh
from hexbench.operators import BENCHMARKS, BP1, BP35, FieldVector, \
    apply_operator, make_operator

rng = np.random.default_rng(0)
mesh = perturb_mesh(build_cube_mesh(2, 2.0), seed=3)
lam = 0.8

for bp in BENCHMARKS:
    for deg in (1, 2, 3):
        op = make_operator(bp, deg, mesh, lam=lam)
        q = FieldVector(mesh.n_el, op.n_p,
                        rng.standard_normal(mesh.n_el * op.n_p))
        out = apply_operator(op, q)
        worst = 0.0
        for e in range(mesh.n_el):
            if bp == BP1:
                mat = dense.assemble_mass(mesh.vertices[e], deg)
            elif bp == BP35:
                mat = dense.assemble_stiffness_collocation(
                    mesh.vertices[e], deg, lam)
            else:
                mat = dense.assemble_stiffness_full_quadrature(
                    mesh.vertices[e], deg, lam)
            ref = dense.dense_apply(mat, q.data[e])
            err = np.max(np.abs(out.data[e] - ref))
            worst = max(worst, err / max(1.0, np.max(np.abs(ref))))
        print(f"{bp} N={deg}: matrix-free vs dense relative error {worst:.2e}")

# Two structural properties that hold for any geometry: the mass action on
# a constant field recovers the mesh volume, and the pure stiffness part
# annihilates constants.
op = make_operator(BP1, 3, mesh)
ones = FieldVector.constant(mesh.n_el, op.n_p)
print(f"\nvolume from mass action: {apply_operator(op, ones).flat().sum():.12f}")

op0 = make_operator(BP35, 3, mesh, lam=0.0)
ones = FieldVector.constant(mesh.n_el, op0.n_p)
print("stiffness on constants:",
      f"{np.max(np.abs(apply_operator(op0, ones).flat())):.2e}")
