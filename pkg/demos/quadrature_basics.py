"""Walk through the 1D building blocks: rules, interpolation, differentiation.

Run with: python3 demos/quadrature_basics.py
"""

import numpy as np

from hexbench.quadrature import check_rule, gl_rule, gll_rule, lagrange_eval
from hexbench.reference_ops import diff_matrix_gll, interp_matrix

# Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly,
# Gauss-Lobatto-Legendre rules only 2n-3, but GLL includes the endpoints
# which is what makes it the natural interpolation grid for elements.
for n in (3, 5, 9):
    gl = gl_rule(n)
    gll = gll_rule(n)
    print(f"n={n}: GL exactness residual  {check_rule(gl):.2e}")
    print(f"n={n}: GLL exactness residual {check_rule(gll):.2e}")
    print(f"       GL nodes  {np.array2string(gl.nodes, precision=4)}")
    print(f"       GLL nodes {np.array2string(gll.nodes, precision=4)}")

# The interpolation matrix maps nodal values on N+1 GLL points to values
# on N+2 GL points. Rows sum to one (constants are preserved) and the
# matrix is centro-symmetric, which the symfused variant exploits.
m = interp_matrix(3).entries
print("\ninterp rows sum to:", m.sum(axis=1))
print("centro-symmetry defect:", np.max(np.abs(m - m[::-1, ::-1])))

# The differentiation matrix applied to nodal samples of sin(x) should
# approximate cos(x) spectrally fast in the degree.
for deg in (4, 8, 12):
    nodes = gll_rule(deg + 1).nodes
    d = diff_matrix_gll(deg).entries
    err = np.max(np.abs(d @ np.sin(nodes) - np.cos(nodes)))
    print(f"degree {deg:2d}: derivative error on sin(x) = {err:.2e}")

# Barycentric evaluation reproduces the cardinal property exactly.
nodes = gll_rule(5).nodes
print("\ncardinal check:", [round(lagrange_eval(nodes, 2, x), 12) for x in nodes])
