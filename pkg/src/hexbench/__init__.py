"""Matrix-free high-order hexahedral FEM operators with an instrumented
data-movement cost model and roofline performance bounds."""

from .mesh import DegenerateGeometryError, GeometricFactors, HexMesh, \
    build_cube_mesh, geometric_factors, perturb_mesh, trilinear_jacobian
from .operators import BENCHMARKS, BP1, BP35, BP3, AccessCounters, FieldVector, \
    OperatorInstance, UnsupportedVariantError, apply_bp1, apply_bp3, apply_bp35, \
    apply_operator, interpolate_to_gl, make_operator, project_to_gll
from .perf import BandwidthCalibration, RooflineSeries, TrafficModel, flop_model, \
    measure_stream_bandwidth, roofline_global, roofline_series, roofline_shared, \
    shared_bandwidth_ansatz, traffic
from .quadrature import QuadratureRule, gl_rule, gll_rule, lagrange_deriv, \
    lagrange_eval, legendre_and_derivative
from .reference_ops import OperatorMatrix, contract_dim, diff_matrix_gl, \
    diff_matrix_gll, interp_matrix

__version__ = "0.1.0"
