"""Matrix-free benchmark operators BP1.0, BP3.5 and BP3.0.

Each operator is applied element by element as a sequence of 1D tensor
contractions. Three instrumentable variants model different intermediate
storage strategies:

  baseline  - every intermediate tensor round-trips through main (global)
              memory between contractions, and barriers are paid per slice;
  fused     - intermediates stay in a per-element scratch buffer, global
              traffic is the minimal input/factor/output set, one barrier
              per contraction boundary;
  symfused  - like fused, but each centro-symmetric pair of interpolation
              matrix entries is loaded from scratch once and used twice.

All variants execute identical floating point arithmetic; only the byte,
barrier and load counters differ.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .mesh import geometric_factors
from .quadrature import gl_rule, gll_rule
from .reference_ops import contract_dim, diff_matrix_gl, diff_matrix_gll, interp_matrix

DOUBLE = 8  # bytes

BP1 = "BP1.0"
BP35 = "BP3.5"
BP3 = "BP3.0"
BENCHMARKS = (BP1, BP35, BP3)
VARIANTS = ("baseline", "fused", "symfused")


class UnsupportedVariantError(ValueError):
    """Raised when a variant is requested for a benchmark that lacks it."""


@dataclass
class AccessCounters:
    """Byte/FLOP/barrier accounting for one or more operator applications.

    global_* and scratch_* are byte counters; interp_matrix_reads is the
    subset of scratch_reads attributable to interpolation-matrix loads.
    """

    global_reads: int = 0
    global_writes: int = 0
    scratch_reads: int = 0
    scratch_writes: int = 0
    interp_matrix_reads: int = 0
    flops: int = 0
    syncs: int = 0

    def merge(self, other):
        self.global_reads += other.global_reads
        self.global_writes += other.global_writes
        self.scratch_reads += other.scratch_reads
        self.scratch_writes += other.scratch_writes
        self.interp_matrix_reads += other.interp_matrix_reads
        self.flops += other.flops
        self.syncs += other.syncs


@dataclass(frozen=True)
class FieldVector:
    """Element-blocked coefficient vector, lexicographic (k, j, i) per element."""

    n_el: int
    n_p: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.size != self.n_el * self.n_p:
            raise ValueError("data length must be n_el * n_p")
        object.__setattr__(self, "data", data.reshape(self.n_el, self.n_p))

    @classmethod
    def constant(cls, n_el, n_p, value=1.0):
        return cls(n_el, n_p, np.full(n_el * n_p, float(value)))

    @classmethod
    def random(cls, n_el, n_p, seed=0):
        rng = np.random.default_rng(seed)
        return cls(n_el, n_p, rng.standard_normal(n_el * n_p))

    def flat(self):
        return self.data.ravel()


@dataclass(frozen=True)
class OperatorInstance:
    bp: str
    degree: int
    lam: float
    interp: object  # OperatorMatrix or None
    diff: object
    factors: object  # GeometricFactors
    variant: str
    n_el: int

    @property
    def n_q(self):
        return self.degree + 1

    @property
    def n_q_gl(self):
        return self.degree + 2

    @property
    def n_p(self):
        return self.n_q ** 3


def make_operator(bp, degree, mesh, lam=0.0, variant="fused"):
    """Assemble matrices and geometric factors for one benchmark operator."""
    if bp not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {bp!r}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "symfused" and bp == BP35:
        raise UnsupportedVariantError(
            "symfused exploits the interpolation matrix; BP3.5 has none"
        )
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if bp == BP1:
        interp = interp_matrix(degree)
        diff = None
        factors = geometric_factors(mesh, gl_rule(degree + 2))
    elif bp == BP35:
        interp = None
        diff = diff_matrix_gll(degree)
        factors = geometric_factors(mesh, gll_rule(degree + 1))
    else:
        interp = interp_matrix(degree)
        diff = diff_matrix_gl(degree)
        factors = geometric_factors(mesh, gl_rule(degree + 2))
    return OperatorInstance(bp, degree, float(lam), interp, diff, factors,
                            variant, mesh.n_el)


# ---------------------------------------------------------------------------
# counter charging
#
# Conventions (pinned; the closed forms in perf.flop_model must match):
#   contraction with K-term sums:    2 FLOPs per term per output point
#   pointwise Jacobian scale:        1 FLOP per point
#   chain rule (three rows):         15 FLOPs per point
#   lambda mass term plus combining
#   the three transpose sums:        5 FLOPs per point
# ---------------------------------------------------------------------------


def _charge_contract(c, variant, out_points, terms, mat_kind, in_global, out_global):
    c.flops += 2 * out_points * terms
    uses = out_points * terms
    loads = (uses + 1) // 2 if (mat_kind == "interp" and variant == "symfused") else uses
    c.scratch_reads += DOUBLE * loads
    if mat_kind == "interp":
        c.interp_matrix_reads += DOUBLE * loads
    if in_global:
        c.global_reads += DOUBLE * uses
    else:
        c.scratch_reads += DOUBLE * uses
    if out_global:
        c.global_writes += DOUBLE * out_points
    else:
        c.scratch_writes += DOUBLE * out_points


def _charge_pointwise(c, points, flops_per_point, tensor_reads,
                      factor_reads, writes, in_global, out_global):
    c.flops += flops_per_point * points
    c.global_reads += DOUBLE * factor_reads * points
    if in_global:
        c.global_reads += DOUBLE * tensor_reads * points
    else:
        c.scratch_reads += DOUBLE * tensor_reads * points
    if out_global:
        c.global_writes += DOUBLE * writes * points
    else:
        c.scratch_writes += DOUBLE * writes * points


def _charge_stage_boundaries(c, variant, boundaries, slices):
    if variant == "baseline":
        c.syncs += boundaries * slices + 1
    else:
        c.syncs += boundaries


def _charge_staging(c, variant, points):
    # fused kernels read the field once from global and park it in scratch
    if variant != "baseline":
        c.global_reads += DOUBLE * points
        c.scratch_writes += DOUBLE * points


# ---------------------------------------------------------------------------
# per-element kernels
# ---------------------------------------------------------------------------


def _interp_passes(op, q_e, c, in_global, out_global):
    """Algorithm order: contract the b, a, then c axis with the interp matrix."""
    interp = op.interp.entries
    n, m = op.n_q, op.n_q_gl
    gb = op.variant == "baseline"
    t = contract_dim(interp, q_e, 1)
    _charge_contract(c, op.variant, m * n * n, n, "interp", in_global, gb)
    t = contract_dim(interp, t, 2)
    _charge_contract(c, op.variant, m * m * n, n, "interp", gb, gb)
    t = contract_dim(interp, t, 0)
    _charge_contract(c, op.variant, m * m * m, n, "interp", gb, out_global)
    return t


def _project_passes(op, t_e, c, in_global, out_global):
    interp_t = op.interp.entries.T
    n, m = op.n_q, op.n_q_gl
    gb = op.variant == "baseline"
    t = contract_dim(interp_t, t_e, 1)
    _charge_contract(c, op.variant, m * n * m, m, "interp", in_global, gb)
    t = contract_dim(interp_t, t, 2)
    _charge_contract(c, op.variant, m * n * n, m, "interp", gb, gb)
    t = contract_dim(interp_t, t, 0)
    _charge_contract(c, op.variant, n * n * n, m, "interp", gb, out_global)
    return t


def _diff_chain_combine(op, t_e, extra_e, facs, c):
    """Differentiate, apply the metric chain rule, apply the transpose
    derivative and add the lambda mass term.

    t_e is the field at the quadrature points; extra_e is the field the
    lambda term multiplies (the same tensor for BP3.5 and BP3.0).
    """
    d = op.diff.entries
    m = t_e.shape[0]
    p = m * m * m
    gb = op.variant == "baseline"
    qr = contract_dim(d, t_e, 2)
    _charge_contract(c, op.variant, p, m, "diff", gb, gb)
    qs = contract_dim(d, t_e, 1)
    _charge_contract(c, op.variant, p, m, "diff", gb, gb)
    qt = contract_dim(d, t_e, 0)
    _charge_contract(c, op.variant, p, m, "diff", gb, gb)
    grr, grs, grt, gss, gst, gtt = facs[0:6]
    rqr = grr * qr + grs * qs + grt * qt
    rqs = grs * qr + gss * qs + gst * qt
    rqt = grt * qr + gst * qs + gtt * qt
    _charge_pointwise(c, p, 15, tensor_reads=3, factor_reads=6, writes=3,
                      in_global=gb, out_global=gb)
    out = op.lam * facs[6] * extra_e
    out = out + contract_dim(d.T, rqr, 2)
    _charge_contract(c, op.variant, p, m, "diff", gb, gb)
    out = out + contract_dim(d.T, rqs, 1)
    _charge_contract(c, op.variant, p, m, "diff", gb, gb)
    out = out + contract_dim(d.T, rqt, 0)
    _charge_contract(c, op.variant, p, m, "diff", gb, gb)
    # lambda term (2 FLOPs) plus the three-way combine (3 adds)
    _charge_pointwise(c, p, 5, tensor_reads=1, factor_reads=1, writes=0,
                      in_global=gb, out_global=gb)
    return out


def _apply_element(op, q_e, facs, c):
    n, m = op.n_q, op.n_q_gl
    gb = op.variant == "baseline"
    if op.bp == BP1:
        _charge_staging(c, op.variant, n ** 3)
        t = _interp_passes(op, q_e, c, in_global=gb, out_global=gb)
        t = facs[6] * t
        _charge_pointwise(c, m ** 3, 1, tensor_reads=1, factor_reads=1,
                          writes=1, in_global=gb, out_global=gb)
        out = _project_passes(op, t, c, in_global=gb, out_global=True)
        _charge_stage_boundaries(c, op.variant, 5, m)
    elif op.bp == BP35:
        _charge_staging(c, op.variant, n ** 3)
        out = _diff_chain_combine(op, q_e, q_e, facs, c)
        c.global_writes += DOUBLE * n ** 3
        _charge_stage_boundaries(c, op.variant, 1, n)
    else:
        _charge_staging(c, op.variant, n ** 3)
        t = _interp_passes(op, q_e, c, in_global=gb, out_global=gb)
        a = _diff_chain_combine(op, t, t, facs, c)
        out = _project_passes(op, a, c, in_global=gb, out_global=True)
        _charge_stage_boundaries(c, op.variant, 7, m)
    return out


def _apply_range(op, q, lo, hi):
    n = op.n_q
    c = AccessCounters()
    out = np.empty((hi - lo, op.n_p))
    for e in range(lo, hi):
        q_e = q.data[e].reshape(n, n, n)
        out[e - lo] = _apply_element(op, q_e, op.factors.element(e), c).ravel()
    return out, c


def apply_operator(op, q, counters=None, threads=1):
    """Apply a benchmark operator to a field vector.

    Element-parallel when threads > 1; per-element output slices are
    disjoint and counters merge in element order, so results and counter
    totals are independent of the thread count.
    """
    if counters is None:
        counters = AccessCounters()
    if q.n_el != op.n_el or q.n_p != op.n_p:
        raise ValueError("field vector shape does not match operator")
    if not np.all(np.isfinite(q.data)):
        raise ValueError("field vector contains non-finite values")
    n_el = op.n_el
    if threads <= 1 or n_el == 1:
        out, c = _apply_range(op, q, 0, n_el)
        counters.merge(c)
        return FieldVector(n_el, op.n_p, out.ravel())
    bounds = np.linspace(0, n_el, threads + 1).astype(int)
    chunks = [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        results = list(pool.map(lambda b: _apply_range(op, q, *b), chunks))
    out = np.concatenate([r[0] for r in results])
    for _, c in results:
        counters.merge(c)
    return FieldVector(n_el, op.n_p, out.ravel())


def apply_bp1(op, q, counters=None, threads=1):
    if op.bp != BP1:
        raise ValueError("operator is not BP1.0")
    return apply_operator(op, q, counters, threads)


def apply_bp35(op, q, counters=None, threads=1):
    if op.bp != BP35:
        raise ValueError("operator is not BP3.5")
    return apply_operator(op, q, counters, threads)


def apply_bp3(op, q, counters=None, threads=1):
    if op.bp != BP3:
        raise ValueError("operator is not BP3.0")
    return apply_operator(op, q, counters, threads)


def interpolate_to_gl(q_e, interp):
    """Pure interpolation of one element tensor from GLL to GL nodes."""
    t = contract_dim(interp, q_e, 1)
    t = contract_dim(interp, t, 2)
    return contract_dim(interp, t, 0)


def project_to_gll(t_e, interp):
    """Transpose interpolation of one element tensor from GL back to GLL."""
    mat = interp.entries.T if hasattr(interp, "entries") else np.asarray(interp).T
    t = contract_dim(mat, t_e, 1)
    t = contract_dim(mat, t, 2)
    return contract_dim(mat, t, 0)
