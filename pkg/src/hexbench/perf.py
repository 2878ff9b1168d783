"""Traffic accounting, FLOP model, bandwidth calibration and rooflines."""

import time
from dataclasses import dataclass, field

import numpy as np

from .mesh import build_cube_mesh
from .operators import BENCHMARKS, BP1, BP35, BP3, AccessCounters, FieldVector, \
    apply_operator, make_operator

DEFAULT_PEAK_BANDWIDTH = 549e9  # bytes/s, device used for the reference numbers

# shared-bandwidth ansatz defaults for a representative accelerator
DEFAULT_SM_COUNT = 56
DEFAULT_SIMD_WIDTH = 32
DEFAULT_WORD_BYTES = 4
DEFAULT_CLOCK_GHZ = 1.328


@dataclass(frozen=True)
class TrafficModel:
    """Minimum per-element double counts moved to/from main memory."""

    bp: str
    degree: int
    n_el: int
    reads_doubles: int
    writes_doubles: int

    @property
    def total_doubles(self):
        return self.reads_doubles + self.writes_doubles

    @property
    def bytes_per_element(self):
        return 8 * self.total_doubles

    @property
    def copy_equivalent_bytes(self):
        # the memory bus moves data both ways, so a copy of T/2 doubles
        # exercises the same total traffic
        return 8 * self.n_el * self.total_doubles // 2


@dataclass(frozen=True)
class BandwidthCalibration:
    bytes_transferred: int
    trial_times: list
    mean_bandwidth: float
    theoretical_peak: float = DEFAULT_PEAK_BANDWIDTH


@dataclass(frozen=True)
class RooflinePoint:
    degree: int
    flops: int
    bytes_moved: int
    r_global: float
    r_shared: float | None = None

    @property
    def bound(self):
        if self.r_shared is None:
            return self.r_global
        return min(self.r_global, self.r_shared)


@dataclass(frozen=True)
class RooflineSeries:
    bp: str
    variant: str
    n_el: int
    bandwidth: float
    shared_bandwidth: float | None
    points: list = field(default_factory=list)


def traffic(bp, degree, n_el=1):
    """Per-element main-memory double counts for one benchmark."""
    if bp not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {bp!r}")
    if not 1 <= degree <= 15:
        raise ValueError("degree must be in 1..15")
    n_p = (degree + 1) ** 3
    n_p_gl = (degree + 2) ** 3
    if bp == BP1:
        reads = n_p + n_p_gl
    elif bp == BP35:
        reads = 8 * n_p
    else:
        reads = n_p + 7 * n_p_gl
    return TrafficModel(bp, degree, n_el, reads, n_p)


def flop_model(bp, variant, degree):
    """Closed-form FLOPs per element; must equal the instrumented counter.

    All variants execute the same arithmetic, so the count is independent
    of the variant (it is accepted only to mirror the counter interface).

    Conventions: multiply-add = 2 FLOPs, pointwise scale = 1, the metric
    chain rule = 15 per point, lambda mass term plus combining the three
    transpose sums = 5 per point.
    """
    if bp not in BENCHMARKS:
        raise ValueError(f"unknown benchmark {bp!r}")
    if variant not in ("baseline", "fused", "symfused"):
        raise ValueError(f"unknown variant {variant!r}")
    n = degree + 1
    m = degree + 2
    interp = 2 * (m * n**3 + m**2 * n**2 + m**3 * n)
    if bp == BP1:
        return 2 * interp + m**3
    if bp == BP35:
        return 12 * n**4 + 20 * n**3
    return 2 * interp + 12 * m**4 + 20 * m**3


def measure_stream_bandwidth(nbytes, trials=10):
    """Calibrate streaming bandwidth with a host memory-to-memory copy.

    One untimed warm-up pass precedes the timed trials; the reported mean
    is the average of the per-trial bytes/second figures.
    """
    if nbytes < 1 << 20:
        raise ValueError("use at least 1 MiB for a meaningful measurement")
    if trials < 3:
        raise ValueError("need at least 3 trials")
    count = nbytes // 8
    try:
        src = np.random.default_rng(0).standard_normal(count)
        dst = np.empty_like(src)
    except MemoryError as exc:
        raise MemoryError("could not allocate calibration buffers") from exc
    np.copyto(dst, src)  # warm-up, first-touch
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        np.copyto(dst, src)
        times.append(time.perf_counter() - t0)
    rates = [8 * count / t for t in times]
    return BandwidthCalibration(8 * count, times, float(np.mean(rates)))


def roofline_global(b_gl, flops, d_r, d_w):
    """Bandwidth-limited FLOPS/s bound from main-memory traffic."""
    if b_gl <= 0 or flops <= 0:
        raise ValueError("bandwidth and FLOPs must be positive")
    if d_r + d_w <= 0:
        raise ValueError("byte traffic must be positive")
    return b_gl * flops / (d_r + d_w)


def shared_bandwidth_ansatz(sm_count=DEFAULT_SM_COUNT, simd_width=DEFAULT_SIMD_WIDTH,
                            word_bytes=DEFAULT_WORD_BYTES, clock_ghz=DEFAULT_CLOCK_GHZ):
    """Scratch-memory bandwidth estimate: #SMs x SIMD width x word x clock."""
    if min(sm_count, simd_width, word_bytes, clock_ghz) <= 0:
        raise ValueError("all ansatz inputs must be positive")
    return sm_count * simd_width * word_bytes * clock_ghz * 1e9


def roofline_shared(b_sh, flops, s_r, s_w):
    """Scratch-bandwidth-limited FLOPS/s bound."""
    if b_sh <= 0 or flops <= 0:
        raise ValueError("bandwidth and FLOPs must be positive")
    if s_r + s_w <= 0:
        raise ValueError("scratch traffic must be positive")
    return b_sh * flops / (s_r + s_w)


def scratch_traffic(bp, variant, degree):
    """Instrumented per-element scratch bytes (reads, writes) for one apply."""
    mesh = build_cube_mesh(1, 2.0)
    op = make_operator(bp, degree, mesh, lam=1.0, variant=variant)
    c = AccessCounters()
    apply_operator(op, FieldVector.constant(1, op.n_p), c)
    return c.scratch_reads, c.scratch_writes


def roofline_series(bp, degrees, n_el, b_gl, variant="fused", b_sh=None):
    """Model series across polynomial degrees for one benchmark.

    The shared roofline is attached for the interpolation-bearing
    benchmarks only (it depends on the kernel, not just the problem).
    """
    with_shared = b_sh is not None and bp != BP35
    points = []
    for degree in degrees:
        t = traffic(bp, degree, n_el)
        flops = flop_model(bp, variant, degree) * n_el
        nbytes = t.bytes_per_element * n_el
        r_gl = roofline_global(b_gl, flops, 8 * t.reads_doubles * n_el,
                               8 * t.writes_doubles * n_el)
        r_sh = None
        if with_shared:
            s_r, s_w = scratch_traffic(bp, variant, degree)
            r_sh = roofline_shared(b_sh, flop_model(bp, variant, degree), s_r, s_w)
        points.append(RooflinePoint(degree, flops, nbytes, r_gl, r_sh))
    return RooflineSeries(bp, variant, n_el, b_gl,
                          b_sh if with_shared else None, points)
