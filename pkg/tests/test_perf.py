import numpy as np
import pytest

from hexbench import perf
from hexbench.mesh import build_cube_mesh
from hexbench.operators import (
    BENCHMARKS,
    BP1,
    BP3,
    BP35,
    AccessCounters,
    FieldVector,
    apply_operator,
    make_operator,
)


def table1_doubles(bp, degree):
    """Independent evaluation of the minimum-traffic table."""
    n_p = (degree + 1) ** 3
    n_p_gl = (degree + 2) ** 3
    if bp == BP1:
        return n_p + n_p_gl, n_p
    if bp == BP35:
        return 8 * n_p, n_p
    return n_p + 7 * n_p_gl, n_p


class TestTraffic:
    def test_bp1_n1(self):
        t = perf.traffic(BP1, 1)
        assert (t.reads_doubles, t.writes_doubles, t.total_doubles) == (35, 8, 43)

    def test_bp35_n1(self):
        assert perf.traffic(BP35, 1).total_doubles == 72

    def test_bp3_n12(self):
        t = perf.traffic(BP3, 12, n_el=4096)
        assert t.total_doubles == 2 * 2197 + 7 * 2744 == 23602

    def test_copy_equivalent_bytes(self):
        t = perf.traffic(BP1, 1, n_el=512)
        assert t.copy_equivalent_bytes == 8 * 512 * 43 // 2

    @pytest.mark.parametrize("bp", BENCHMARKS)
    @pytest.mark.parametrize("degree", range(1, 16))
    def test_matches_independent_formula(self, bp, degree):
        t = perf.traffic(bp, degree)
        assert (t.reads_doubles, t.writes_doubles) == table1_doubles(bp, degree)

    def test_invalid(self):
        with pytest.raises(ValueError):
            perf.traffic("BP9", 1)
        with pytest.raises(ValueError):
            perf.traffic(BP1, 16)


class TestFlopModel:
    def test_variant_independent(self):
        for bp in BENCHMARKS:
            for deg in (1, 5, 10):
                assert (perf.flop_model(bp, "baseline", deg)
                        == perf.flop_model(bp, "fused", deg))

    def test_bp3_dominates(self):
        # BP3.0 is a strict superset: interpolation plus differentiation at
        # the denser point set
        for deg in range(1, 16):
            assert perf.flop_model(BP3, "fused", deg) > \
                perf.flop_model(BP1, "fused", deg) + \
                perf.flop_model(BP35, "fused", deg)

    def test_matches_instrumented_bp1_n1(self, perturbed_single):
        c = AccessCounters()
        op = make_operator(BP1, 1, perturbed_single)
        apply_operator(op, FieldVector.constant(1, 8), c)
        assert c.flops == perf.flop_model(BP1, "fused", 1)


class TestMinimalTrafficCrossCheck:
    @pytest.mark.parametrize("bp", BENCHMARKS)
    def test_fused_achieves_table_and_baseline_exceeds(self, bp):
        mesh = build_cube_mesh(1, 2.0)
        for degree in (1, 4, 9):
            reads, writes = table1_doubles(bp, degree)
            expected = 8 * (reads + writes)
            q = FieldVector.constant(1, (degree + 1) ** 3)
            cf = AccessCounters()
            apply_operator(make_operator(bp, degree, mesh, lam=1.0,
                                         variant="fused"), q, cf)
            assert cf.global_reads + cf.global_writes == expected
            cb = AccessCounters()
            apply_operator(make_operator(bp, degree, mesh, lam=1.0,
                                         variant="baseline"), q, cb)
            assert cb.global_reads + cb.global_writes > expected


class TestRooflines:
    def test_global_unit_case(self):
        assert perf.roofline_global(1e9, 1e9, 5e8, 5e8) == 1e9

    def test_global_linearity(self, rng):
        for _ in range(10):
            b, f, r, w = rng.uniform(1, 10, 4) * 1e9
            base = perf.roofline_global(b, f, r, w)
            assert abs(perf.roofline_global(b, 2 * f, r, w) - 2 * base) < 1e-6 * base
            assert abs(perf.roofline_global(3 * b, f, r, w) - 3 * base) < 1e-6 * base
            assert abs(perf.roofline_global(b, f, 2 * r, 2 * w) - base / 2) < 1e-6 * base

    def test_global_invalid(self):
        with pytest.raises(ValueError):
            perf.roofline_global(1e9, 1e9, 0, 0)

    def test_shared_ansatz_reference_value(self):
        b = perf.shared_bandwidth_ansatz(56, 32, 4, 1.328)
        assert abs(b - 9.5191e12) < 0.5e8  # 4 significant figures

    def test_shared_invalid(self):
        with pytest.raises(ValueError):
            perf.shared_bandwidth_ansatz(0, 32, 4, 1.0)

    def test_symfused_raises_shared_bound(self):
        for deg in (2, 6):
            f = perf.flop_model(BP1, "fused", deg)
            sr_f, sw_f = perf.scratch_traffic(BP1, "fused", deg)
            sr_s, sw_s = perf.scratch_traffic(BP1, "symfused", deg)
            b_sh = perf.shared_bandwidth_ansatz()
            assert perf.roofline_shared(b_sh, f, sr_s, sw_s) > \
                perf.roofline_shared(b_sh, f, sr_f, sw_f)

    def test_composite_bound_is_min(self):
        s = perf.roofline_series(BP1, [4], 8, 549e9,
                                 b_sh=perf.shared_bandwidth_ansatz())
        pt = s.points[0]
        assert pt.bound == min(pt.r_global, pt.r_shared)

    def test_bp35_series_has_no_shared(self):
        s = perf.roofline_series(BP35, [1, 2], 8, 549e9,
                                 b_sh=perf.shared_bandwidth_ansatz())
        assert s.shared_bandwidth is None
        assert all(p.r_shared is None for p in s.points)

    def test_bp1_series_monotone(self):
        s = perf.roofline_series(BP1, range(1, 16), 512, 549e9)
        values = [p.r_global for p in s.points]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestBandwidthCalibration:
    def test_measurement(self):
        cal = perf.measure_stream_bandwidth(1 << 22, trials=5)
        assert cal.mean_bandwidth > 0 and np.isfinite(cal.mean_bandwidth)
        assert len(cal.trial_times) == 5
        assert all(t > 0 for t in cal.trial_times)
        rates = [cal.bytes_transferred / t for t in cal.trial_times]
        assert min(rates) <= cal.mean_bandwidth <= max(rates)

    def test_size_sanity_band(self):
        a = perf.measure_stream_bandwidth(1 << 22, trials=5).mean_bandwidth
        b = perf.measure_stream_bandwidth(1 << 23, trials=5).mean_bandwidth
        assert 0.3 < b / a < 3.0  # loose band; shared machines are noisy

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            perf.measure_stream_bandwidth(1024)
        with pytest.raises(ValueError):
            perf.measure_stream_bandwidth(1 << 22, trials=2)
