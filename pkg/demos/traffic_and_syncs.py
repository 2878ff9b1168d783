"""Compare the instrumented memory traffic of the kernel schedules.

All three schedules compute bit-identical results; they differ only in
where intermediate tensors live. The baseline schedule round-trips every
intermediate through main memory and synchronizes per 2D slice. The fused
schedule keeps intermediates in scratch so its main-memory traffic drops to
the provable minimum: the input field, the geometric factors and the output.
The symfused schedule additionally halves the loads of the interpolation
matrix by exploiting its centro-symmetry.

Run with: python3 demos/traffic_and_syncs.py
"""

from hexbench import perf
from hexbench.mesh import build_cube_mesh
from hexbench.operators import BP1, AccessCounters, FieldVector, \
    apply_operator, make_operator

mesh = build_cube_mesh(1, 2.0)
print(f"{'N':>2} {'variant':>9} {'global B':>10} {'scratch B':>10} "
      f"{'mat B':>8} {'syncs':>5}")
for deg in (3, 7, 12):
    q = FieldVector.constant(1, (deg + 1) ** 3)
    for variant in ("baseline", "fused", "symfused"):
        c = AccessCounters()
        apply_operator(make_operator(BP1, deg, mesh, variant=variant), q, c)
        print(f"{deg:>2} {variant:>9} {c.global_reads + c.global_writes:>10} "
              f"{c.scratch_reads + c.scratch_writes:>10} "
              f"{c.interp_matrix_reads:>8} {c.syncs:>5}")

# The fused numbers reproduce the minimum-traffic table exactly:
# 8 bytes times (reads + writes) doubles per element.
print("\nminimum-traffic model (doubles per element):")
for deg in (3, 7, 12):
    t = perf.traffic(BP1, deg)
    print(f"  N={deg:2d}: R={t.reads_doubles} W={t.writes_doubles} "
          f"-> {t.bytes_per_element} bytes")

# The flop count is schedule-independent; arithmetic intensity grows with N,
# which is why higher orders are less bandwidth-bound.
print("\narithmetic intensity (flops per main-memory byte, fused):")
for deg in (1, 3, 7, 12, 15):
    f = perf.flop_model(BP1, "fused", deg)
    b = perf.traffic(BP1, deg).bytes_per_element
    print(f"  N={deg:2d}: {f / b:6.2f}")
