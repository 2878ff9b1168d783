"""Build roofline bounds from the traffic model and a bandwidth number.

A roofline bound is bandwidth times arithmetic intensity. The global bound
uses main-memory bandwidth against the minimum-traffic byte counts; the
shared bound uses a scratch-bandwidth ansatz (units x lanes x word size x
clock) against the instrumented scratch traffic. The composite bound is the
smaller of the two. The collocation benchmark keeps everything in registers
conceptually, so it only gets a global bound.

Run with: python3 demos/roofline_study.py
"""

from hexbench import perf
from hexbench.operators import BENCHMARKS, BP35

B_GL = 549e9  # a representative device main-memory bandwidth
B_SH = perf.shared_bandwidth_ansatz()  # 56 units, 32 lanes, 4 B, 1.328 GHz
print(f"global bandwidth {B_GL / 1e9:.0f} GB/s, "
      f"scratch ansatz {B_SH / 1e12:.4f} TB/s\n")

for bp in BENCHMARKS:
    series = perf.roofline_series(bp, range(1, 16), 512, B_GL, b_sh=B_SH)
    print(f"{bp} (GFLOPS/s bounds, 512 elements)")
    header = f"{'N':>3} {'R_global':>10}"
    if bp != BP35:
        header += f" {'R_shared':>10} {'bound':>10}"
    print(header)
    for pt in series.points:
        line = f"{pt.degree:>3} {pt.r_global / 1e9:>10.1f}"
        if pt.r_shared is not None:
            line += f" {pt.r_shared / 1e9:>10.1f} {pt.bound / 1e9:>10.1f}"
        print(line)
    print()

# A host-side streaming measurement gives a calibrated bandwidth for the
# machine this script actually runs on.
cal = perf.measure_stream_bandwidth(1 << 26, trials=5)
print(f"measured streaming bandwidth: {cal.mean_bandwidth / 1e9:.1f} GB/s "
      f"over {len(cal.trial_times)} trials of {cal.bytes_transferred >> 20} MiB")
