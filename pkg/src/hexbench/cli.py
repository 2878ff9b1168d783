"""Command-line front end: verify, bench, roofline and calibrate."""

import argparse
import csv
import json
import platform
import statistics
import sys
import time

import numpy as np

from . import dense, perf
from .mesh import build_cube_mesh, perturb_mesh
from .operators import BENCHMARKS, BP1, BP35, BP3, AccessCounters, FieldVector, \
    UnsupportedVariantError, apply_operator, make_operator
from .quadrature import check_rule, gl_rule, gll_rule

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_BP_FLAG = {"1.0": BP1, "3.5": BP35, "3.0": BP3}
_MESH_PRESETS = {"small": 8, "large": 16}

ORACLE_TOL = {BP1: 1e-12, BP35: 1e-11, BP3: 1e-10}


def _parse_degrees(text):
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--degrees expects N or A..B, got {text!r}")
    if not (1 <= lo <= hi <= 15):
        raise argparse.ArgumentTypeError("--degrees must lie within 1..15")
    return list(range(lo, hi + 1))


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hexbench",
        description="Matrix-free hexahedral operator benchmarks and rooflines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, degrees_default):
        p.add_argument("--bp", choices=["1.0", "3.5", "3.0", "all"], default="all")
        p.add_argument("--degrees", type=_parse_degrees,
                       default=_parse_degrees(degrees_default))
        group = p.add_mutually_exclusive_group()
        group.add_argument("--elements", type=int, default=None,
                           help="elements per cube side")
        group.add_argument("--mesh", choices=["small", "large"], default=None)
        p.add_argument("--variant", choices=["baseline", "fused", "symfused"],
                       default="fused")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_verify = sub.add_parser("verify", help="oracle equivalence and invariants")
    common(p_verify, "1..3")

    p_bench = sub.add_parser("bench", help="timed operator applications")
    common(p_bench, "1..7")
    p_bench.add_argument("--repeats", type=int, default=3)
    p_bench.add_argument("--bandwidth", type=float, default=None,
                         help="main-memory bandwidth in GB/s")
    p_bench.add_argument("--measure", action="store_true",
                         help="measure streaming bandwidth instead")

    p_roof = sub.add_parser("roofline", help="emit roofline model series")
    common(p_roof, "1..15")
    p_roof.add_argument("--bandwidth", type=float, default=None)
    p_roof.add_argument("--measure", action="store_true")

    p_cal = sub.add_parser("calibrate", help="streaming bandwidth calibration")
    p_cal.add_argument("--bytes", type=int, default=1 << 27)
    p_cal.add_argument("--repeats", type=int, default=10)
    p_cal.add_argument("--out", default=None)
    p_cal.add_argument("--format", choices=["json", "csv"], default="json")
    return parser


def _selected_bps(args):
    if args.bp == "all":
        return list(BENCHMARKS)
    return [_BP_FLAG[args.bp]]


def _elements_per_side(args, default=2):
    if args.mesh is not None:
        return _MESH_PRESETS[args.mesh]
    if args.elements is not None:
        if args.elements < 1:
            raise argparse.ArgumentTypeError("--elements must be >= 1")
        return args.elements
    return default


def _machine():
    return f"{platform.platform()} / {platform.processor() or 'unknown cpu'}"


def _emit(payload, args, csv_rows=None, csv_header=None):
    if args.format == "csv" and csv_rows is not None:
        out = sys.stdout if args.out is None else open(args.out, "w", newline="")
        try:
            writer = csv.writer(out)
            writer.writerow(csv_header)
            writer.writerows(csv_rows)
        finally:
            if args.out is not None:
                out.close()
    else:
        text = json.dumps(payload, indent=2)
        if args.out is None:
            print(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_checks(args):
    bps = _selected_bps(args)
    side = _elements_per_side(args, default=2)
    mesh = perturb_mesh(build_cube_mesh(side, 2.0), seed=args.seed)
    checks = []

    def record(name, err, tol):
        checks.append({"name": name, "max_error": float(err),
                       "tolerance": tol, "pass": bool(err <= tol)})

    for n in range(2, 13):
        record(f"quadrature/gl_exactness_n{n}", check_rule(gl_rule(n)), 1e-12)
        record(f"quadrature/gll_exactness_n{n}", check_rule(gll_rule(n)), 1e-12)

    rng = np.random.default_rng(args.seed)
    for bp in bps:
        for deg in args.degrees:
            op = make_operator(bp, deg, mesh, lam=args.lam, variant=args.variant)
            q = FieldVector(mesh.n_el, op.n_p,
                            rng.standard_normal(mesh.n_el * op.n_p))
            out = apply_operator(op, q, threads=args.threads)

            if deg <= dense.MAX_ORACLE_DEGREE:
                err = 0.0
                for e in range(mesh.n_el):
                    if bp == BP1:
                        mat = dense.assemble_mass(mesh.vertices[e], deg)
                    elif bp == BP35:
                        mat = dense.assemble_stiffness_collocation(
                            mesh.vertices[e], deg, args.lam)
                    else:
                        mat = dense.assemble_stiffness_full_quadrature(
                            mesh.vertices[e], deg, args.lam)
                    ref = dense.dense_apply(mat, q.data[e])
                    scale = max(1.0, float(np.max(np.abs(ref))))
                    err = max(err, float(np.max(np.abs(out.data[e] - ref))) / scale)
                record(f"{bp}/N{deg}/oracle_equivalence", err, ORACLE_TOL[bp])

            # adjoint symmetry on a random pair
            u = FieldVector(mesh.n_el, op.n_p,
                            rng.standard_normal(mesh.n_el * op.n_p))
            lhs = float(apply_operator(op, q).flat() @ u.flat())
            rhs = float(q.flat() @ apply_operator(op, u).flat())
            record(f"{bp}/N{deg}/adjoint_symmetry",
                   abs(lhs - rhs) / max(1.0, abs(lhs)), 1e-11)

            if bp in (BP35, BP3):
                op0 = make_operator(bp, deg, mesh, lam=0.0, variant=args.variant)
                ones = FieldVector.constant(mesh.n_el, op.n_p)
                record(f"{bp}/N{deg}/constant_null_space",
                       float(np.max(np.abs(apply_operator(op0, ones).flat()))),
                       1e-10)

            base = make_operator(bp, deg, mesh, lam=args.lam, variant="baseline")
            ref = apply_operator(base, q)
            scale = max(1.0, float(np.max(np.abs(ref.flat()))))
            record(f"{bp}/N{deg}/variant_vs_baseline",
                   float(np.max(np.abs(out.flat() - ref.flat()))) / scale, 1e-12)
    return checks


def cmd_verify(args):
    try:
        checks = _verify_checks(args)
    except UnsupportedVariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failures = [c for c in checks if not c["pass"]]
    payload = {
        "command": "verify",
        "config": {"bp": args.bp, "degrees": args.degrees,
                   "variant": args.variant, "lambda": args.lam,
                   "seed": args.seed, "threads": args.threads},
        "checks": checks,
        "failed": len(failures),
        "machine": _machine(),
    }
    rows = [(c["name"], c["max_error"], c["tolerance"], c["pass"]) for c in checks]
    _emit(payload, args, rows, ("check", "max_error", "tolerance", "pass"))
    for c in failures:
        print(f"FAIL {c['name']}: max error {c['max_error']:.3e} "
              f"> tolerance {c['tolerance']:.1e}", file=sys.stderr)
    return EXIT_VERIFY_FAILED if failures else EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def _bandwidth_from_args(args):
    if getattr(args, "measure", False):
        cal = perf.measure_stream_bandwidth(1 << 27)
        return cal.mean_bandwidth, cal
    if getattr(args, "bandwidth", None) is not None:
        return args.bandwidth * 1e9, None
    return perf.DEFAULT_PEAK_BANDWIDTH, None


def cmd_bench(args):
    bps = _selected_bps(args)
    side = _elements_per_side(args, default=_MESH_PRESETS["small"])
    mesh = build_cube_mesh(side, 2.0)
    b_gl, cal = _bandwidth_from_args(args)
    b_sh = perf.shared_bandwidth_ansatz()
    runs = []
    for bp in bps:
        for deg in args.degrees:
            try:
                op = make_operator(bp, deg, mesh, lam=args.lam,
                                   variant=args.variant)
            except UnsupportedVariantError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            rng = np.random.default_rng(args.seed)
            q = FieldVector(mesh.n_el, op.n_p,
                            rng.standard_normal(mesh.n_el * op.n_p))
            apply_operator(op, q, threads=args.threads)  # warm-up
            counters = AccessCounters()
            times = []
            for _ in range(args.repeats):
                c = AccessCounters()
                t0 = time.perf_counter()
                apply_operator(op, q, c, threads=args.threads)
                times.append(time.perf_counter() - t0)
                counters = c
            model = perf.traffic(bp, deg, mesh.n_el)
            flops = counters.flops
            median_t = statistics.median(times)
            entry = {
                "bp": bp, "degree": deg, "variant": args.variant,
                "elements": mesh.n_el,
                "wall_time_mean_s": float(np.mean(times)),
                "wall_time_median_s": median_t,
                "achieved_flops_per_s": flops / median_t,
                "flops": flops,
                "counted_global_bytes": counters.global_reads + counters.global_writes,
                "counted_scratch_bytes": counters.scratch_reads + counters.scratch_writes,
                "model_bytes": model.bytes_per_element * mesh.n_el,
                "syncs": counters.syncs,
                "bandwidth_bytes_per_s": b_gl,
                "r_global_flops_per_s": perf.roofline_global(
                    b_gl, flops,
                    8 * model.reads_doubles * mesh.n_el,
                    8 * model.writes_doubles * mesh.n_el),
            }
            if bp != BP35:
                entry["r_shared_flops_per_s"] = perf.roofline_shared(
                    b_sh, flops, counters.scratch_reads, counters.scratch_writes)
            runs.append(entry)
    payload = {
        "command": "bench",
        "config": {"bp": args.bp, "degrees": args.degrees, "elements": side,
                   "variant": args.variant, "lambda": args.lam,
                   "repeats": args.repeats, "threads": args.threads,
                   "seed": args.seed},
        "measured_bandwidth": None if cal is None else {
            "bytes": cal.bytes_transferred,
            "trial_times_s": cal.trial_times,
            "mean_bytes_per_s": cal.mean_bandwidth,
        },
        "runs": runs,
        "machine": _machine(),
    }
    header = ("bp", "degree", "variant", "elements", "wall_time_median_s",
              "achieved_flops_per_s", "flops", "counted_global_bytes",
              "model_bytes", "r_global_flops_per_s")
    rows = [tuple(r.get(k) for k in header) for r in runs]
    _emit(payload, args, rows, header)
    return EXIT_OK


# ---------------------------------------------------------------------------
# roofline
# ---------------------------------------------------------------------------


def cmd_roofline(args):
    bps = _selected_bps(args)
    side = _elements_per_side(args, default=_MESH_PRESETS["small"])
    n_el = side ** 3
    try:
        b_gl, cal = _bandwidth_from_args(args)
    except MemoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    b_sh = perf.shared_bandwidth_ansatz()
    for bp in bps:
        series = perf.roofline_series(bp, args.degrees, n_el, b_gl,
                                      variant=args.variant, b_sh=b_sh)
        with_shared = series.shared_bandwidth is not None
        suffix = bp.replace("BP", "bp").replace(".", "_")
        path = (f"{args.out}" if args.out and len(bps) == 1
                else f"roofline_{suffix}.csv" if args.out is None
                else f"{args.out}.{suffix}.csv")
        with open(path, "w", newline="") as fh:
            fh.write(f"# bp={bp} n_el={n_el} variant={series.variant} "
                     f"B_gl={b_gl:.6e}"
                     + (f" B_sh={b_sh:.6e}" if with_shared else "")
                     + (" measured" if cal is not None else "") + "\n")
            writer = csv.writer(fh)
            header = ["N", "F", "bytes", "R_global"]
            if with_shared:
                header.append("R_shared")
            writer.writerow(header)
            for pt in series.points:
                row = [pt.degree, pt.flops, pt.bytes_moved, f"{pt.r_global:.6e}"]
                if with_shared:
                    row.append(f"{pt.r_shared:.6e}")
                writer.writerow(row)
        print(f"wrote {path}")
    return EXIT_OK


def cmd_calibrate(args):
    try:
        cal = perf.measure_stream_bandwidth(args.bytes, trials=args.repeats)
    except (MemoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE if isinstance(exc, MemoryError) else EXIT_USAGE
    payload = {
        "command": "calibrate",
        "bytes": cal.bytes_transferred,
        "trial_times_s": cal.trial_times,
        "mean_bytes_per_s": cal.mean_bandwidth,
        "theoretical_peak_bytes_per_s": cal.theoretical_peak,
        "machine": _machine(),
    }
    rows = [(i, t, cal.bytes_transferred / t)
            for i, t in enumerate(cal.trial_times)]
    _emit(payload, args, rows, ("trial", "time_s", "bytes_per_s"))
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"verify": cmd_verify, "bench": cmd_bench,
                "roofline": cmd_roofline, "calibrate": cmd_calibrate}
    try:
        return handlers[args.command](args)
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
