import csv
import json

import pytest

from hexbench import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerify:
    def test_passes_and_reports_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--bp", "1.0", "--degrees", "2",
                           "--elements", "1")
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["command"] == "verify"
        assert payload["failed"] == 0
        names = [c["name"] for c in payload["checks"]]
        assert "BP1.0/N2/oracle_equivalence" in names
        assert all(c["pass"] for c in payload["checks"])

    def test_csv_output(self, capsys, tmp_path):
        path = tmp_path / "verify.csv"
        code, _, _ = run(capsys, "verify", "--bp", "3.5", "--degrees", "1",
                         "--elements", "1", "--format", "csv",
                         "--out", str(path))
        assert code == cli.EXIT_OK
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["check", "max_error", "tolerance", "pass"]
        assert all(r[3] == "True" for r in rows[1:])

    def test_symfused_bp35_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "--bp", "3.5", "--degrees", "1",
                           "--elements", "1", "--variant", "symfused")
        assert code == cli.EXIT_USAGE
        assert "error" in err

    def test_all_benchmarks_deterministic(self, capsys):
        argv = ("verify", "--degrees", "1..2", "--elements", "1", "--seed", "3")
        _, out_a, _ = run(capsys, *argv)
        _, out_b, _ = run(capsys, *argv)
        a = json.loads(out_a)
        b = json.loads(out_b)
        assert a["checks"] == b["checks"]


class TestBench:
    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "bench", "--bp", "1.0", "--degrees", "1..2",
                           "--elements", "2", "--repeats", "2")
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["command"] == "bench"
        assert len(payload["runs"]) == 2
        for r in payload["runs"]:
            assert r["wall_time_median_s"] > 0
            assert r["flops"] > 0
            assert r["r_global_flops_per_s"] > 0
            assert "r_shared_flops_per_s" in r
        assert payload["runs"][0]["degree"] == 1

    def test_bp35_has_no_shared_roofline(self, capsys):
        code, out, _ = run(capsys, "bench", "--bp", "3.5", "--degrees", "1",
                           "--elements", "2", "--repeats", "1")
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert "r_shared_flops_per_s" not in payload["runs"][0]

    def test_fused_bytes_match_model(self, capsys):
        code, out, _ = run(capsys, "bench", "--bp", "3.0", "--degrees", "3",
                           "--elements", "2", "--repeats", "1")
        assert code == cli.EXIT_OK
        r = json.loads(out)["runs"][0]
        assert r["counted_global_bytes"] == r["model_bytes"]

    def test_explicit_bandwidth(self, capsys):
        code, out, _ = run(capsys, "bench", "--bp", "1.0", "--degrees", "1",
                           "--elements", "1", "--repeats", "1",
                           "--bandwidth", "100")
        assert code == cli.EXIT_OK
        assert json.loads(out)["runs"][0]["bandwidth_bytes_per_s"] == 100e9


class TestRoofline:
    def test_writes_csv_per_benchmark(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(capsys, "roofline", "--degrees", "1..3",
                           "--elements", "2")
        assert code == cli.EXIT_OK
        for suffix in ("bp1_0", "bp3_5", "bp3_0"):
            assert (tmp_path / f"roofline_{suffix}.csv").exists()
        assert out.count("wrote") == 3

    def test_bp1_csv_columns_and_monotonicity(self, capsys, tmp_path):
        path = tmp_path / "bp1.csv"
        code, _, _ = run(capsys, "roofline", "--bp", "1.0",
                         "--degrees", "1..15", "--elements", "2",
                         "--bandwidth", "549", "--out", str(path))
        assert code == cli.EXIT_OK
        with open(path, newline="") as fh:
            comment = fh.readline()
            rows = list(csv.reader(fh))
        assert comment.startswith("#") and "B_gl=5.490000e+11" in comment
        assert rows[0] == ["N", "F", "bytes", "R_global", "R_shared"]
        r_global = [float(r[3]) for r in rows[1:]]
        assert len(r_global) == 15
        assert all(b > a for a, b in zip(r_global, r_global[1:]))

    def test_bp35_csv_has_no_shared_column(self, capsys, tmp_path):
        path = tmp_path / "bp35.csv"
        code, _, _ = run(capsys, "roofline", "--bp", "3.5", "--degrees", "1..4",
                         "--elements", "2", "--out", str(path))
        assert code == cli.EXIT_OK
        with open(path, newline="") as fh:
            fh.readline()
            rows = list(csv.reader(fh))
        assert rows[0] == ["N", "F", "bytes", "R_global"]


class TestCalibrate:
    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "calibrate", "--bytes", str(1 << 22),
                           "--repeats", "3")
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["bytes"] == 1 << 22
        assert len(payload["trial_times_s"]) == 3
        assert payload["mean_bytes_per_s"] > 0

    def test_too_small_buffer_is_usage_error(self, capsys):
        code, _, err = run(capsys, "calibrate", "--bytes", "1024")
        assert code == cli.EXIT_USAGE
        assert "error" in err


class TestArgumentErrors:
    def test_malformed_degrees(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "--degrees", "zero"])
        assert exc.value.code == cli.EXIT_USAGE
        assert "--degrees" in capsys.readouterr().err

    def test_degrees_out_of_range(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["bench", "--degrees", "0..3"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_mesh_and_elements_conflict(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["bench", "--mesh", "small", "--elements", "4"])
        assert exc.value.code == cli.EXIT_USAGE
