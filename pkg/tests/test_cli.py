import json
import subprocess
import sys

import pytest

from skoromap import StepPath, write_path
from skoromap.cli import NAIVE_MAX, bench, main, streaming_linearity


@pytest.fixture
def three_point(tmp_path):
    f = tmp_path / "psi.csv"
    f.write_text("t,value\n0,0\n1,2\n2,-1\n")
    return f


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestMap:
    def test_three_point_file(self, three_point, capsys):
        code, out, _ = run(["map", three_point, "-z", 0, "-a", 1], capsys)
        assert code == 0
        doc = json.loads(out)
        assert list(doc) == ["times", "psi", "phibar", "eta_l", "eta_u"]
        assert doc["phibar"] == [0, 1, 0]
        assert doc["eta_l"] == [0, 0, 2] and doc["eta_u"] == [0, 1, 1]

    @pytest.mark.parametrize("method", ["streaming", "naive", "remark15", "clip", "fixedpoint"])
    def test_every_method(self, three_point, capsys, method):
        code, out, _ = run(["map", three_point, "-z", 0, "-a", 1, "--method", method], capsys)
        assert code == 0 and json.loads(out)["phibar"] == [0, 1, 0]

    def test_overshoot_pair_same_output_for_naive_and_streaming(self, tmp_path, capsys):
        src = tmp_path / "phi2.json"
        write_path(StepPath([0.0, 0.5], [3.0, 1.0], 1.0), src)
        outs = []
        for method in ("naive", "streaming"):
            dst = tmp_path / f"{method}.json"
            assert run(["map", src, "-z", 0, "-a", 2, "--method", method, "--out", dst], capsys)[0] == 0
            outs.append(dst.read_bytes())
        assert outs[0] == outs[1]
        assert json.loads(outs[0])["phibar"] == [2.0, 0.0]

    def test_in_band_constant(self, tmp_path, capsys):
        src = tmp_path / "c.csv"
        src.write_text("t,value\n0,0.4\n1,0.4\n")
        doc = json.loads(run(["map", src, "-z", 0, "-a", 1], capsys)[1])
        assert doc["phibar"] == doc["psi"] and not any(doc["eta_l"]) and not any(doc["eta_u"])

    def test_csv_output(self, three_point, capsys):
        code, out, _ = run(["map", three_point, "-z", 0, "-a", 1, "--format", "csv"], capsys)
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == "times,psi,phibar,eta_l,eta_u" and len(lines) == 4

    def test_parse_error_names_row(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,value\n0,0\n1,2\nx,3\n")
        code, _, err = run(["map", bad, "-z", 0, "-a", 1], capsys)
        assert code == 2 and "line 4" in err

    @pytest.mark.parametrize("band", [(1, 0), (0, 0), (0, "inf")])
    def test_invalid_band(self, three_point, capsys, band):
        assert run(["map", three_point, "-z", band[0], "-a", band[1]], capsys)[0] == 2

    def test_missing_file_and_bad_usage(self, tmp_path, capsys):
        assert run(["map", tmp_path / "nope.csv", "-z", 0, "-a", 1], capsys)[0] == 2
        assert run(["map"], capsys)[0] == 2
        assert run([], capsys)[0] == 2
        assert run(["map", "x", "-z", 0, "-a", 1, "--method", "magic"], capsys)[0] == 2


class TestDecomposeAndVerify:
    def test_decompose(self, three_point, capsys):
        code, out, _ = run(["decompose", three_point, "-z", 0, "-a", 1], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["eta_l"] == [0, 0, 2] and doc["eta_u"] == [0, 1, 1]
        assert doc["sigma"] == [1.0] and doc["tau"] == [2.0]

    def test_decompose_with_given_phibar(self, tmp_path, three_point, capsys):
        pb = tmp_path / "pb.csv"
        pb.write_text("t,value\n0,0\n1,1\n2,0\n")
        doc = json.loads(run(["decompose", three_point, "--phibar", pb, "-z", 0, "-a", 1], capsys)[1])
        assert doc["eta_l"] == [0, 0, 2]

    def test_verify_round_trip(self, tmp_path, three_point, capsys):
        cand = tmp_path / "cand.json"
        run(["map", three_point, "-z", 0, "-a", 1, "--out", cand], capsys)
        code, out, _ = run(["verify", cand, "-z", 0, "-a", 1], capsys)
        assert code == 0 and json.loads(out)["passed"]

    def test_verify_rejects_broken_candidate(self, tmp_path, capsys):
        cand = tmp_path / "cand.json"
        cand.write_text(json.dumps({"times": [0, 1], "psi": [0.5, 0.5], "phibar": [0.5, 0.5],
                                    "eta_l": [0, 1], "eta_u": [0, 1]}))
        code, out, _ = run(["verify", cand, "-z", 0, "-a", 1], capsys)
        assert code == 1
        assert {v["condition"] for v in json.loads(out)["violations"]} >= {"complementarity_l"}

    def test_verify_missing_field(self, tmp_path, capsys):
        cand = tmp_path / "cand.json"
        cand.write_text(json.dumps({"times": [0], "psi": [0]}))
        code, _, err = run(["verify", cand, "-z", 0, "-a", 1], capsys)
        assert code == 2 and "phibar" in err


class TestProperties:
    def test_zero_scenarios_is_usage_error(self, tmp_path, capsys):
        assert run(["properties", "--scenarios", 0, "--out", tmp_path], capsys)[0] == 2

    def test_small_run_passes(self, tmp_path, capsys):
        code, _, _ = run(["properties", "--scenarios", 15, "--n", 64, "--seed", 3, "--out", tmp_path], capsys)
        assert code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["passed"]
        assert set(summary["suites"]) == {"four_way", "oracle", "construction", "lipschitz",
                                          "comparison", "structure", "oscillation"}
        assert all(s["passed"] == 15 and not s["replays"] for s in summary["suites"].values())

    def test_injected_fault_writes_replays(self, tmp_path, capsys):
        code, _, _ = run(["properties", "--scenarios", 4, "--n", 32, "--suite", "four_way",
                          "--suite", "oracle", "--inject-fault", "--out", tmp_path], capsys)
        assert code == 1
        replays = sorted(p.name for p in tmp_path.glob("replay_*.json"))
        assert replays == ["replay_four_way_000000.json", "replay_oracle_000000.json"]
        rec = json.loads((tmp_path / replays[0]).read_text())
        assert {"check", "seed", "band", "specs", "constants"} <= set(rec)
        assert run(["properties", "--replay", tmp_path / replays[0]], capsys)[0] == 0

    def test_output_is_deterministic(self, tmp_path, capsys):
        docs = []
        for d in ("a", "b"):
            run(["properties", "--scenarios", 5, "--n", 32, "--suite", "comparison", "--out", tmp_path / d], capsys)
            doc = json.loads((tmp_path / d / "summary.json").read_text())
            for s in doc["suites"].values():
                s.pop("seconds")
            docs.append(doc)
        assert docs[0] == docs[1]


class TestSimulate:
    def test_json(self, capsys):
        code, out, _ = run(["simulate", "--steps", 2000, "--seed", 4, "--initial", 0.5], capsys)
        doc = json.loads(out)
        assert code == 0 and sum(doc["stats"]["occupancy_histogram"]) == 2000
        assert doc["config"]["band"] == [0.0, 1.0]

    def test_csv(self, capsys):
        code, out, _ = run(["simulate", "--steps", 1000, "--bins", 5, "--format", "csv"], capsys)
        assert code == 0 and out.splitlines()[0] == "bin_left,bin_right,count" and len(out.splitlines()) == 6

    def test_density_gate(self, capsys):
        argv = ["simulate", "--steps", 400_000, "--initial", 0.5, "--density-tol"]
        assert run(argv + [0.05], capsys)[0] == 0
        assert run(argv + [1e-6], capsys)[0] == 1

    def test_invalid_config(self, capsys):
        assert run(["simulate", "--steps", 0], capsys)[0] == 2
        assert run(["simulate", "--initial", 5], capsys)[0] == 2


class TestBench:
    def test_rows_and_guard(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        sizes = [512, 1024, NAIVE_MAX * 2]
        code, _, err = run(["bench", "--sizes", *sizes, "--repeats", 1, "--out", out], capsys)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "n,method,seconds"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 2 * 2 + 1
        assert all(int(n) <= NAIVE_MAX for n, m, _ in rows if m == "naive")
        assert code in (0, 1) and "spread" in err

    def test_linearity_ratio(self):
        rows = [(10, "streaming", 1.0), (100, "streaming", 20.0), (10, "naive", 5.0)]
        assert streaming_linearity(rows) == pytest.approx(2.0)

    def test_bench_function(self):
        rows = bench([64, 128], repeats=1)
        assert [(n, m) for n, m, _ in rows] == [(64, "streaming"), (64, "naive"), (128, "streaming"), (128, "naive")]


def test_console_entry_point(three_point):
    proc = subprocess.run([sys.executable, "-m", "skoromap.cli", "map", str(three_point), "-z", "0", "-a", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["phibar"] == [0, 1, 0]
