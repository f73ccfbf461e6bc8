"""End-to-end command tests through cli.main(argv)."""

import json

import pytest

from latticeset import PointSet, pointset_to_json
from latticeset.cli import main


def write_ps(tmp_path, ps, name="points.json"):
    path = tmp_path / name
    path.write_text(pointset_to_json(ps), encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# gen


def test_gen_moment_file(tmp_path, capsys):
    out = tmp_path / "moment.json"
    code, stdout, _ = run(capsys, "gen", "--method", "moment",
                          "--n", "97", "--d", "2", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["format"] == "latticeset/1"
    assert doc["d"] == 2 and doc["n"] == 97
    assert len(doc["points"]) == 12
    assert doc["points"][0] == [1, 1]
    report = json.loads(stdout)
    assert report["method"] == "moment_curve"
    assert report["final_size"] == 12
    assert report["verified"] is True
    assert report["generator"]


def test_gen_greedy_cube(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, stdout, _ = run(capsys, "gen", "--method", "greedy", "--n", "2",
                          "--d", "3", "--seed", "0", "--order", "lex",
                          "--out", str(out))
    assert code == 0
    assert len(json.loads(out.read_text())["points"]) == 4


def test_gen_pipeline_rejects_d2(capsys):
    code, _, err = run(capsys, "gen", "--method", "pipeline", "--n", "8", "--d", "2")
    assert code == 2
    assert "error:" in err


def test_gen_without_out_streams_pointset(capsys):
    code, stdout, _ = run(capsys, "gen", "--method", "greedy",
                          "--n", "2", "--d", "2")
    assert code == 0
    # point-set document first, report after it
    pointset_doc, report_doc = stdout.split("\n{", 1)
    assert json.loads(pointset_doc)["format"] == "latticeset/1"
    assert json.loads("{" + report_doc)["method"] == "greedy"


def test_gen_deterministic_bytes(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "gen", "--method", "pipeline", "--n", "8",
                         "--d", "3", "--seed", "5", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# verify


def test_verify_cube_reports_circumsphere(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(2, 3))
    code, stdout, _ = run(capsys, "verify", path)
    assert code == 1
    witnesses = json.loads(stdout)
    assert len(witnesses) == 1
    w = witnesses[0]
    assert w["kind"] == "sphere"
    assert (w["a_lift"], w["a"], w["a0"]) == (1, [-3, -3, -3], 6)
    assert len(w["members"]) == 8


def test_verify_moment_threshold_4(tmp_path, capsys):
    out = tmp_path / "m.json"
    run(capsys, "gen", "--method", "moment", "--n", "97", "--d", "2",
        "--out", str(out))
    code, stdout, _ = run(capsys, "verify", str(out), "--threshold", "4")
    assert code == 0
    assert stdout.strip() == "OK"


def test_verify_three_points_ok(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.build(3, 2, [(1, 1), (2, 2), (3, 1)]))
    code, stdout, _ = run(capsys, "verify", path)
    assert code == 0
    assert stdout.strip() == "OK"


def test_verify_malformed_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    for text in ("not json at all", "{}",
                 '{"format": "latticeset/1", "d": 2, "n": 2, "points": [[1, 9]]}'):
        bad.write_text(text, encoding="utf-8")
        code, _, err = run(capsys, "verify", str(bad))
        assert code == 2
        assert "error:" in err
    code, _, _ = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2


def test_verify_threshold_too_low(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(3, 2))
    code, _, err = run(capsys, "verify", path, "--threshold", "2")
    assert code == 2
    assert "error:" in err


# ---------------------------------------------------------------------------
# stats


def test_stats_rich_cube(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(2, 3))
    code, stdout, _ = run(capsys, "stats", path, "--which", "rich")
    assert code == 0
    doc = json.loads(stdout)
    assert doc["records"][0]["k"] == 8
    assert doc["records"][0]["a_lift"] == 1
    assert doc["spheres"] >= 1
    assert doc["line_flats"] == []


def test_stats_lines_grid3(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(3, 2))
    code, stdout, _ = run(capsys, "stats", path, "--which", "lines")
    assert code == 0
    assert json.loads(stdout) == {"arity": 3, "cohyperplanar_tuples": 8}


def test_stats_traces(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(3, 2))
    code, stdout, _ = run(capsys, "stats", path, "--which", "traces", "--z", "5")
    assert code == 0
    doc = json.loads(stdout)
    assert doc["z"] == 5
    assert doc["sauer_shelah_bound"] == 26
    assert doc["max_traces"] <= 26
    assert doc["within_bound"] is True


def test_stats_traces_requires_z(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(3, 2))
    code, _, err = run(capsys, "stats", path, "--which", "traces")
    assert code == 2
    assert "requires --z" in err


def test_stats_unknown_section(tmp_path, capsys):
    path = write_ps(tmp_path, PointSet.full_grid(2, 2))
    code, _, err = run(capsys, "stats", path, "--which", "colours")
    assert code == 2
    assert "unknown stats section" in err


# ---------------------------------------------------------------------------
# bench


def test_bench_csv_shape(tmp_path, capsys):
    csv = tmp_path / "bench.csv"
    code, stdout, _ = run(capsys, "bench", "--d", "2", "--n-list", "32,64",
                          "--methods", "moment", "--seeds", "0",
                          "--csv", str(csv))
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "method,d,n,seed,final_size,runtime_ms,exponent_estimate"
    assert len(lines) == 3
    for line in lines[1:]:
        cols = line.split(",")
        assert cols[0] == "moment" and cols[1] == "2"
        assert float(cols[6]) > 0
    assert "reference exponents" in stdout


def test_bench_rows_sorted_and_stable(tmp_path, capsys):
    def masked(path):
        rows = []
        for line in path.read_text().splitlines()[1:]:
            cols = line.split(",")
            rows.append(cols[:5] + cols[6:])  # drop runtime_ms
        return rows

    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run(capsys, "bench", "--d", "2", "--n-list", "8,4",
                         "--methods", "greedy", "--seeds", "1,0",
                         "--csv", str(path))
        assert code == 0
    assert masked(a) == masked(b)
    keys = [(r[0], int(r[2]), int(r[3])) for r in masked(a)]
    assert keys == sorted(keys)


def test_bench_zero_size_has_empty_exponent(tmp_path, capsys):
    # moment at n=2, d=2 yields no points; the exponent column must be empty
    csv = tmp_path / "z.csv"
    with pytest.warns(UserWarning):
        code, _, _ = run(capsys, "bench", "--d", "2", "--n-list", "2",
                         "--methods", "moment", "--seeds", "0", "--csv", str(csv))
    assert code == 0
    row = csv.read_text().splitlines()[1].split(",")
    assert row[4] == "0"
    assert row[6] == ""


def test_bench_empty_n_list(capsys):
    code, _, err = run(capsys, "bench", "--d", "2", "--n-list", ",")
    assert code == 2
    assert "nonempty" in err


def test_bench_unknown_method(capsys):
    code, _, err = run(capsys, "bench", "--d", "2", "--n-list", "8",
                       "--methods", "simulated-annealing")
    assert code == 2


def test_bench_rejects_tiny_n(capsys):
    code, _, _ = run(capsys, "bench", "--d", "2", "--n-list", "1",
                     "--methods", "moment")
    assert code == 2


# ---------------------------------------------------------------------------
# vc-check


def test_vc_check_runs_clean(capsys):
    code, stdout, _ = run(capsys, "vc-check", "--n", "5", "--d", "2",
                          "--samples", "100", "--seed", "1")
    assert code == 0
    doc = json.loads(stdout)
    assert doc["samples"] == doc["valid"] == 100
    assert sum(doc["reasons"].values()) == 100
    assert set(doc["reasons"]) <= {
        "not_cospherical", "unique_sphere_forces_extra_point",
        "degenerate_recursed"}


def test_vc_check_small_grid_hits_all_reasons(capsys):
    code, stdout, _ = run(capsys, "vc-check", "--n", "4", "--d", "3",
                          "--samples", "100", "--seed", "0")
    assert code == 0
    doc = json.loads(stdout)
    assert len(doc["reasons"]) == 3


def test_vc_check_rejects_zero_samples(capsys):
    code, _, err = run(capsys, "vc-check", "--n", "5", "--d", "2",
                       "--samples", "0")
    assert code == 2


def test_vc_check_rejects_tiny_grid(capsys):
    code, _, _ = run(capsys, "vc-check", "--n", "1", "--d", "2",
                     "--samples", "5")
    assert code == 2


# ---------------------------------------------------------------------------
# round trip


def test_gen_verify_round_trip(tmp_path, capsys):
    out = tmp_path / "rt.json"
    code, _, _ = run(capsys, "gen", "--method", "greedy", "--n", "3",
                     "--d", "2", "--out", str(out))
    assert code == 0
    code, stdout, _ = run(capsys, "verify", str(out))
    assert code == 0
    assert stdout.strip() == "OK"
