import json
import subprocess
import sys

import pytest

from semint.cli import canonical_json

INSTANCE = {
    "space": {"n": 4},
    "capacity": {"kind": "additive", "weights": [0.25, 0.25, 0.25, 0.25]},
    "semicopula": {"kind": "min"},
    "function": {"values": [0.25, 0.5, 0.75, 1.0]},
}


def run_cli(*args, stdin: bytes | None = None):
    return subprocess.run(
        [sys.executable, "-m", "semint", *args],
        input=stdin,
        capture_output=True,
        timeout=120,
    )


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def error_of(proc) -> dict:
    err = json.loads(proc.stderr)
    assert set(err) == {"code", "message", "location"}
    return err


# ---------------------------------------------------------------------------
# integrate / oracle


def test_integrate_golden_bytes(tmp_path):
    proc = run_cli("integrate", write(tmp_path, "i.json", INSTANCE))
    assert proc.returncode == 0
    assert proc.stdout == b'{"value":0.5,"argmax_t":0.5,"method":"exact","candidates_inspected":4}\n'
    assert proc.stderr == b""


def test_integrate_reads_stdin(tmp_path):
    proc = run_cli("integrate", "-", stdin=json.dumps(INSTANCE).encode())
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == 0.5


def test_integrate_all_capacity_kinds(tmp_path):
    table = {"n": 2, "kind": "table", "values": [0.0, 0.6, 0.4, 1.0]}
    poss = {"kind": "possibility", "weights": [1.0, 0.3]}
    dist = {"kind": "distortion", "base": table, "g": [0.0, 0.25, 1.0]}
    for cap in (table, poss, dist):
        doc = {
            "space": {"n": 2},
            "capacity": cap,
            "semicopula": {"kind": "product"},
            "function": {"values": [0.5, 0.9]},
        }
        proc = run_cli("integrate", write(tmp_path, "k.json", doc))
        assert proc.returncode == 0, proc.stderr
        out = json.loads(proc.stdout)
        assert 0.0 <= out["value"] <= 1.0 and out["method"] == "exact"


def test_integrate_table_semicopula(tmp_path):
    grid = [[min(i, j) / 4 for j in range(5)] for i in range(5)]
    doc = dict(INSTANCE, semicopula={"kind": "table", "resolution": 4, "grid": grid})
    proc = run_cli("integrate", write(tmp_path, "t.json", doc))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == pytest.approx(0.5, abs=1e-12)


def test_oracle_lower_bounds_exact(tmp_path):
    path = write(tmp_path, "i.json", INSTANCE)
    exact = json.loads(run_cli("integrate", path).stdout)
    proc = run_cli("oracle", path, "--grid-points", "100001")
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["method"] == "grid" and out["grid_points"] == 100001
    assert 0.0 <= exact["value"] - out["value"] <= 5e-4
    assert out["value"] == pytest.approx(0.5, abs=1e-5)


def test_oracle_rejects_tiny_grid(tmp_path):
    proc = run_cli("oracle", write(tmp_path, "i.json", INSTANCE), "--grid-points", "1")
    assert proc.returncode == 2
    assert error_of(proc)["code"] == "domain"


# ---------------------------------------------------------------------------
# validators


def test_check_semicopula_builtin_passes():
    proc = run_cli("check-semicopula", "-", stdin=b'{"kind":"lukasiewicz"}')
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["passed"] is True and out["violation_count"] == 0


def test_check_semicopula_midpoint_fails():
    grid = [[(i + j) / 8 for j in range(5)] for i in range(5)]
    doc = {"kind": "table", "resolution": 4, "grid": grid}
    proc = run_cli("check-semicopula", "-", "--resolution", "8", stdin=json.dumps(doc).encode())
    assert proc.returncode == 1
    out = json.loads(proc.stdout)
    assert out["passed"] is False and out["violation_count"] > 0
    axioms = {v["axiom"] for v in out["violations"]}
    assert axioms & {"neutral-right", "neutral-left"}


def test_check_semicopula_wrapped_document():
    proc = run_cli("check-semicopula", "-", stdin=b'{"semicopula":{"kind":"min"}}')
    assert proc.returncode == 0


def test_check_capacity_not_normalized_exits_one():
    doc = {"n": 2, "kind": "table", "values": [0, 0.6, 0.4, 0.5]}
    proc = run_cli("check-capacity", "-", stdin=json.dumps(doc).encode())
    assert proc.returncode == 1
    out = json.loads(proc.stdout)
    assert out["valid"] is False
    assert any(v["kind"] == "not-normalized" for v in out["violations"])


def test_check_capacity_valid_kinds_exit_zero():
    for doc in (
        {"n": 2, "kind": "table", "values": [0, 0.6, 0.4, 1.0]},
        {"kind": "possibility", "weights": [0.2, 1.0, 0.5]},
        {"kind": "additive", "weights": [0.1, 0.2, 0.7]},
        {"kind": "distortion", "base": {"kind": "additive", "weights": [0.5, 0.5]}, "g": [0.0, 0.3, 1.0]},
        {"space": {"n": 1}, "capacity": {"kind": "table", "values": [0, 1], "n": 1}},
    ):
        proc = run_cli("check-capacity", "-", stdin=json.dumps(doc).encode())
        assert proc.returncode == 0, proc.stderr
        assert json.loads(proc.stdout)["valid"] is True


def test_check_capacity_constructor_violation_exits_one():
    doc = {"kind": "possibility", "weights": [0.4, 0.9]}
    proc = run_cli("check-capacity", "-", stdin=json.dumps(doc).encode())
    assert proc.returncode == 1
    out = json.loads(proc.stdout)
    assert out["violations"][0]["kind"] == "max-not-one"


# ---------------------------------------------------------------------------
# converge


def converge_instance(**params):
    return {
        "space": {"n": 4},
        "capacity": {"kind": "additive", "weights": [0.25, 0.25, 0.25, 0.25]},
        "semicopula": {"kind": "min"},
        "sequence": {"kind": "constant-rate", "rate": "1/n"},
        "params": params,
    }


def test_converge_constant_rate_report(tmp_path):
    doc = converge_instance(horizon=100, tail_start=51, epsilon=1 / 51, t_grid=[0.1, 0.5, 1.0])
    csv_path = tmp_path / "out.csv"
    proc = run_cli("converge", write(tmp_path, "c.json", doc), "--csv", str(csv_path))
    assert proc.returncode == 1  # strict mode fails, so not all three pass
    out = json.loads(proc.stdout)
    assert out["strict"]["verdict"] == "fail"
    assert out["in_capacity"]["verdict"] == "pass"
    assert out["in_mean"]["verdict"] == "pass"
    assert out["all_pass"] is False
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "n,strict_value,mean_value,survival_at_t_min"
    assert len(lines) == 101
    assert lines[1] == "1,1,1,1"
    assert lines[100].startswith("100,1,0.01")


def test_converge_explicit_sequence_passes(tmp_path):
    doc = {
        "space": {"n": 2},
        "capacity": {"kind": "additive", "weights": [0.5, 0.5]},
        "semicopula": {"kind": "product"},
        "sequence": {
            "kind": "explicit",
            "terms": [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
            "limit": [0.5, 0.5],
        },
        "params": {"epsilon": 0.0},
    }
    proc = run_cli("converge", write(tmp_path, "e.json", doc))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["all_pass"] is True


def test_converge_horizon_mismatch_is_schema_error(tmp_path):
    doc = {
        "space": {"n": 1},
        "capacity": {"kind": "table", "values": [0, 1]},
        "semicopula": {"kind": "min"},
        "sequence": {"kind": "explicit", "terms": [[0.1]], "limit": [0.0]},
        "params": {"horizon": 5},
    }
    proc = run_cli("converge", write(tmp_path, "m.json", doc))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "schema" and err["location"] == "/params/horizon"


def test_converge_bad_t_grid_location(tmp_path):
    doc = converge_instance(t_grid=[0.5, 0.0])
    proc = run_cli("converge", write(tmp_path, "g.json", doc))
    assert proc.returncode == 2
    assert error_of(proc)["location"] == "/params/t_grid/1"


def test_converge_unknown_rate(tmp_path):
    doc = converge_instance()
    doc["sequence"]["rate"] = "1/sqrt(n)"
    proc = run_cli("converge", write(tmp_path, "r.json", doc))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "bad-rate" and err["location"] == "/sequence/rate"


# ---------------------------------------------------------------------------
# counterexample / audit


def test_counterexample_theorem2_demonstrates_gap():
    proc = run_cli("counterexample", "--theorem", "2", "--rate", "1/n", "--horizon", "50")
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["demonstrates_gap"] is True
    assert out["report"]["hypothesis"]["verdict"] == "fail"
    assert out["report"]["conclusion"]["mode"] == "in-mean"
    assert out["report"]["conclusion"]["verdict"] == "pass"


def test_counterexample_theorem1_demonstrates_gap():
    for rate in ("1/n", "1/2^n", "1/log(n+2)"):
        proc = run_cli("counterexample", "--theorem", "1", "--rate", rate)
        assert proc.returncode == 0, proc.stdout
        out = json.loads(proc.stdout)
        assert out["demonstrates_gap"] is True
        assert out["report"]["conclusion"]["mode"] == "in-capacity"


def test_counterexample_bad_rate_exits_two():
    proc = run_cli("counterexample", "--theorem", "1", "--rate", "bogus")
    assert proc.returncode == 2
    assert error_of(proc)["code"] == "bad-rate"


def test_audit_clean_run(tmp_path):
    csv_path = tmp_path / "audit.csv"
    proc = run_cli("audit", "--cases", "20", "--seed", "1", "--csv", str(csv_path))
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert out["violations"] == 0 and out["all_consistent"] is True
    assert out["audits"] == 20 * 5
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "case,theorem,semicopula,hypothesis_verdict,conclusion_verdict,violation"
    assert len(lines) == 1 + 20 * 5
    assert all(line.endswith(",0") for line in lines[1:])


# ---------------------------------------------------------------------------
# determinism and round-trips


def test_reports_are_byte_identical_across_runs(tmp_path):
    path = write(tmp_path, "i.json", INSTANCE)
    assert run_cli("integrate", path).stdout == run_cli("integrate", path).stdout
    a = run_cli("audit", "--cases", "10", "--seed", "7")
    b = run_cli("audit", "--cases", "10", "--seed", "7")
    assert a.stdout == b.stdout and a.stdout
    c = run_cli("audit", "--cases", "10", "--seed", "8")
    assert c.stdout != a.stdout


def test_audit_csv_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli("audit", "--cases", "5", "--seed", "3", "--csv", str(p1))
    run_cli("audit", "--cases", "5", "--seed", "3", "--csv", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_every_report_reparses_as_json(tmp_path):
    runs = [
        run_cli("integrate", write(tmp_path, "i.json", INSTANCE)),
        run_cli("oracle", write(tmp_path, "i.json", INSTANCE), "--grid-points", "101"),
        run_cli("check-semicopula", "-", stdin=b'{"kind":"min"}'),
        run_cli("check-capacity", "-", stdin=b'{"kind":"additive","weights":[1.0]}'),
        run_cli("converge", write(tmp_path, "c.json", converge_instance(horizon=10))),
        run_cli("counterexample", "--theorem", "2"),
        run_cli("audit", "--cases", "3"),
    ]
    for proc in runs:
        json.loads(proc.stdout)  # must parse cleanly


def test_canonical_json_formats_17_digits():
    assert canonical_json({"x": 1 / 3}) == '{"x":0.33333333333333331}\n'
    assert canonical_json([True, None, 3]) == "[true,null,3]\n"
    back = json.loads(canonical_json({"x": 0.1 + 0.2}))
    assert back["x"] == 0.1 + 0.2  # lossless round-trip


# ---------------------------------------------------------------------------
# error contract


def test_malformed_json_exits_two(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"space":')
    proc = run_cli("integrate", str(path))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "json-parse" and "line" in err["location"]


def test_missing_file_exits_two(tmp_path):
    proc = run_cli("integrate", str(tmp_path / "nope.json"))
    assert proc.returncode == 2
    assert error_of(proc)["code"] == "io"


def test_unknown_flag_exits_two(tmp_path):
    proc = run_cli("integrate", write(tmp_path, "i.json", INSTANCE), "--frobnicate")
    assert proc.returncode == 2
    assert error_of(proc)["code"] == "usage"


def test_unknown_subcommand_exits_two():
    proc = run_cli("bogus")
    assert proc.returncode == 2
    assert error_of(proc)["code"] == "usage"


def test_missing_key_has_location(tmp_path):
    doc = dict(INSTANCE)
    del doc["capacity"]
    proc = run_cli("integrate", write(tmp_path, "i.json", doc))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "schema" and err["location"] == "/"


def test_invalid_capacity_inside_instance_exits_two(tmp_path):
    doc = dict(INSTANCE, capacity={"kind": "table", "values": [0, 0.6, 0.4, 0.5], "n": 2})
    doc["space"] = {"n": 2}
    doc["function"] = {"values": [0.5, 0.5]}
    proc = run_cli("integrate", write(tmp_path, "i.json", doc))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "not-normalized" and err["location"] == "/capacity/values"


def test_function_length_mismatch_location(tmp_path):
    doc = dict(INSTANCE, function={"values": [0.5]})
    proc = run_cli("integrate", write(tmp_path, "i.json", doc))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "schema" and err["location"] == "/function/values"


def test_capacity_n_cross_reference(tmp_path):
    doc = dict(INSTANCE, capacity={"kind": "table", "n": 2, "values": [0, 1, 1, 1]})
    proc = run_cli("integrate", write(tmp_path, "i.json", doc))
    assert proc.returncode == 2
    assert error_of(proc)["location"] == "/capacity/n"


def test_bad_semicopula_grid_location(tmp_path):
    doc = dict(INSTANCE, semicopula={"kind": "table", "grid": [[0.0, 0.5], [0.0, 1.5]]})
    proc = run_cli("integrate", write(tmp_path, "i.json", doc))
    assert proc.returncode == 2
    err = error_of(proc)
    assert err["code"] == "domain" and err["location"] == "/semicopula/grid"
