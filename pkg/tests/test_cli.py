import json

import pytest

from sharp_ineq.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main


def write_cfg(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


@pytest.fixture
def line_cfg(tmp_path):
    return write_cfg(
        tmp_path,
        "line.json",
        {
            "space": {"kind": "continuum", "d": 1, "m": 0},
            "modulus": {"kind": "power", "alpha": 1.0},
            "h_values": [1.0],
        },
    )


def run_cli(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_constant_golden_csv(capsys, line_cfg):
    code, out, err = run_cli(capsys, ["constant", "--config", line_cfg])
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "d,m,alpha_or_modulus,h,mu,integral,deviation"
    assert lines[1] == "1,0,1,1,2,1,0.5"
    assert err == ""


def test_constant_json_format(capsys, line_cfg):
    code, out, _ = run_cli(capsys, ["constant", "--config", line_cfg, "--format", "json"])
    assert code == EXIT_OK
    rows = json.loads(out)
    assert rows[0]["deviation"] == 0.5


def test_verify_equality_line(capsys, line_cfg):
    code, out, _ = run_cli(capsys, ["verify", "--config", line_cfg])
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0].startswith("theorem_id,d,m,")
    body = "\n".join(lines[1:])
    assert "EqualityAttained" in body
    assert "Violated" not in body
    # all eight bounds are reported by default
    assert len(lines) == 9


def test_verify_exact_mode(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "exact.json",
        {
            "space": {"kind": "lattice", "d": 1, "m": 0},
            "modulus": {"kind": "power", "alpha": 1.0},
            "h_values": ["3/2"],
            "exact": True,
            "theorems": ["lemma1", "nagy"],
        },
    )
    code, out, _ = run_cli(capsys, ["verify", "--config", cfg])
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0].endswith(",exact")
    for line in lines[1:]:
        assert line.endswith(",EqualityAttained,0")


def test_verify_exact_rejects_continuum(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "bad.json",
        {
            "space": {"kind": "continuum", "d": 1, "m": 0},
            "modulus": {"kind": "power", "alpha": 1.0},
            "h_values": [1.0],
            "exact": True,
        },
    )
    code, _, err = run_cli(capsys, ["verify", "--config", cfg])
    assert code == EXIT_CONFIG
    assert "lattice" in err


def test_verify_table_modulus_rational_points(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "table.json",
        {
            "space": {"kind": "lattice", "d": 1, "m": 0},
            "modulus": {"kind": "table", "points": [[0, 0], [1, "2/3"], [2, 1]]},
            "h_values": ["3/2"],
            "exact": True,
            "theorems": ["nagy"],
        },
    )
    code, out, _ = run_cli(capsys, ["verify", "--config", cfg])
    assert code == EXIT_OK
    assert "EqualityAttained,0" in out


def test_stechkin_curve_halving(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "curve.json",
        {
            "space": {"kind": "continuum", "d": 1, "m": 0},
            "modulus": {"kind": "power", "alpha": 1.0},
            "n_values": [0.5, 1, 2],
        },
    )
    code, out, _ = run_cli(capsys, ["stechkin", "--config", cfg])
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "d,m,alpha_or_modulus,n,h,e_n"
    errs = [float(line.split(",")[-1]) for line in lines[1:]]
    assert errs == pytest.approx([0.5, 0.25, 0.125], rel=1e-9)


def test_oracle_json_sections(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "oracle.json",
        {
            "suites": [{"theorem_id": "nagy", "trials": 10, "seed": 2}],
            "mc_checks": ["ball_integral"],
            "exact": [
                {
                    "theorem_id": "nagy",
                    "space": {"kind": "lattice", "d": 1, "m": 0},
                    "modulus": {"kind": "power", "alpha": 1.0},
                    "h": "3/2",
                }
            ],
        },
    )
    code, out, _ = run_cli(capsys, ["oracle", "--config", cfg])
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["suites"][0]["violations"] == 0
    assert doc["mc_checks"][0]["ok"] is True
    assert doc["exact"][0]["exact"] == "0"


def test_oracle_rejects_csv(capsys, tmp_path):
    cfg = write_cfg(tmp_path, "o.json", {"mc_checks": ["ball_integral"]})
    code, _, err = run_cli(capsys, ["oracle", "--config", cfg, "--format", "csv"])
    assert code == EXIT_CONFIG
    assert "json" in err


def test_missing_config_file(capsys):
    code, _, err = run_cli(capsys, ["constant", "--config", "/nonexistent/x.json"])
    assert code == EXIT_CONFIG
    assert "cannot read" in err


def test_config_missing_modulus(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path, "m.json", {"space": {"kind": "continuum", "d": 1, "m": 0}, "h_values": [1]}
    )
    code, _, err = run_cli(capsys, ["constant", "--config", cfg])
    assert code == EXIT_CONFIG
    assert "modulus" in err


def test_divergent_kernel_is_numeric_failure(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "div.json",
        {
            "space": {"kind": "continuum", "d": 1, "m": 0},
            "modulus": {"kind": "power", "alpha": 0.4},
            "h_values": [1.0],
            "theorems": ["hypersingular"],
            "kernel": {"form": "power_law", "beta": 0.8},
        },
    )
    code, _, err = run_cli(capsys, ["verify", "--config", cfg])
    assert code == EXIT_NUMERIC
    assert "numeric failure" in err


def test_out_flag_writes_file(tmp_path, capsys, line_cfg):
    target = tmp_path / "result.csv"
    code, out, _ = run_cli(capsys, ["constant", "--config", line_cfg, "--out", str(target)])
    assert code == EXIT_OK
    assert out == ""
    assert target.read_text().startswith("d,m,")


def test_byte_determinism(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "det.json",
        {
            "suites": [{"theorem_id": "mixed_additive", "trials": 15, "seed": 4}],
            "mc_checks": ["split_objective"],
        },
    )
    runs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, ["oracle", "--config", cfg])
        assert code == EXIT_OK
        runs.append(out)
    assert runs[0] == runs[1]


def test_seed_flag_overrides(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path, "s.json", {"suites": [{"theorem_id": "nagy", "trials": 8, "seed": 1}]}
    )
    _, out1, _ = run_cli(capsys, ["oracle", "--config", cfg])
    _, out2, _ = run_cli(capsys, ["oracle", "--config", cfg, "--seed", "99"])
    assert json.loads(out1)["suites"][0]["seed"] == 1
    assert json.loads(out2)["suites"][0]["seed"] == 99


def test_bad_theorem_id(capsys, tmp_path):
    cfg = write_cfg(
        tmp_path,
        "bad_tid.json",
        {
            "space": {"kind": "continuum", "d": 1, "m": 0},
            "modulus": {"kind": "power", "alpha": 1.0},
            "h_values": [1.0],
            "theorems": ["riemann"],
        },
    )
    code, _, err = run_cli(capsys, ["verify", "--config", cfg])
    assert code == EXIT_CONFIG
    assert "unknown theorem id" in err
