"""CLI exit codes, report shapes, determinism, end-to-end flows."""

import json

import pytest

from convspec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_check_jp_preset(capsys):
    code, payload = run_json(capsys, "check", "--preset", "jp")
    assert code == 0
    assert payload["ok"] is True
    assert payload["gcd"]["certified"] is False
    assert payload["gcd"]["gcds"] == [2]
    assert "single-triple" in payload["gcd"]["note"]


def test_check_example14_preset(capsys):
    code, payload = run_json(capsys, "check", "--preset", "example14")
    assert code == 0
    assert payload["ok"] is True
    assert payload["gcd"]["certified"] is False
    assert payload["gcd"]["gcds"] == [1, 3]
    assert payload["gcd"]["offending"] == [2]


def test_check_invalid_triple_exits_2(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({
        "triples": [{"N": 3, "B": [0, 1], "L": [0, 1]}],
        "word": {"prefix": [], "period": [1]},
    }))
    code, payload = run_json(capsys, "check", "--config", str(cfg))
    assert code == 2
    assert payload["ok"] is False


def test_check_malformed_config_exits_3(capsys, tmp_path):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    code = main(["check", "--config", str(cfg)])
    assert code == 3
    code = main(["check", "--config", str(tmp_path / "missing.json")])
    assert code == 3


def test_usage_errors_exit_1(capsys):
    assert main(["check"]) == 1  # neither preset nor config
    assert main(["zeros", "--preset", "jp"]) == 1  # no mode chosen
    assert main(["nonsense"]) == 1


def test_spectrum_jp_canonical(capsys):
    code, payload = run_json(capsys, "spectrum", "--preset", "jp", "--levels", "3")
    assert code == 0
    assert payload["levels"][-1] == [0, 1, 4, 5, 16, 17, 20, 21]
    assert payload["indices"] == [1, 2, 3]
    assert all(k == 0 for level in payload["shifts"] for _, k in level)
    assert payload["warnings"]  # gcd note for the single-triple family


def test_spectrum_rejects_zero_levels(capsys):
    assert main(["spectrum", "--preset", "jp", "--levels", "0"]) == 3


def test_spectrum_example14_uniform_word_fails(capsys):
    code, payload = run_json(
        capsys, "spectrum", "--preset", "example14", "--word", ":2"
    )
    assert code == 2
    err = payload["error"]
    assert err["type"] == "equi-positivity-violation"
    assert err["lambda"] != 0
    assert err["achieved"] < err["epsilon"]


def test_spectrum_then_verify_roundtrip(capsys, tmp_path):
    levels_path = tmp_path / "levels.json"
    code = main(["spectrum", "--preset", "jp", "--levels", "3",
                 "--out", str(levels_path)])
    assert code == 0
    code, payload = run_json(
        capsys, "verify", "--preset", "jp", "--levels-file", str(levels_path),
        "--grid", "64", "--depth", "30",
    )
    assert code == 0
    assert payload["passed"] is True
    assert payload["completeness_defect"] <= 1e-9


def test_verify_grid_override_same_verdict(capsys, tmp_path):
    levels_path = tmp_path / "levels.json"
    main(["spectrum", "--preset", "jp", "--levels", "3", "--out", str(levels_path)])
    code16, p16 = run_json(
        capsys, "verify", "--preset", "jp", "--levels-file", str(levels_path),
        "--grid", "16",
    )
    code64, p64 = run_json(
        capsys, "verify", "--preset", "jp", "--levels-file", str(levels_path),
        "--grid", "64",
    )
    assert code16 == code64 == 0
    assert p16["passed"] == p64["passed"] is True


def test_verify_detects_tampered_levels(capsys, tmp_path):
    levels_path = tmp_path / "levels.json"
    main(["spectrum", "--preset", "jp", "--levels", "3", "--out", str(levels_path)])
    obj = json.loads(levels_path.read_text())
    obj["levels"][-1].remove(1)
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(obj))
    code, payload = run_json(
        capsys, "verify", "--preset", "jp", "--levels-file", str(tampered),
    )
    assert code == 2
    assert payload["passed"] is False
    assert payload["min_q"] < 1 - 0.01


def test_verify_not_applicable_after_failed_construction(capsys, tmp_path):
    levels_path = tmp_path / "failed.json"
    code = main(["spectrum", "--preset", "example14", "--word", ":2",
                 "--out", str(levels_path)])
    assert code == 2
    code, payload = run_json(
        capsys, "verify", "--preset", "example14", "--word", ":2",
        "--levels-file", str(levels_path),
    )
    assert code == 3
    assert payload["status"] == "not-applicable"


def test_zeros_mask_mode(capsys):
    code, payload = run_json(capsys, "zeros", "--mask", "0,2", "--range", "0,2")
    assert code == 0
    roots = [float(z["root"]) for z in payload["zeros"]]
    assert roots == pytest.approx([0.25, 0.75, 1.25, 1.75], abs=1e-10)


def test_zeros_products_mode(capsys):
    code, payload = run_json(
        capsys, "zeros", "--preset", "jp", "--products-h", "2"
    )
    assert code == 0
    assert len(payload["zeros"]) == 10


def test_zeros_probe_mode(capsys):
    code, payload = run_json(
        capsys, "zeros", "--preset", "jp", "--probe-xi", "1.0", "--kmax", "3"
    )
    assert code == 0
    assert payload["verdict"] == "witness"
    assert payload["witness_k"] == 1
    code, payload = run_json(
        capsys, "zeros", "--preset", "example14", "--word", ":2",
        "--probe-xi", str(1 / 3),
    )
    assert code == 0
    assert payload["verdict"] == "candidate-zero"


def test_zeros_singleton_mask_exits_3(capsys):
    assert main(["zeros", "--mask", "5", "--range", "0,1"]) == 3


def test_invalid_parameters_exit_3(capsys):
    assert main(["spectrum", "--preset", "jp", "--delta", "-1"]) == 3
    assert main(["zeros", "--preset", "jp", "--probe-xi", "1.0", "--kmax", "0"]) == 3
    assert main(["zeros", "--preset", "jp", "--products-h", "-2"]) == 3
    assert main(["equipos", "--preset", "jp", "--grid", "1"]) == 3


def test_equipos_jp_certificate(capsys):
    code, payload = run_json(capsys, "equipos", "--preset", "jp")
    assert code == 0
    assert payload["ok"] is True
    assert payload["epsilon_hat"] > 0.05


def test_equipos_example14_uniform_word_fails(capsys):
    code, payload = run_json(
        capsys, "equipos", "--preset", "example14", "--word", ":2",
        "--skips", "0,1,2", "--grid", "192",
    )
    assert code == 2
    assert payload["ok"] is False
    assert abs(payload["worst"]["x"] - 1 / 3) < 1 / 128
    assert payload["worst"]["value"] <= 1e-4


def test_equipos_csv_output(capsys):
    code, out = run(capsys, "equipos", "--preset", "jp", "--skips", "0",
                    "--grid", "8", "--output", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,skip,k,value"
    assert len(lines) == 9


def test_byte_identical_output(capsys):
    _, first = run(capsys, "equipos", "--preset", "jp", "--skips", "0,1",
                   "--grid", "32")
    _, second = run(capsys, "equipos", "--preset", "jp", "--skips", "0,1",
                    "--grid", "32")
    assert first == second
    _, s1 = run(capsys, "spectrum", "--preset", "jp", "--levels", "3")
    _, s2 = run(capsys, "spectrum", "--preset", "jp", "--levels", "3")
    assert s1 == s2


def test_word_parsing_variants(capsys):
    # "1:2" = prefix 1, then 2 forever; "12" = period 12; ":2" = pure period 2
    code, payload = run_json(
        capsys, "spectrum", "--preset", "example14", "--word", "1:2",
        "--levels", "1",
    )
    assert code == 0
    code2, _ = run_json(
        capsys, "spectrum", "--preset", "example14", "--word", "12",
        "--levels", "1",
    )
    assert code2 == 0


def test_config_file_spec(capsys, tmp_path):
    cfg = tmp_path / "mixed.json"
    cfg.write_text(json.dumps({
        "triples": [
            {"N": 2, "B": [0, 1], "L": [0, 1]},
            {"N": 3, "B": [0, 1, 2], "L": [0, 1, 2]},
        ],
        "word": {"prefix": [], "period": [1, 2]},
    }))
    code, payload = run_json(capsys, "check", "--config", str(cfg))
    assert code == 0
    assert payload["gcd"]["certified"] is True
