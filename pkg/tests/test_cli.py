"""End-to-end CLI behaviour: formats, determinism, error paths, exit codes."""

import json
import subprocess
import sys

import pytest

from casosc import cli
from casosc.config import ConfigError, emit_config, parse_config, sweep_grid

SMALL_SWEEP = {"sweep": {"T_min": 0.5, "T_max": 5.0, "points": 4}}


def _write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _fields(line):
    return line.split(",")


def test_tm3_csv_stdout(tmp_path, capsys):
    cfg = _write_config(tmp_path, SMALL_SWEEP)
    assert cli.main(["tm3", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "T,F,U,S"
    assert len(lines) == 5
    rows = [list(map(float, _fields(line))) for line in lines[1:]]
    assert [r[0] for r in rows] == sorted(r[0] for r in rows)
    assert all(r[1] < 0.0 for r in rows)
    # every field is the shortest 12-significant-digit form of its value
    for line in lines[1:]:
        for field in _fields(line):
            assert "%.12g" % float(field) == field
            assert field != "-0"


def test_byte_identical_reruns(tmp_path):
    cfg = _write_config(tmp_path, SMALL_SWEEP)
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert cli.main(["tm3", "--config", cfg, "--out", out1]) == 0
    assert cli.main(["tm3", "--config", cfg, "--out", out2]) == 0
    b1 = (tmp_path / "a.csv").read_bytes()
    assert b1 == (tmp_path / "b.csv").read_bytes()
    assert b1.startswith(b"T,F,U,S\n")


def test_json_payload_and_intervals(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"sweep": {"T_min": 50.0, "T_max": 200.0, "points": 3}})
    assert cli.main(["te3", "--config", cfg, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"model", "rows", "negative_entropy_intervals"}
    assert payload["model"]["kind"] == "te3"
    assert len(payload["rows"]) == 3
    assert set(payload["rows"][0]) == {"T", "F", "U", "S"}
    assert all(row["S"] < 0.0 for row in payload["rows"])
    assert payload["negative_entropy_intervals"] == [[50.0, 200.0]]


def test_out_file_and_plot(tmp_path):
    cfg = _write_config(tmp_path, {"sweep": {"T_min": 0.5, "T_max": 5.0, "points": 3}})
    out = tmp_path / "table.json"
    fig = tmp_path / "curve.png"
    rc = cli.main(["tm3", "--config", cfg, "--format", "json",
                   "--out", str(out), "--plot", str(fig)])
    assert rc == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert len(payload["rows"]) == 3
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert fig.stat().st_size > 1000


def test_dipole_sweep(tmp_path, capsys):
    cfg = _write_config(tmp_path, {
        "sweep": {"r_min": 10.0, "r_max": 30.0, "points": 3, "temperature": 1e-3}})
    assert cli.main(["dipole", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "r,F"
    fs = [float(_fields(line)[1]) for line in lines[1:]]
    assert len(fs) == 3
    assert all(f < 0.0 for f in fs)
    assert abs(fs[2]) < abs(fs[1]) < abs(fs[0])


def test_dipole_plot(tmp_path):
    cfg = _write_config(tmp_path, {
        "sweep": {"r_min": 10.0, "r_max": 30.0, "points": 3, "temperature": 1e-3}})
    fig = tmp_path / "decay.png"
    assert cli.main(["dipole", "--config", cfg, "--out",
                     str(tmp_path / "t.csv"), "--plot", str(fig)]) == 0
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_uncoupled_prints_plain_zero(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"model": {"c": 0.0},
                                   "sweep": {"T_min": 1.0, "T_max": 2.0, "points": 2}})
    assert cli.main(["tm3", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    for line in lines[1:]:
        assert _fields(line)[1:] == ["0", "0", "0"]


def _error_record(capsys):
    err = capsys.readouterr().err.strip()
    assert "\n" not in err  # single machine-parsable line
    return json.loads(err)


def test_config_error_bad_value(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"sweep": {"T_min": -1.0}})
    assert cli.main(["tm3", "--config", cfg]) == 2
    record = _error_record(capsys)
    assert record["error"] == "config"
    assert record["key"] == "sweep.T_min"


def test_config_error_unknown_keys(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"model": {"bogus": 1}})
    assert cli.main(["te3", "--config", cfg]) == 2
    assert _error_record(capsys)["key"] == "model.bogus"
    cfg = _write_config(tmp_path, {"junk": {}})
    assert cli.main(["tm3", "--config", cfg]) == 2
    assert _error_record(capsys)["key"] == "junk"


def test_config_error_bad_bath_size(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"model": {"N": 0}})
    assert cli.main(["bath", "--config", cfg]) == 2
    assert _error_record(capsys)["key"] == "model.N"


def test_config_error_invalid_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    assert cli.main(["tm3", "--config", str(path)]) == 2
    assert _error_record(capsys)["error"] == "config"


def test_config_error_missing_file(capsys):
    assert cli.main(["tm3", "--config", "/no/such/file.json"]) == 2
    assert _error_record(capsys)["error"] == "config"


def test_stability_exit_code(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"model": {"c": 0.8},
                                   "sweep": {"T_min": 1.0, "T_max": 2.0, "points": 2}})
    assert cli.main(["tm3", "--config", cfg]) == 1
    assert _error_record(capsys)["error"] == "stability"


def test_convergence_exit_code(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"sweep": {"T_min": 0.01, "T_max": 0.02, "points": 2},
                                   "tolerances": {"n_max_cap": 8}})
    assert cli.main(["tm3", "--config", cfg]) == 1
    assert _error_record(capsys)["error"] == "convergence"


def test_verify_quick_subprocess():
    proc = subprocess.run([sys.executable, "-m", "casosc.cli", "verify", "--quick"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 12
    for number, line in enumerate(lines[:11], start=1):
        assert line.startswith(f"[{number:2d}] PASS")
    assert lines[-1] == "result: 11/11 checks passed"


def test_config_round_trip():
    for command, text in (("tm3", ""), ("te3", '{"model": {"c": 0.45}}'),
                          ("bath", '{"model": {"kind": "te", "N": 3}}'),
                          ("dipole", '{"sweep": {"points": 5}}')):
        config = parse_config(text, command)
        again = parse_config(emit_config(config), command)
        assert again == config


def test_sweep_grid_spacings():
    lin = parse_config('{"sweep": {"T_min": 1, "T_max": 3, "points": 3, '
                       '"spacing": "linear"}}', "tm3")
    assert sweep_grid(lin) == [1.0, 2.0, 3.0]
    log = parse_config('{"sweep": {"T_min": 1, "T_max": 4, "points": 3}}', "tm3")
    assert sweep_grid(log) == pytest.approx([1.0, 2.0, 4.0])


def test_build_model_bath_kind():
    config = parse_config('{"model": {"kind": "tm", "N": 3}}', "bath")
    model = cli.build_model(config)
    assert model.kind == "tm_bath"
    assert len(model.mediators) == 3


def test_parse_config_rejects_unknown_command():
    with pytest.raises(ConfigError):
        parse_config("{}", "nonsense")
