import json
import os
import subprocess
import sys as _sysmod

import pytest

from gkzfrac import cli
from gkzfrac.errors import ParseError, SchemaError, SemanticError


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [_sysmod.executable, "-m", "gkzfrac.cli", *args],
        capture_output=True, text=True, env=env)


# --- parse_input -------------------------------------------------------------------

def test_parse_bundled_p1():
    spec = cli.parse_input(cli.fixture_path("p1"))
    assert spec.name == "p1"
    assert spec.rank == 1
    assert spec.fan().rays == ((1,), (-1,))


def test_parse_overlapping_partition(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "name": "bad", "rank": 1, "rays": [[1], [-1]],
        "max_cones": [[0], [1]], "nef_partition": [[0, 1], [1]]}))
    with pytest.raises(SemanticError) as err:
        cli.parse_input(str(path))
    assert "1" in str(err.value)


def test_parse_truncated_file(tmp_path):
    path = tmp_path / "trunc.json"
    path.write_text('{"name": "x", "rank": 1, ')
    with pytest.raises(ParseError) as err:
        cli.parse_input(str(path))
    assert "byte offset" in str(err.value)


def test_parse_missing_field(tmp_path):
    path = tmp_path / "missing.json"
    path.write_text(json.dumps({"name": "x", "rank": 1}))
    with pytest.raises(SchemaError) as err:
        cli.parse_input(str(path))
    assert "/rays" in str(err.value)


def test_parse_bad_ray_width(tmp_path):
    path = tmp_path / "wide.json"
    path.write_text(json.dumps({
        "name": "x", "rank": 2, "rays": [[1, 0], [0]],
        "max_cones": [[0, 1]], "nef_partition": [[0, 1]]}))
    with pytest.raises(SchemaError) as err:
        cli.parse_input(str(path))
    assert "/rays/1" in str(err.value)


def test_parse_cone_index_out_of_range(tmp_path):
    path = tmp_path / "oob.json"
    path.write_text(json.dumps({
        "name": "x", "rank": 1, "rays": [[1], [-1]],
        "max_cones": [[0], [7]], "nef_partition": [[0, 1]]}))
    with pytest.raises(SemanticError) as err:
        cli.parse_input(str(path))
    assert "7" in str(err.value)


# --- commands in process -----------------------------------------------------------

def test_series_report_contains_expected_value():
    spec = cli.parse_input(cli.fixture_path("p1"))
    report = cli.run_command("series", spec, {"order": 8})
    blob = report.to_json()
    assert "105/64" in blob
    assert json.loads(blob)["payload"]["oracle_match"] is True


def test_validate_report():
    spec = cli.parse_input(cli.fixture_path("p2"))
    report = cli.run_command("validate", spec)
    assert "completeness" in report.payload["checks"]


def test_groebner_report():
    spec = cli.parse_input(cli.fixture_path("p1xp1"))
    report = cli.run_command("groebner", spec)
    assert report.payload["leading_terms_are_stanley_reisner"] is True
    assert report.payload["equals_primitive_collection_binomials"] is True


def test_degeneracy_report():
    spec = cli.parse_input(cli.fixture_path("p2"))
    report = cli.run_command("degeneracy", spec, {"order": 6})
    chart = report.payload["charts"][0]
    assert chart["coordinate_signs"] == [-1]
    assert chart["certificate"]["passed"] is True


def test_markdown_rendering():
    spec = cli.parse_input(cli.fixture_path("p1"))
    report = cli.run_command("system", spec)
    md = report.to_markdown()
    assert md.startswith("# system on p1")
    assert "a_ext_matrix" in md


# --- subprocess behaviour -------------------------------------------------------------

def test_cli_series_stdout():
    result = run_cli(["series", cli.fixture_path("p1"), "--order", "8"])
    assert result.returncode == 0
    assert "105/64" in result.stdout
    assert "finished" in result.stderr


def test_cli_check_all_p2():
    result = run_cli(["check-all", cli.fixture_path("p2"), "--order", "6"])
    assert result.returncode == 0, result.stdout + result.stderr
    payload = json.loads(result.stdout)["payload"]
    assert payload["passed"] is True
    assert all(c["ok"] for c in payload["checks"])


def test_cli_unknown_command_exit_2():
    result = run_cli(["frobnicate", cli.fixture_path("p1")])
    assert result.returncode == 2


def test_cli_parse_error_exit_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{nope")
    result = run_cli(["validate", str(path)])
    assert result.returncode == 2
    assert "input error" in result.stderr


def test_cli_determinism():
    args = ["series", cli.fixture_path("p1xp1"), "--order", "6"]
    first = run_cli(args)
    second = run_cli(args)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_cli_term_cap(tmp_path):
    result = run_cli(["series", cli.fixture_path("p1"), "--order", "8"],
                     env_extra={"GKZFRAC_MAX_TERMS": "2"})
    assert result.returncode == 1
    assert "TruncationTooLarge" in result.stderr


def test_cli_out_file(tmp_path):
    out = tmp_path / "report.json"
    result = run_cli(["fans", cli.fixture_path("f1"), "--out", str(out)])
    assert result.returncode == 0
    data = json.loads(out.read_text())
    assert data["payload"]["normalized_volume"] == 4


def test_cli_weight_flag():
    result = run_cli(["series", cli.fixture_path("p1"),
                      "--weight", "0,1,1", "--order", "4"])
    assert result.returncode == 0


def test_cli_non_ample_weight_rejected():
    result = run_cli(["series", cli.fixture_path("p1"),
                      "--weight", "0,0,0"])
    assert result.returncode == 1
    assert "WeightNotAmple" in result.stderr


def test_cli_markdown_format():
    result = run_cli(["cohomology", cli.fixture_path("p2"),
                      "--format", "md"])
    assert result.returncode == 0
    assert result.stdout.startswith("# cohomology on p2")


def test_cli_invalid_fan_exit_1(tmp_path):
    path = tmp_path / "singular.json"
    path.write_text(json.dumps({
        "name": "singular", "rank": 2,
        "rays": [[1, 0], [1, 2], [-1, -1]],
        "max_cones": [[0, 1], [1, 2], [0, 2]],
        "nef_partition": [[0, 1, 2]]}))
    result = run_cli(["validate", str(path)])
    assert result.returncode == 1
    assert "NotSmooth" in result.stderr
