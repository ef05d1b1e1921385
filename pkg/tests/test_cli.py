import json

import jsonschema
import pytest

from whittaker.cli import (JobConfig, build_parser, config_from_args,
                           gl2_formula_row, main, parse_group, sl2_formula_row)
from whittaker.reporting import EXIT_CAP, REPORT_SCHEMA, ReportEnvelope


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_parse_group():
    assert parse_group("GL2") == ("GL", 2)
    assert parse_group("sl3") == ("SL", 3)
    with pytest.raises(ValueError):
        parse_group("Sp4")


def test_config_round_trip():
    args = build_parser().parse_args(
        ["verify", "--group", "SL2", "--ring", "mixed:3^2", "--a", "all",
         "--threads", "2", "--no-cache"])
    cfg = config_from_args(args)
    assert JobConfig.from_dict(cfg.to_dict()) == cfg


def test_formula_rows():
    counts, dims = gl2_formula_row(3, 2)
    assert (counts["cuspidal"], dims["cuspidal"]) == (24, 6)
    assert (counts["split-nss"], dims["split-nss"]) == (18, 8)
    assert (counts["split-ss"], dims["split-ss"]) == (12, 12)
    counts, dims = gl2_formula_row(2, 2)
    assert (counts["cuspidal"], dims["cuspidal"]) == (3, 2)
    assert (counts["split-nss"], dims["split-nss"]) == (4, 3)
    assert (counts["split-ss"], dims["split-ss"]) == (1, 6)
    counts, dims = sl2_formula_row(3, 2)
    assert (counts["cuspidal"], dims["cuspidal"]) == (4, 6)
    assert (counts["split-nss"], dims["split-nss"]) == (12, 4)
    assert (counts["split-ss"], dims["split-ss"]) == (2, 12)
    assert sl2_formula_row(2, 2) is None


def test_verify_gl2_z4_all_units(capsys, tmp_path):
    code, out = run_cli(
        ["verify", "--group", "GL2", "--ring", "mixed:2^2", "--a", "all",
         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert out.count("whittaker-norm-equals-regular-count") == 2
    assert "FAIL" not in out


def test_verify_sl2_z9(capsys, tmp_path):
    code, out = run_cli(
        ["verify", "--group", "SL2", "--ring", "mixed:3^2", "--a", "1",
         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "computed=12" in out and "computed=72" in out
    # the printed-index discrepancy is flagged as a note, not a failure
    assert "[note] sl2-printed-index-identity" in out


def test_verify_sl2_z4_runs_without_predictions(capsys, tmp_path):
    code, out = run_cli(
        ["verify", "--group", "SL2", "--ring", "mixed:2^2", "--a", "1",
         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "predictions-skipped-sl-bad-characteristic" in out


def test_json_report_validates_against_schema(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out = run_cli(
        ["verify", "--group", "GL2", "--ring", "equal:2^2", "--a", "1",
         "--no-cache", "--format", "json", "--out", str(out_file)], capsys)
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep == json.loads(out_file.read_text())
    assert rep["schema"] == "report/v1"
    assert rep["config"]["ring"] == "equal:2^2"


def test_reports_byte_identical_on_warm_cache(capsys, tmp_path):
    args = ["chartab", "--group", "SL2", "--ring", "mixed:3^1",
            "--cache-dir", str(tmp_path), "--format", "json"]
    _, out1 = run_cli(args, capsys)
    _, out2 = run_cli(args, capsys)
    assert out1 == out2


def test_tables_subcommand_q3(capsys, tmp_path):
    code, out = run_cli(
        ["gl2-sl2-tables", "--ring", "mixed:3^2", "--cache-dir", str(tmp_path)],
        capsys)
    assert code == 0
    assert "gl2-dimension-sum-identity: predicted=432 computed=432" in out
    assert "sl2-dimension-sum-identity: predicted=96 computed=96" in out
    assert "[note] sl2-printed-index-identity: predicted=8 computed=72" in out


def test_tables_subcommand_q2(capsys, tmp_path):
    code, out = run_cli(
        ["gl2-sl2-tables", "--ring", "mixed:2^2", "--cache-dir", str(tmp_path)],
        capsys)
    assert code == 0
    assert "gl2-dimension-sum-identity: predicted=24 computed=24" in out
    assert "sl2-formula-row-not-applicable" in out


def test_branching_subcommand(capsys, tmp_path):
    code, out = run_cli(
        ["branching", "--group", "GL2", "--ring", "mixed:3^2",
         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    for frag in ("branching-iota-cuspidal: predicted=[1] computed=[1]",
                 "branching-iota-split-nss: predicted=[2] computed=[2]",
                 "branching-iota-split-ss: predicted=[1] computed=[1]"):
        assert frag in out


def test_branching_p_equals_n_reports_without_iota(capsys, tmp_path):
    code, out = run_cli(
        ["branching", "--group", "GL2", "--ring", "mixed:2^2",
         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "branching-iota" not in out
    assert "branching-norms-cuspidal" in out


def test_classes_subcommand(capsys):
    code, out = run_cli(
        ["classes", "--group", "SL2", "--ring", "mixed:3^1", "--no-cache",
         "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    by_name = {c["name"]: c for c in rep["checks"]}
    assert by_name["class-count"]["computed"] == 7
    assert rep["provenance"]["class_sizes"] == [1, 1, 4, 4, 4, 4, 6]


def test_chartab_subcommand(capsys, tmp_path):
    code, out = run_cli(
        ["chartab", "--group", "SL2", "--ring", "mixed:3^1",
         "--cache-dir", str(tmp_path), "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["provenance"]["degrees"] == [1, 1, 1, 2, 2, 2, 3]


def test_cap_exceeded_exit_code(capsys):
    code = main(["chartab", "--group", "GL2", "--ring", "mixed:3^2",
                 "--no-cache", "--chartab-cap", "100"])
    assert code == EXIT_CAP


def test_mismatch_gives_exit_one():
    env = ReportEnvelope(tool_version="x", config={})
    env.add("demo", "demo-claim", 1, 2)
    assert not env.passed and env.exit_code == 1
    env2 = ReportEnvelope(tool_version="x", config={})
    env2.add("demo", "demo-claim", 1, 2, informational=True)
    assert env2.passed and env2.exit_code == 0


def test_timings_gated(capsys, tmp_path):
    args = ["classes", "--group", "GL2", "--ring", "mixed:2^1", "--no-cache",
            "--format", "json"]
    _, out = run_cli(args, capsys)
    assert json.loads(out)["timings"] == {}
    _, out2 = run_cli(args + ["--timings"], capsys)
    assert "classes" in json.loads(out2)["timings"]


def test_all_units_alias(capsys, tmp_path):
    code, out = run_cli(
        ["verify", "--group", "GL2", "--ring", "mixed:2^2", "--all-units",
         "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert out.count("whittaker-norm-equals-regular-count") == 2


def test_published_schema_file_matches_embedded():
    from pathlib import Path

    published = json.loads(
        (Path(__file__).parent.parent / "schema" / "report-v1.schema.json").read_text())
    assert published == REPORT_SCHEMA


def test_cache_dir_env_default(monkeypatch, tmp_path):
    from whittaker.cache import default_cache_dir

    monkeypatch.setenv("WHITTAKER_CACHE_DIR", str(tmp_path / "envcache"))
    assert default_cache_dir() == tmp_path / "envcache"


def test_sieve_disk_cache_round_trip(tmp_path):
    from whittaker.cache import cached_irreducibles, sieve_cache_path
    from whittaker import linalg

    sieve = cached_irreducibles(3, 3, tmp_path)
    path = sieve_cache_path(3, 3, tmp_path)
    assert path.exists()
    linalg._SIEVE_MEMO.pop((3, 3), None)
    again = cached_irreducibles(3, 3, tmp_path)
    assert again == sieve
    assert len(again[2]) == 3


def test_config_rejects_nonpositive_caps():
    with pytest.raises(ValueError):
        JobConfig(subcommand="verify", table_cap=0)
    with pytest.raises(ValueError):
        JobConfig(subcommand="verify", threads=0)
