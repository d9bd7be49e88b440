"""Command-line interface: in-process invocation, determinism, exit
codes."""

import json

import pytest

from schur_sigma import classify, cli, pcgroup as pg

from conftest import heisenberg27


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- catalog -------------------------------------------------------------------


def test_catalog_json_and_determinism(catalog, capsys, tmp_path):
    code, out, err = run_cli(capsys, "catalog")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 19
    # --out writes byte-identical content
    path = tmp_path / "cat.json"
    code, _, _ = run_cli(capsys, "catalog", "--out", str(path))
    assert code == 0
    assert path.read_text() == out


# -- classify ------------------------------------------------------------------


def test_classify_roundtrip(catalog, capsys, tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(
        ",".join(classify.MASSEY_CSV_HEADER) + "\n"
        "-3,0,0,0,0,0,0,0,0\n"
        "-4,1,0,0,0,0,1,0,0\n")
    code, out, err = run_cli(capsys, "--threads", "2",
                             "classify", "--in", str(src))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "discriminant,label"
    assert lines[1] == "-3,d0"
    assert len(lines) == 3
    # deterministic across runs and thread counts
    code, out2, _ = run_cli(capsys, "--threads", "1",
                            "classify", "--in", str(src))
    assert out2 == out


def test_classify_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n")
    code, out, err = run_cli(capsys, "classify", "--in", str(bad))
    assert code == 1
    assert "error:" in err


def test_classify_missing_file(capsys):
    code, _, err = run_cli(capsys, "classify", "--in", "/no/such/file.csv")
    assert code == 1
    assert "error:" in err


# -- ipad ----------------------------------------------------------------------


def test_ipad_by_type_label_and_alias(catalog, capsys):
    code, out, _ = run_cli(capsys, "ipad", "--type", "d0")
    assert code == 0
    assert out.strip() == catalog[0].ipad.render()
    code, out2, _ = run_cli(capsys, "ipad", "--type", "[2187,33]")
    assert code == 0
    assert out2 == out
    code, out3, _ = run_cli(capsys, "ipad", "--type", "2187,33")
    assert out3 == out


def test_ipad_unknown_type(catalog, capsys):
    code, _, err = run_cli(capsys, "ipad", "--type", "d9-nonsense")
    assert code == 1
    assert "valid labels" in err


def test_ipad_from_group_file(capsys, tmp_path):
    path = tmp_path / "he27.txt"
    path.write_text(pg.to_text(heisenberg27()))
    code, out, _ = run_cli(capsys, "ipad", "--group", str(path))
    assert code == 0
    assert out.startswith("[3,3]; ")


def test_ipad_group_file_bad_rank(capsys, tmp_path):
    path = tmp_path / "c3.txt"
    path.write_text(pg.to_text(pg.elementary_abelian(3, 3)))
    code, _, err = run_cli(capsys, "ipad", "--group", str(path))
    assert code == 1
    assert "error:" in err


# -- descendants ---------------------------------------------------------------


def test_descendants_of_e9(capsys, tmp_path):
    path = tmp_path / "e9.txt"
    path.write_text(pg.to_text(pg.elementary_abelian(3, 2)))
    code, out, _ = run_cli(capsys, "descendants",
                           "--group", str(path), "--step", "1")
    assert code == 0
    assert out.startswith("# 3 immediate descendants, step 1")
    assert out.count("pcgroup p=3 n=3") == 3


def test_descendants_bad_step(capsys, tmp_path):
    path = tmp_path / "e9.txt"
    path.write_text(pg.to_text(pg.elementary_abelian(3, 2)))
    code, _, err = run_cli(capsys, "descendants",
                           "--group", str(path), "--step", "0")
    assert code == 1
    assert "error:" in err


# -- powerful ------------------------------------------------------------------


def test_powerful_known_positive(catalog, capsys):
    code, out, _ = run_cli(capsys, "powerful", "--type", "243,14",
                           "--subgroup", "D2")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "all_powerful"
    assert doc["max_rank"] <= 3
    assert doc["alias"] == [243, 14]


def test_powerful_unknown_type(catalog, capsys):
    code, _, err = run_cli(capsys, "powerful", "--type", "977,1",
                           "--subgroup", "D2")
    assert code == 1
    assert "valid labels" in err


# -- report --------------------------------------------------------------------


def test_report_markdown_and_json(catalog, capsys, tmp_path):
    src = tmp_path / "labels.csv"
    src.write_text("discriminant,label\n-3,d0\n-4,d0\n-7,d1-0001\n")
    code, out, _ = run_cli(capsys, "report", "--in", str(src))
    assert code == 0
    assert out.startswith("| H | H_ab |")
    code, out, _ = run_cli(capsys, "report", "--in", str(src),
                           "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["total"] == 3


def test_report_empty_and_unknown_label(catalog, capsys, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("discriminant,label\n")
    code, _, err = run_cli(capsys, "report", "--in", str(empty))
    assert code == 1
    assert "N = 0" in err

    bad = tmp_path / "bad.csv"
    bad.write_text("discriminant,label\n-3,what\n")
    code, _, err = run_cli(capsys, "report", "--in", str(bad))
    assert code == 1
    assert "unknown label" in err


# -- selfcheck -----------------------------------------------------------------


def test_selfcheck_passes(catalog, capsys):
    code, out, _ = run_cli(capsys, "selfcheck")
    assert code == 0
    assert "all checks passed" in out
    assert out.count("ok   ") == 5


# -- argument handling ---------------------------------------------------------


def test_threads_validation(capsys, tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(",".join(classify.MASSEY_CSV_HEADER) + "\n")
    with pytest.raises(SystemExit):
        cli.main(["--threads", "0", "classify", "--in", str(src)])


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit):
        cli.main([])
