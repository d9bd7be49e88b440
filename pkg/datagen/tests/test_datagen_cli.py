"""Command-line behaviour; backend-dependent paths are exercised only
for their failure handling since no GP interpreter is assumed."""

import shutil

import pytest

from massey_datagen import cli
from massey_datagen.backend import BackendUnavailable
from massey_datagen.gp import GpBackend


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_screen_stdout(capsys):
    code, out, _ = run_cli(capsys, "screen", "--max-abs", "4100")
    assert code == 0
    assert out.split() == ["-3299", "-3896", "-4027"]


def test_screen_limit_and_out(capsys, tmp_path):
    target = tmp_path / "d.txt"
    code, out, _ = run_cli(capsys, "screen", "--max-abs", "4100",
                           "--limit", "2", "--out", str(target))
    assert code == 0
    assert "2 discriminants" in out
    assert target.read_text().split() == ["-3299", "-3896"]


def test_screen_bad_range(capsys):
    code, _, err = run_cli(capsys, "screen", "--max-abs", "2")
    assert code == cli.EXIT_INPUT
    assert "min-abs" in err


def test_screen_empty_range(capsys):
    code, out, _ = run_cli(capsys, "screen", "--max-abs", "100")
    assert code == 0
    assert out.strip() == ""


@pytest.mark.skipif(shutil.which("gp") is not None,
                    reason="a GP interpreter is installed")
def test_generate_reports_missing_backend(capsys, tmp_path):
    src = tmp_path / "d.txt"
    src.write_text("-3299\n")
    code, _, err = run_cli(capsys, "generate", "--input", str(src),
                           "--out", str(tmp_path / "out.csv"),
                           "--log", str(tmp_path / "jobs.jsonl"))
    assert code == cli.EXIT_BACKEND
    assert "backend unavailable" in err


def test_generate_bad_input_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "generate",
                           "--input", str(tmp_path / "missing.txt"),
                           "--out", str(tmp_path / "out.csv"),
                           "--log", str(tmp_path / "jobs.jsonl"))
    assert code == cli.EXIT_INPUT
    assert "error:" in err


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        cli.main([])


def test_gp_backend_unavailable_raises():
    with pytest.raises(BackendUnavailable):
        GpBackend(gp_path="definitely-not-a-gp-binary")
