import io
import json
import subprocess
import sys

import pytest

from fuzzyreason import load_report
from fuzzyreason.cli import EXIT_EMPTY, EXIT_MODE, EXIT_PARSE, EXIT_USAGE, main


def run(capsysbinary, *argv):
    code = main([str(a) for a in argv])
    out, err = capsysbinary.readouterr()
    return code, out.decode(), err.decode()


def test_compare(capsysbinary, data_dir):
    code, out, err = run(capsysbinary, "compare", data_dir / "group1.json", data_dir / "group2.json")
    assert code == 0 and err == ""
    assert "| group1 | group2 | 3.250 | 2.500 | first_better |" in out
    assert "| group1 | group2 | 2.833 | 1.750 | first_better |" in out
    assert "| group1 | group2 | 1.500 | 1.500 | tie |" in out


def test_compare_is_deterministic(capsysbinary, data_dir):
    args = ["compare", data_dir / "group1.json", data_dir / "group2_reconstructed.csv", "--format", "json"]
    first = run(capsysbinary, *args)
    assert first == run(capsysbinary, *args)
    assert load_report(first[1].encode()).comparisons


def test_profiles_paper3(capsysbinary, data_dir):
    code, out, _ = run(capsysbinary, "profiles", data_dir / "group1.json", "--rounding", "paper3")
    assert code == 0
    assert "| d c a | 0.031 | 0.500 |" in out


def test_combine_csv(capsysbinary, data_dir):
    code, out, _ = run(
        capsysbinary, "combine", data_dir / "group1.json", data_dir / "group2.json", "--format", "csv", "--rounding", "paper3"
    )
    assert code == 0
    assert "profile,,bbb,r(s),0.129" in out


def test_rank(capsysbinary, data_dir):
    code, out, _ = run(capsysbinary, "rank", data_dir / "two_students.csv")
    assert code == 0
    assert "- first > second (greater)" in out
    code, out, _ = run(capsysbinary, "rank", data_dir / "two_students.csv", "--format", "json")
    assert json.loads(out)["maximal"] == ["first"]


def test_rank_pregraded(capsysbinary, data_dir):
    code, out, err = run(capsysbinary, "rank", data_dir / "group1.json")
    assert code == EXIT_MODE and out == ""
    assert err.count("\n") == 1 and "mode error" in err


def test_assess_empty(capsysbinary, data_dir):
    code, out, err = run(capsysbinary, "assess", data_dir / "empty.json")
    assert code == EXIT_EMPTY and out == ""
    assert err.count("\n") == 1 and "empty fuzzy set" in err


def test_assess_records(capsysbinary, data_dir):
    code, out, _ = run(capsysbinary, "assess", data_dir / "group1_reconstructed.csv")
    assert code == 0
    assert "| imagination | 35 | 0 | 0 | 15 | 12 | 8 |" in out


@pytest.mark.parametrize(
    "argv, code",
    [
        (["compare", "{d}/group1.json"], EXIT_USAGE),
        (["profiles", "{d}/group1.json", "--format", "svg"], EXIT_USAGE),
        (["frobnicate", "{d}/group1.json"], EXIT_USAGE),
        (["assess", "{d}/group1.json", "--precision", "0"], EXIT_USAGE),
        (["assess", "{d}/group1_reconstructed.csv", "--stages", "2"], EXIT_PARSE),
        (["assess", "{d}/README.md", "--input-format", "csv"], EXIT_PARSE),
    ],
)
def test_error_paths(capsysbinary, data_dir, argv, code):
    got, out, err = run(capsysbinary, *[a.format(d=data_dir) for a in argv])
    assert got == code and out == ""
    assert err.count("\n") == 1


def test_missing_file(capsysbinary, tmp_path):
    code, out, err = run(capsysbinary, "assess", tmp_path / "nope.json")
    assert code != 0 and out == "" and err.count("\n") == 1


def test_output_file(capsysbinary, data_dir, tmp_path):
    target = tmp_path / "plot.svg"
    code, out, _ = run(capsysbinary, "plot", data_dir / "group1.json", data_dir / "group2.json", "--output", target)
    assert code == 0 and out == ""
    assert target.read_text().count('class="centroid-diagram"') == 3


def test_stdin(monkeypatch, capsysbinary, data_dir):
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO((data_dir / "two_students.csv").read_bytes())))
    code, out, _ = run(capsysbinary, "rank", "-")
    assert code == 0 and "first > second" in out


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "fuzzyreason", "compare", str(data_dir / "group1.json"), str(data_dir / "group2.json")],
        capture_output=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert b"first_better" in proc.stdout
