import json

import pytest

from polybox.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_clique(capsys):
    code, out, err = run(capsys, "clique", "--classes", "2", "--dim", "3")
    assert code == EXIT_OK
    assert "clique_size: 5\n" in out and "certified: True" in out
    man = json.loads(err)
    assert man["command"] == "clique" and man["exit_code"] == 0


def test_clique_target_mismatch(capsys):
    code, *_ = run(capsys, "clique", "--classes", "2", "--dim", "3", "--target", "6")
    assert code == EXIT_MISMATCH


def test_budget_exit(capsys):
    code, out, _ = run(capsys, "clique", "--classes", "2", "--dim", "4", "--budget-nodes", "10")
    assert code == EXIT_BUDGET


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "rigidity", "--in", str(tmp_path / "missing.code"))[0] == EXIT_INPUT
    assert run(capsys, "nonsense")[0] == EXIT_INPUT
    assert run(capsys, "cover-word", "bxb", "--size", "5")[0] == EXIT_INPUT


def test_rigidity_file(capsys, tmp_path):
    p = tmp_path / "example_p.code"
    p.write_text("alphabet: a b\naaa\na'a'a'\nbaa'\na'ba\naa'b\n")
    code, out, err = run(capsys, "rigidity", "--in", str(p))
    assert code == EXIT_OK and "verdict: rigid" in out
    assert str(p) in json.loads(err)["input_digests"]
    p.write_text("alphabet: a b\naaa\na'aa\n")
    code, out, _ = run(capsys, "rigidity", "--in", str(p))
    assert "verdict: not_rigid" in out and "{baa;b'aa}" in out


def test_tiling_commands(capsys, tmp_path):
    t = tmp_path / "t.txt"
    code, out, _ = run(capsys, "tiling", "realize", "--offsets", "0,1/3,1/2", "--tiling-out", str(t))
    assert code == EXIT_OK and "valid: True" in out
    code, out, _ = run(capsys, "tiling", "validate", "--in", str(t))
    assert code == EXIT_OK and "uncovered_cells: 0" in out
    code, out, _ = run(capsys, "tiling", "stats", "--in", str(t))
    assert code == EXIT_OK and "r_plus: 2" in out
    t.write_text("0 0\n")
    code, out, _ = run(capsys, "tiling", "validate", "--in", str(t))
    assert code == EXIT_MISMATCH and "valid: False" in out


def test_reports_are_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert main(["cover-word", "bbbb", "--size", "6", "--list", "--out", str(p),
                     "--format", "json-lines"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    ma = json.loads((tmp_path / "a.txt.manifest.json").read_text())
    mb = json.loads((tmp_path / "b.txt.manifest.json").read_text())
    assert ma["result_digest"] == mb["result_digest"]
    lines = [json.loads(x) for x in a.read_text().splitlines()]
    assert lines[2] == {"key": "covers", "value": 48} or lines[2]["key"] == "covers"


def test_workers_do_not_change_results(tmp_path):
    outs = []
    for n in ("1", "3"):
        p = tmp_path / f"w{n}.txt"
        main(["census", "--dim", "4", "--sizes", "5..8", "--workers", n, "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_census_small(capsys):
    code, out, _ = run(capsys, "census", "--dim", "3")
    assert code == EXIT_OK and "total: 8" in out and "classes: 1" in out


def test_verify_tables_reports_rows(capsys):
    code, out, _ = run(capsys, "verify-tables")
    assert "table1: match" in out
    # the regenerated table 2 has one class fewer than the printed one: rows 7 and 8 coincide
    assert code == EXIT_MISMATCH and "rows 7, 8 coincide" in out


def test_corrupted_golden_row_is_named(monkeypatch):
    from polybox import tables
    rows = list(tables.TABLE2)
    rows[0] = ("{aab;aa'a}", "{aba;aa'a'}")
    monkeypatch.setattr(tables, "TABLE2", rows)
    r = tables.verify_table2()
    assert not r.ok and any(line.startswith("row 1: INVALID") for line in r.lines)
