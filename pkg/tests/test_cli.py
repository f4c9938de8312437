import json

import pytest
from click.testing import CliRunner

from pillowcase.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_modulus(runner):
    r = runner.invoke(main, ["modulus", "--x", "15*sqrt(3)-26"])
    assert r.exit_code == 0
    assert "tau ≈ 1+2.143182698915i" in r.output


def test_modulus_bad_input(runner):
    r = runner.invoke(main, ["modulus", "--x", "1"])
    assert r.exit_code == 1


def test_usage_error_exit_code(runner):
    r = runner.invoke(main, ["search"])
    assert r.exit_code == 1
    r = runner.invoke(main, ["search", "--groups", "gl23", "--genus", "5..2"])
    assert r.exit_code == 1
    r = runner.invoke(main, ["search", "--groups", "nosuch"])
    assert r.exit_code == 1


def test_search_empty_range(runner, tmp_path):
    r = runner.invoke(main, ["search", "--groups", "gl23", "--genus", "7..7", "--min-n", "2",
                             "--out", str(tmp_path)])
    assert r.exit_code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["results"] == []
    assert report["triples_enumerated"] == {"gl23": 0}


def test_search_writes_deterministic_report(runner, tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "8"):
        monkeypatch.setenv("PILLOWCASE_THREADS", threads)
        d = tmp_path / threads
        r = runner.invoke(main, ["search", "--groups", "a4xc3", "--genus", "4..4", "--out", str(d)])
        assert r.exit_code == 0, r.output
        outs.append((d / "report.json").read_bytes() + (d / "summary.txt").read_bytes())
    assert outs[0] == outs[1]
    assert b"a4xc3: n=6" in outs[0]


def test_certify_compare_flatpic(runner, tmp_path):
    c1, c2, pic = tmp_path / "c1.json", tmp_path / "c2.json", tmp_path / "p.svg"
    r = runner.invoke(main, ["certify", "--group", "a4xc3", "--subgroup", "(1 2 3);(5 6 7)",
                             "--x", "15*sqrt(3)-26", "--out", str(c1)])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["certify", "--group", "a4xc3", "--subgroup", "(1 2 3);(1 2)(3 4)",
                             "--out", str(c2)])
    assert r.exit_code == 0, r.output
    doc = json.loads(c1.read_text())
    assert doc["moduli"]["tau"] == "1+2.143182698915i"
    r = runner.invoke(main, ["compare", "--cert", str(c1), "--cert", str(c2)])
    assert r.exit_code == 0
    assert "vanishing loci: different" in r.output
    assert "CertifiedNonIsomorphic" in r.output
    r = runner.invoke(main, ["flatpic", "--cert", str(c1), "--modulus", "1+2.143182698915i", "--out", str(pic)])
    assert r.exit_code == 0
    assert pic.read_text().count("<polygon") == 9


def test_certify_rejection_exit(runner):
    r = runner.invoke(main, ["certify", "--group", "a4xc3", "--subgroup", "(5 6 7)"])
    assert r.exit_code == 2
    assert "rejected" in r.output


def test_certify_bad_generator(runner):
    r = runner.invoke(main, ["certify", "--group", "a4xc3", "--subgroup", "(1 2)"])
    assert r.exit_code == 1


def test_compare_rejects_corrupt_file(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    r = runner.invoke(main, ["compare", "--cert", str(bad), "--cert", str(bad)])
    assert r.exit_code == 1
