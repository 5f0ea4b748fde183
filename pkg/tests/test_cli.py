import os

import pytest

from handlecalc.cli import main

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fx(name):
    return os.path.join(FIXTURES, name)


def test_validate_ok(capsys):
    assert main(["validate", fx("hopf.ddc")]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_broken_exits_1(capsys):
    assert main(["validate", fx("broken.ddc")]) == 1
    assert "dangling slot reference" in capsys.readouterr().err


def test_validate_missing_file(capsys):
    assert main(["validate", "no_such_file.ddc"]) == 1


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_invariants_wu(capsys):
    rc = main(["invariants", fx("wu.hgd"), "--kind", "closed"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "h2 = Z/2" in out


def test_invariants_machine_format(capsys):
    rc = main(["invariants", fx("mazur.ddc"), "--format", "machine", "--watch", "h1,pi1ab"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "h1\t0" in out


def test_invariants_stable_output(capsys):
    main(["invariants", fx("wu.hgd"), "--kind", "closed"])
    first = capsys.readouterr().out
    main(["invariants", fx("wu.hgd"), "--kind", "closed"])
    assert capsys.readouterr().out == first


def test_run_mazur_script(capsys):
    rc = main(["run", fx("mazur_b5.kms")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS" in out
    assert "recognize=EmptyS4orB5" in out


def test_run_failing_expectation(tmp_path, capsys):
    script = tmp_path / "bad.kms"
    script.write_text(f"input {fx('hopf.ddc')}\nexpect components = 9\n")
    rc = main(["run", str(script)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "FAIL" in err


def test_simplify(capsys):
    rc = main(["simplify", fx("mazur_double.hgd"), "--budget", "50"])
    assert rc == 0


def test_compile_surgery(tmp_path, capsys):
    out = tmp_path / "wu_alpha.ddc"
    rc = main(["compile", "surgery", fx("wu.hgd"), "--side", "alpha", "-o", str(out)])
    assert rc == 0
    text = out.read_text()
    assert "component ua dotted" in text


def test_compile_one_surgery(tmp_path):
    out = tmp_path / "g2.ddc"
    rc = main(
        [
            "compile",
            "one-surgery",
            fx("s1xs3_gamma2.ddc"),
            "--circle",
            "c",
            "--framing",
            "0",
            "-o",
            str(out),
        ]
    )
    assert rc == 0
    assert "cm1" in out.read_text()


def test_report_writes_tsv_and_figure(tmp_path, capsys):
    rc = main(["report", fx("wu.hgd"), "--out", str(tmp_path), "--kind", "closed"])
    assert rc == 0
    tsv = tmp_path / "wu.tsv"
    assert tsv.exists()
    assert "h2\tZ/2" in tsv.read_text()
    assert (tmp_path / "wu.png").exists()


def test_figures_flag(tmp_path, capsys):
    rc = main(["invariants", fx("mazur.ddc"), "--figures", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "mazur.png").exists()
