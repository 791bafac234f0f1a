import subprocess
import sys

import pytest

from k3glue.cli import main

L1_TEXT = "rank 2\ngram\n6002 3001\n3001 -6002\nisometry\n1 1\n1 2\n"


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="ascii")
    return str(path)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "k3glue", "trace-set", "--max", "20"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "2 3 7 14 18\n"


def test_trace_set(capsys):
    code, out, _ = run(capsys, "trace-set", "--max", "200")
    assert code == 0
    assert out == (
        "2 3 7 14 18 23 34 38 47 62 66 79 83 98 102 119 123 142 146 167 194 198\n"
    )


def test_certify_machine_output(capsys):
    code, out, _ = run(capsys, "certify-k3", "--machine")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "format k3glue.certification.v1"
    assert lines[1] == "verdict pass"
    assert lines[2] == "checks 46"
    code2, out2, _ = run(capsys, "certify-k3", "--machine")
    assert out2 == out


def test_certify_text_output(capsys):
    code, out, _ = run(capsys, "certify-k3")
    assert code == 0
    assert out.rstrip().endswith("46 checks, 0 failed: PASS")


def test_gram_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gram", "--which", "L1")
    assert code == 0
    assert out == L1_TEXT
    path = write(tmp_path, "l1.lat", out)
    code, info, _ = run(capsys, "lattice-info", path)
    assert code == 0
    lines = info.splitlines()
    assert "rank 2" in lines
    assert "even yes" in lines
    assert "det -45030005" in lines
    assert "signature (1,1)" in lines
    assert "glue_orders (3001,15005)" in lines
    assert "isometry_charpoly X^2-3X+1" in lines


def test_glue_recovers_the_certified_lattice(capsys, tmp_path):
    code, l1_text, _ = run(capsys, "gram", "--which", "L1")
    code2, l2_text, _ = run(capsys, "gram", "--which", "L2")
    code3, k3_text, _ = run(capsys, "gram", "--which", "K3")
    assert code == code2 == code3 == 0
    f1 = write(tmp_path, "l1.lat", l1_text)
    f2 = write(tmp_path, "l2.lat", l2_text)
    code, glued, _ = run(capsys, "glue", f1, f2)
    assert code == 0
    assert glued == k3_text


def test_glue_obstruction_exits_1(capsys, tmp_path):
    path = write(tmp_path, "a1.lat", "rank 1\ngram\n2\n")
    code, _, err = run(capsys, "glue", path, path)
    assert code == 1
    assert "no glue map" in err
    assert "form mismatch" in err


def test_glue_toy_pair(capsys, tmp_path):
    f1 = write(tmp_path, "p.lat", "rank 1\ngram\n2\n")
    f2 = write(tmp_path, "m.lat", "rank 1\ngram\n-2\n")
    code, out, _ = run(capsys, "glue", f1, f2)
    assert code == 0
    parsed_rank = out.splitlines()[0]
    assert parsed_rank == "rank 2"


def test_twist(capsys, tmp_path):
    path = write(tmp_path, "l1.lat", L1_TEXT)
    code, out, _ = run(capsys, "twist", path, "--poly", "3")
    assert code == 0
    assert out == "rank 2\ngram\n18006 9003\n9003 -18006\nisometry\n1 1\n1 2\n"
    code, _, err = run(capsys, "twist", path, "--poly", "0,1")
    assert code == 1
    assert "self-adjoint" in err
    bare = write(tmp_path, "bare.lat", "rank 1\ngram\n2\n")
    code, _, err = run(capsys, "twist", bare, "--poly", "3")
    assert code == 2
    assert "isometry" in err


def test_table1_output(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "digits 5"
    assert lines[1] == "label 1 sign - value -0.11372"
    assert lines[-1] == "positive_labels 7"
    assert sum(1 for x in lines if x.startswith("label ")) == 10
    code, out, _ = run(capsys, "table1", "--digits", "7")
    assert out.splitlines()[1] == "label 1 sign - value -0.1137230"


def test_table1_env_digits(capsys, monkeypatch):
    monkeypatch.setenv("K3GLUE_DIGITS", "6")
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert out.splitlines()[0] == "digits 6"
    monkeypatch.setenv("K3GLUE_DIGITS", "zero")
    code, _, err = run(capsys, "table1")
    assert code == 2
    assert "K3GLUE_DIGITS" in err
    # an explicit flag wins over the environment
    monkeypatch.setenv("K3GLUE_DIGITS", "9")
    code, out, _ = run(capsys, "table1", "--digits", "4")
    assert out.splitlines()[0] == "digits 4"


def test_cross_validate(capsys):
    code, out, _ = run(capsys, "cross-validate", "--max", "30")
    assert code == 0
    assert out.endswith("mismatches 0\n")
    assert "tau=11 closed_form=no routes=l2 witness=- note=necessary passed, no witness" in out


def test_bad_inputs_exit_2(capsys, tmp_path):
    asym = write(tmp_path, "asym.lat", "rank 2\ngram\n0 1\n2 0\n")
    code, _, err = run(capsys, "lattice-info", asym)
    assert code == 2
    assert "input error" in err
    code, _, err = run(capsys, "lattice-info", str(tmp_path / "missing.lat"))
    assert code == 2


def test_bad_flags_exit_2():
    # argparse exits through SystemExit with code 2
    for argv in (
        ["no-such-command"],
        ["trace-set"],
        ["trace-set", "--max", "-5"],
        ["table1", "--digits", "0"],
        ["twist", "x.lat", "--poly", "a,b"],
        ["gram", "--which", "L9"],
        [],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
