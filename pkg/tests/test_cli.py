import json
import subprocess
import sys

import pytest

from msokit.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spec_examples(capsys):
    assert run(capsys, "equiv", "--alphabet", "a", "--k", "1", "--w1", "aa", "--w2", "aaa")[:2] == (0, "true\n")
    assert run(capsys, "eval", "--alphabet", "ab", "--word", "", "--formula", "ex X. !(X = empty)")[:2] == (1, "false\n")
    code, out, _ = run(capsys, "duality", "--alphabet", "a", "--k", "1")
    assert code == 0 and "R_+ = graph: true" in out and "points: 3" in out


def test_witness(capsys):
    code, out, _ = run(capsys, "witness", "--alphabet", "a", "--k", "1", "--w1", "a", "--w2", "aa")
    assert code == 0
    assert out.splitlines()[0] == 'Spoiler plays X1 = {0,1} in mso("aa")'
    assert out.splitlines()[1].startswith("  Duplicator answers")
    code, out, _ = run(capsys, "witness", "--alphabet", "a", "--k", "1", "--w1", "aa", "--w2", "aaa")
    assert code == 1 and out.startswith("none")
    code, out, _ = run(capsys, "witness", "--alphabet", "a", "--w1", "a", "--w2", "aa", "--format", "json")
    assert json.loads(out)["strategy"]["spoiler"] == {"side": 2, "element": "{0,1}"}


def test_compile_and_accepts(capsys, tmp_path):
    path = tmp_path / "d.json"
    code, out, _ = run(capsys, "compile", "--formula", "ex x. P_b(x)", "--out", str(path))
    assert code == 0 and out.startswith("states: 2")
    data = json.loads(path.read_text())
    assert set(data) == {"alphabet", "states", "start", "accepting", "delta"}
    assert run(capsys, "accepts", "--dfa", str(path), "--word", "aab")[:2] == (0, "true\n")
    assert run(capsys, "accepts", "--dfa", str(path), "--word", "aa")[:2] == (1, "false\n")
    code, out, _ = run(capsys, "compile", "--formula", "ex x. P_b(x)", "--format", "json")
    assert json.loads(out) == data


def test_monoid_omega_member(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = run(capsys, "monoid", "--alphabet", "a", "--k", "1", "--out", str(path))
    assert code == 0
    assert json.loads(path.read_text()) == {"size": 3, "identity": 0,
                                            "table": [[0, 1, 2], [1, 2, 2], [2, 2, 2]],
                                            "reps": ["", "a", "aa"]}
    code, out, _ = run(capsys, "omega", "--alphabet", "a", "--k", "1", "--term", "(a)^w")
    assert (code, out) == (0, 'k=1: element 2 (representative "aa")\n')
    code, out, _ = run(capsys, "member", "--dfa", "fixture:even-length-a", "--term", "(a)^w")
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, "member", "--alphabet", "ab", "--formula", "ex x. P_b(x)",
                       "--term", "a^w", "--format", "json")
    assert code == 1 and json.loads(out)["via"] == "S_1"


def test_cofinal_k_and_axioms(capsys):
    code, out, _ = run(capsys, "cofinal-k", "--dfa", "fixture:contains-ab")
    assert code == 0 and out.splitlines()[0] == "6" and "exceeds the EF caps" in out
    assert "refinement: pass" in out
    code, out, _ = run(capsys, "cofinal-k", "--dfa", "fixture:sigma-star", "--no-check")
    assert (code, out) == (0, "0\n")
    code, out, _ = run(capsys, "axioms", "--word", "abb", "--formula", "P_a(x)")
    assert code == 0 and "comprehension[0]" in out and out.endswith("overall: pass\n")


def test_exit_codes(capsys):
    matrix = [
        (["eval", "--word", "ab", "--formula", "ex x. P_c(x)"], 2),
        (["eval", "--word", "ab"], 2),
        (["eval", "--word", "ab", "--formula", "at(X)"], 2),
        (["accepts", "--dfa", "/nonexistent.json", "--word", "a"], 2),
        (["member", "--dfa", "fixture:nope", "--term", "a"], 2),
        (["omega", "--alphabet", "a", "--term", "(a"], 2),
        (["equiv", "--alphabet", "a", "--k", "3", "--w1", "aaaaaaaaa", "--w2", "a"], 3),
        (["monoid", "--alphabet", "ab", "--k", "2"], 3),
        (["eval", "--word", "abababababababab", "--formula", "ex X. at(X)"], 3),
        (["equiv", "--alphabet", "a", "--w1", "aaaaaaaaaaaaa", "--w2", "a", "--max-positions", "13"], 1),
    ]
    for argv, expected in matrix:
        assert run(capsys, *argv)[0] == expected, argv
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_determinism(capsys):
    first = run(capsys, "witness", "--alphabet", "ab", "--k", "2", "--w1", "ab", "--w2", "ba")
    second = run(capsys, "witness", "--alphabet", "ab", "--k", "2", "--w1", "ab", "--w2", "ba")
    assert first == second


def test_help_lists_flags():
    parser = build_parser()
    text = parser.format_help()
    for cmd in ["eval", "compile", "accepts", "equiv", "witness", "monoid", "omega", "member",
                "cofinal-k", "duality", "axioms", "selftest"]:
        assert cmd in text
    sub = parser._subparsers._group_actions[0].choices
    flags = set()
    for p in sub.values():
        flags |= {s for a in p._actions for s in a.option_strings}
    for flag in ["--alphabet", "--k", "--word", "--w1", "--w2", "--formula", "--dfa", "--term",
                 "--out", "--format", "--seed", "--max-positions"]:
        assert flag in flags


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "msokit.cli", "equiv", "--alphabet", "a",
                           "--k", "1", "--w1", "aa", "--w2", "aaa"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "true\n"
