"""Command line behaviour: subcommands, output formats, exit codes."""

import json
from pathlib import Path

import pytest

from semidual.cli import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_VERIFICATION,
    main,
)

DATA = Path(__file__).parent / "data"


def _write(tmp_path, text, name="session.sd"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


BASIC = """\
ring R {
    char 101;
    vars x y;
}

module k over R {
    gens deg 0;
    rels { [x]; [y]; }
}

run depth(k);
"""


def test_run_text_output(tmp_path, capsys):
    code = main(["run", _write(tmp_path, BASIC)])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "depth: 0" in out
    assert "method: ext_k" in out


def test_run_json_output(tmp_path, capsys):
    path = _write(tmp_path, "ring R { char 101; vars x y; }\n"
                            "run gb(R) { format json; }\n")
    code = main(["run", path])
    assert code == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep == {"ring": "R", "basis": [], "size": 0, "dimension": 2}


def test_run_missing_file(capsys):
    assert main(["run", "/nonexistent/nope.sd"]) == EXIT_INPUT
    assert "input error" in capsys.readouterr().err


def test_run_syntax_error_position(capsys):
    code = main(["run", str(DATA / "bad_syntax.sd")])
    err = capsys.readouterr().err
    assert code == EXIT_INPUT
    assert "8:17" in err
    assert "expected ',' or ']'" in err


def test_run_undefined_name(tmp_path, capsys):
    path = _write(tmp_path, "module M over S { gens deg 0; }\n")
    assert main(["run", path]) == EXIT_INPUT
    assert "undefined ring 'S'" in capsys.readouterr().err


def test_run_semantic_degree_mismatch(tmp_path, capsys):
    path = _write(tmp_path,
                  "ring R { char 101; vars x y; }\n"
                  "module M over R { gens deg 0 deg 0; rels { [x, x^2]; } }\n")
    assert main(["run", path]) == EXIT_INPUT
    assert "degree mismatch" in capsys.readouterr().err


def test_run_truncation_exit_code(capsys):
    code = main(["run", str(DATA / "truncation.sd")])
    err = capsys.readouterr().err
    assert code == EXIT_RESOURCE
    assert "no finite C-dimension" in err


def test_run_failed_certificate_exit_code(capsys):
    code = main(["run", str(DATA / "failed_cert.sd")])
    out = capsys.readouterr().out
    assert code == EXIT_VERIFICATION
    rep = json.loads(out)
    assert rep["verdict"] == "failed"
    assert rep["condition_i"]["end_minimal_generators"] == 4


def test_ext_bound_env_and_config(tmp_path, capsys, monkeypatch):
    session = ("ring R { char 101; vars x; }\n"
               "run check-semidualizing(R) { format json; }\n")
    path = _write(tmp_path, session)

    monkeypatch.delenv("SEMIDUAL_EXT_BOUND", raising=False)
    assert main(["run", path]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)[
        "condition_ii"]["ext_bound"] == 4   # default 2*vars + 2

    monkeypatch.setenv("SEMIDUAL_EXT_BOUND", "3")
    assert main(["run", path]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)[
        "condition_ii"]["ext_bound"] == 3   # env overrides the default

    path2 = _write(tmp_path,
                   "ring R { char 101; vars x; }\n"
                   "run check-semidualizing(R) "
                   "{ ext_bound 5; format json; }\n",
                   name="explicit.sd")
    assert main(["run", path2]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)[
        "condition_ii"]["ext_bound"] == 5   # config overrides the env

    monkeypatch.setenv("SEMIDUAL_EXT_BOUND", "junk")
    assert main(["run", path]) == EXIT_INPUT


def test_split_session(tmp_path, capsys):
    session = ("ring R { char 101; vars x y; }\n"
               "module C over R { gens deg 0; }\n"
               "matrix T over R {\n"
               "    rowdegs 0;\n"
               "    coldegs 0 1;\n"
               "    cols { [1]; [x]; }\n"
               "}\n"
               "run split(T, C) { format json; }\n")
    assert main(["run", _write(tmp_path, session)]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["section"] == [["1"], ["0"]]
    assert rep["image_rank"] == 1 and rep["complement_rank"] == 1
    assert all(rep["identities"].values())
    assert all(rep["power_check"].values())


def test_fmt_canonical_and_idempotent(tmp_path, capsys):
    assert main(["fmt", str(DATA / "example.sd")]) == EXIT_OK
    once = capsys.readouterr().out
    p = tmp_path / "canon.sd"
    p.write_text(once)
    assert main(["fmt", str(p)]) == EXIT_OK
    assert capsys.readouterr().out == once
    assert main(["fmt", str(DATA / "bad_syntax.sd")]) == EXIT_INPUT
    capsys.readouterr()


def test_corpus_filter_no_match(capsys):
    assert main(["corpus", "--filter", "no-such-entry"]) == EXIT_OK
    assert "0 entries" in capsys.readouterr().out


def test_corpus_single_entry(capsys):
    assert main(["corpus", "--filter", "poly-x"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS poly-x" in out
    assert "all passed" in out


def test_corpus_json_deterministic(capsys):
    assert main(["corpus", "--filter", "poly-x", "--json"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["corpus", "--filter", "poly-x", "--json"]) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    summary = json.loads(first)
    assert summary["all_passed"] is True
    assert summary["entries"][0]["name"] == "poly-x"
    assert summary["entries"][0]["config"] == {"seed": 0, "ext_bound": 4}


def test_corpus_wrong_expectation_fixture(capsys):
    code = main(["corpus", "--dir", str(DATA / "wrong_expect"), "--json"])
    summary = json.loads(capsys.readouterr().out)
    assert code == EXIT_VERIFICATION
    assert summary["all_passed"] is False
    checks = summary["entries"][0]["checks"]
    failing = [c for c in checks if not c["pass"]]
    assert len(failing) == 1
    assert failing[0]["expect"] == "depth(R).depth"
    assert failing[0]["expected"] == 2 and failing[0]["actual"] == 1


def test_corpus_bad_dir(capsys):
    assert main(["corpus", "--dir", "/nonexistent"]) == EXIT_INPUT
    capsys.readouterr()


def test_run_rejects_corpus_blocks(tmp_path, capsys):
    path = _write(tmp_path, 'corpus "c" { config { seed 0; } }\n')
    assert main(["run", path]) == EXIT_INPUT
    assert "semidual corpus" in capsys.readouterr().err


def test_unknown_command(tmp_path, capsys):
    path = _write(tmp_path, "ring R { char 101; vars x; }\nrun bogus(R);\n")
    assert main(["run", path]) == EXIT_INPUT
    assert "unknown command" in capsys.readouterr().err
