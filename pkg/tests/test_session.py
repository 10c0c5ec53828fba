"""Session file grammar: tokens, AST, diagnostics, canonical printing."""

from pathlib import Path

import pytest

from semidual.session import (
    CorpusEntry,
    ExpectStmt,
    ModuleDecl,
    Num,
    ParseError,
    Paren,
    Pow,
    Prod,
    RingDecl,
    RunStmt,
    Sum,
    Value,
    Var,
    expr_to_str,
    parse_session,
    print_session,
    tokenize,
)

DATA = Path(__file__).parent / "data"
CORPUS = Path(__file__).parents[1] / "src" / "semidual" / "corpus"


def test_tokenizer_positions_and_comments():
    toks = tokenize("ring R { # comment\n  char 101;\n}")
    kinds = [(t.kind, t.value) for t in toks]
    assert kinds[0] == ("NAME", "ring")
    assert kinds[1] == ("NAME", "R")
    assert kinds[2] == ("PUNCT", "{")
    assert kinds[3] == ("NAME", "char")   # comment skipped
    char_tok = toks[3]
    assert (char_tok.line, char_tok.col) == (2, 3)
    assert toks[-1].kind == "EOF"


def test_tokenizer_strings():
    toks = tokenize('via "a \\"quoted\\" note";')
    assert toks[1].kind == "STRING"
    assert toks[1].value == 'a "quoted" note'
    with pytest.raises(ParseError):
        tokenize('"unterminated')
    with pytest.raises(ParseError):
        tokenize('"no\nnewlines"')
    with pytest.raises(ParseError):
        tokenize("ring @ {}")


def test_expression_shapes():
    spec = parse_session("run nf(R, -x + 2*y^2 - (x + y)*z);")
    (stmt,) = spec.statements
    arg = stmt.args[1]
    assert isinstance(arg, Sum)
    signs = [s for s, _ in arg.terms]
    assert signs == ["-", "+", "-"]
    assert arg.terms[1][1] == Prod((Num(2), Pow(Var("y"), 2)))
    assert arg.terms[2][1] == Prod((Paren(Sum((("+", Var("x")),
                                               ("+", Var("y"))))),
                                    Var("z")))
    assert expr_to_str(arg) == "-x + 2*y^2 - (x + y)*z"


def test_golden_ast():
    spec = parse_session((DATA / "example.sd").read_text())
    got = [repr(s) for s in spec.statements]
    want = (DATA / "golden_ast.txt").read_text().splitlines()
    assert got == want


def test_parse_print_parse_is_identity():
    files = sorted(DATA.glob("*.sd")) + sorted(CORPUS.glob("*.sd")) \
        + sorted((DATA / "wrong_expect").glob("*.sd"))
    checked = 0
    for f in files:
        text = f.read_text()
        try:
            spec = parse_session(text)
        except ParseError:
            continue  # the deliberate bad-syntax fixture
        printed = print_session(spec)
        assert parse_session(printed) == spec, f.name
        # and the printer is idempotent
        assert print_session(parse_session(printed)) == printed, f.name
        checked += 1
    assert checked >= 7


def test_syntax_error_position():
    text = (DATA / "bad_syntax.sd").read_text()
    with pytest.raises(ParseError) as err:
        parse_session(text)
    assert err.value.line == 8 and err.value.col == 17
    assert "expected ',' or ']'" in err.value.reason
    assert "';'" in err.value.reason


def test_more_syntax_errors():
    with pytest.raises(ParseError, match="expected keyword 'char'"):
        parse_session("ring R { vars x; }")
    with pytest.raises(ParseError, match="at least one variable"):
        parse_session("ring R { char 101; vars; }")
    with pytest.raises(ParseError, match="2 variables but 1 weights"):
        parse_session("ring R { char 101; vars x y; weights 3; }")
    with pytest.raises(ParseError, match="expected a statement"):
        parse_session("rung depth(M);")
    with pytest.raises(ParseError, match="path"):
        parse_session('corpus "c" { expect depth(M) = 1 via "x"; }')
    with pytest.raises(ParseError, match="keyword 'via'"):
        parse_session('corpus "c" { expect depth(M).depth = 1; }')
    with pytest.raises(ParseError, match="derivation note"):
        parse_session('corpus "c" { expect depth(M).depth = 1 via x; }')
    with pytest.raises(ParseError, match="3 entries for 2 generators"):
        parse_session("module M over R { gens deg 0 deg 0; "
                      "rels { [x, y, z]; } }")


def test_run_statement_forms():
    spec = parse_session(
        "run gb(R);\n"
        "run verify-ab(C, Y) { ext_bound 8; seed -1; format json; }\n")
    first, second = spec.statements
    assert first == RunStmt("gb", (Var("R"),), ())
    assert second.command == "verify-ab"
    assert second.config == (("ext_bound", Value("int", 8)),
                             ("seed", Value("int", -1)),
                             ("format", Value("name", "json")))


def test_corpus_entry_shape():
    spec = parse_session(
        'corpus "demo" {\n'
        "    ring R { char 101; vars x; }\n"
        "    module C over R { gens deg 0; }\n"
        "    config { seed 7; }\n"
        '    expect depth(R).depth = 1 via "hand";\n'
        '    expect resolve(C).betti.0 = 1 via "free";\n'
        "}\n")
    (entry,) = spec.statements
    assert isinstance(entry, CorpusEntry)
    assert entry.name == "demo"
    assert [type(s) for s in entry.statements] == [RingDecl, ModuleDecl]
    assert entry.config == (("seed", Value("int", 7)),)
    assert entry.expects[0].path == ("depth",)
    assert entry.expects[1].path == ("betti", 0)
    assert entry.expects[1].via == "free"


def test_printer_emits_minimal_forms():
    spec = parse_session("ring R { char 101; vars x; }\nrun gb(R);")
    out = print_session(spec)
    assert "run gb(R);" in out
    assert "weights" not in out
    assert "ideal" not in out


def test_negative_degrees_round_trip():
    text = "module M over R {\n    gens deg -1 deg 0;\n}\n"
    spec = parse_session(text)
    assert spec.statements[0].gen_degrees == (-1, 0)
    assert parse_session(print_session(spec)) == spec
