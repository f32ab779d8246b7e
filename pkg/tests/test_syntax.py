import pytest
from hypothesis import given

from linear_bohm.corpus import hm_program, seq_program
from linear_bohm.syntax import (
    App,
    Hole,
    Lam,
    LetPair,
    Pair,
    ProgramError,
    SubstitutionError,
    SyntaxErrorWithSpan,
    Var,
    alpha_eq,
    bound_vars,
    captured_vars,
    free_vars,
    is_linear,
    linearity_check,
    parse_program,
    parse_term,
    pretty,
    substitute,
)
from termgen import closed_terms


def test_parse_identity():
    assert parse_term("fn x=>x") == Lam("x", Var("x"))


def test_parse_let_pair():
    t = parse_term("let val (x,y)=(u,v) in (y,x) end")
    assert t == LetPair("x", "y", Pair(Var("u"), Var("v")), Pair(Var("y"), Var("x")))


def test_let_without_end():
    assert parse_term("let val (x,y) = t in (x,y)") == parse_term("let val (x,y) = t in (x,y) end")


def test_application_is_left_associative_and_fn_extends_right():
    assert parse_term("f a b") == App(App(Var("f"), Var("a")), Var("b"))
    assert parse_term("fn x=>f x") == Lam("x", App(Var("f"), Var("x")))


def test_primed_and_underscored_names():
    t = parse_term("fn x'=>u_2 x'")
    assert t.binder == "x'"


def test_duplicate_let_binders_rejected():
    with pytest.raises(SyntaxErrorWithSpan):
        parse_term("let val (x,x) = p in x end")


def test_syntax_error_carries_span():
    with pytest.raises(SyntaxErrorWithSpan) as info:
        parse_term("fn x=>")
    assert info.value.span is not None
    assert info.value.span.start == 6


def test_double_use_parses_but_is_not_linear():
    t = parse_term("fn x=>(x,x)")
    report = linearity_check(t)
    assert not report.ok
    assert report.violations[0].name == "x"


def test_unused_variable_reported():
    report = linearity_check(parse_term("fn x=>fn y=>x"))
    assert [(v.name, v.kind) for v in report.violations] == [("y", "unused")]


def test_identity_is_linear():
    assert linearity_check(parse_term("fn x=>x")).ok


@pytest.mark.parametrize("prog", [hm_program, seq_program])
def test_corpus_declarations_are_linear(prog):
    p = prog()
    for name in p.names():
        assert is_linear(p[name]), name


def test_fun_sugar():
    p = parse_program("fun True x y z = z x y;\nfun I x = x;")
    assert alpha_eq(p["True"], parse_term("fn x=>fn y=>fn z=>z x y"))
    assert alpha_eq(p["I"], parse_term("fn x=>x"))


def test_undefined_reference():
    with pytest.raises(ProgramError):
        parse_program("fun f x = g x;")


def test_redefinition():
    with pytest.raises(ProgramError):
        parse_program("fun I x = x;\nfun I y = y;")


def test_nonlinear_declaration():
    with pytest.raises(ProgramError):
        parse_program("fun K x y = x;")


def test_alpha_eq():
    assert alpha_eq(parse_term("fn x=>x"), parse_term("fn y=>y"))
    assert not alpha_eq(parse_term("fn x=>fn y=>x y"), parse_term("fn x=>fn y=>y x"))
    p = hm_program()
    assert not alpha_eq(p["True"], p["False"])


def test_substitute():
    true = hm_program()["True"]
    assert substitute(parse_term("z x y"), "x", true) == App(App(Var("z"), true), Var("y"))
    s = parse_term("fn q=>q")
    assert substitute(Var("x"), "x", s) == s
    with pytest.raises(SubstitutionError):
        substitute(parse_term("fn y=>y"), "x", s)


def test_substitute_avoids_capture():
    t = substitute(parse_term("fn y=>x y"), "x", Var("y"))
    assert free_vars(t) == {"y"}
    assert is_linear(t)


def test_bound_free_captured():
    assert bound_vars(parse_term("fn x=>t x")) == {"x"}
    assert free_vars(parse_term("fn x=>x")) == set()
    ctx = LetPair("x", "y", Var("t"), Hole())
    assert captured_vars(ctx) == {"x", "y"}


@given(closed_terms())
def test_pretty_round_trip(t):
    assert alpha_eq(parse_term(pretty(t)), t)


@given(closed_terms(), closed_terms())
def test_substitution_preserves_linearity(t, s):
    body = App(Var("h"), t)
    out = substitute(Lam("k", App(Var("k"), body)).body, "h", s)
    assert linearity_check(Lam("k", out)).ok
