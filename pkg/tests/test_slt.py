import itertools

import pytest
from hypothesis import given, strategies as st

from linear_bohm import slt
from linear_bohm.corpus import lookup
from linear_bohm.slt import (
    Assignment,
    Const,
    FirstVar,
    Proj,
    SecondApp,
    SltError,
    eval_slt,
    parse_slt,
    separate,
    separate_naive,
    slt_to_term,
    term_to_slt,
)
from linear_bohm.syntax import alpha_eq, parse_term


def test_parse_and_print():
    t = parse_slt("G2(x1, G1(x2))")
    assert t == SecondApp("G2", (FirstVar("x1"), SecondApp("G1", (FirstVar("x2"),))))
    assert str(t) == "G2(x1, G1(x2))"


def test_eval_clauses():
    assert eval_slt(FirstVar("x"), Assignment.of({"x": 1})) == 1
    assert eval_slt(parse_slt("G(x)"), Assignment.of({"x": 1}, {"G": Const(0)})) == 0
    assert eval_slt(parse_slt("G(x, y)"), Assignment.of({"x": 0, "y": 1}, {"G": Proj(2)})) == 1


def test_eval_uncovered_variable():
    with pytest.raises(SltError):
        eval_slt(parse_slt("G(x)"), Assignment.of({"x": 1}))


def test_assignment_format():
    a = Assignment.of({"x1": 0, "x2": 1}, {"G1": Proj(1), "G2": Const(0)})
    assert str(a) == "x1=0 x2=1 ; G1=P1 G2=C0"


def test_separate_var_from_application():
    a = separate(parse_slt("x"), parse_slt("G(x)"))
    assert str(a) == "x=1 ; G=C0"


def test_separate_swapped_arguments():
    a = separate(parse_slt("G(x, y)"), parse_slt("G(y, x)"))
    assert a.second("G") == Proj(1)
    assert (a.first("x"), a.first("y")) == (0, 1)


def test_separate_self_is_an_error():
    with pytest.raises(SltError):
        separate(parse_slt("G(x)"), parse_slt("G(x)"))


def test_repeated_second_order_variable_rejected():
    assert not slt.is_well_formed(parse_slt("f(f(f(x)))"))
    with pytest.raises(SltError):
        separate(parse_slt("f(x)"), parse_slt("f(f(f(x)))"))


def test_shared_first_order_variable_rejected():
    assert not slt.is_well_formed(parse_slt("G(x, x)"))


VOCAB = (["x", "y", "z"], {"F": 2, "G": 1})


def test_agrees_with_reference_search():
    terms = list(slt.enumerate_slt(*VOCAB))
    for a, b in itertools.permutations(terms, 2):
        assert separate(a, b) == separate_naive(a, b)


def test_kernels_agree():
    from linear_bohm import _slt_kernel_py

    terms = list(slt.enumerate_slt(["x", "y", "z"], {"E": 1, "G": 2, "H": 3}))
    for a, b in itertools.islice(itertools.permutations(terms, 2), 3000):
        assert separate(a, b) == separate(a, b, kernel=_slt_kernel_py)


def test_wide_vocabulary_falls_back():
    # seven first-order variables exceed the compiled kernel's word size
    xs = [f"x{i}" for i in range(7)]
    a = SecondApp("G", tuple(FirstVar(x) for x in xs))
    b = SecondApp("G", tuple(FirstVar(x) for x in reversed(xs)))
    rho = separate(a, b)
    assert eval_slt(a, rho) != eval_slt(b, rho)


def test_true_skeleton():
    sk = term_to_slt(lookup("True"))
    assert str(sk) == "(x, y; z/2; body z(x, y))"


def test_identity_skeleton():
    sk = term_to_slt(parse_term("fn x=>x"))
    assert sk.header == (("x", 0),)
    assert sk.body == FirstVar("x")


def test_pair_is_not_a_skeleton():
    with pytest.raises(SltError):
        term_to_slt(parse_term("fn x=>fn y=>(x,y)"))


@pytest.mark.parametrize("name", ["True", "False", "I", "TrSeq", "FlSeq"])
def test_round_trip(name):
    t = lookup(name)
    assert alpha_eq(slt_to_term(term_to_slt(t)), t)


def test_eta_short_term_padded():
    sk = term_to_slt(parse_term("fn x=>x"), header=(1, 0))
    assert str(sk.body).startswith("x(")


def test_header_from_type():
    from linear_bohm.types import B_HM, B_SEQ

    assert slt.header_from_type(B_HM) == (0, 0, 2)
    assert slt.header_from_type(B_SEQ) == (0, 1, 1)


small_terms = st.sampled_from(list(slt.enumerate_slt(["x", "y"], {"F": 2, "G": 1, "H": 1})))


@given(small_terms, small_terms)
def test_separation_sound(a, b):
    if a == b:
        return
    rho = separate(a, b)
    assert eval_slt(a, rho) != eval_slt(b, rho)
    assert eval_slt(a, rho.dual()) != eval_slt(b, rho.dual())


def test_terms_with_closed_subterms_are_not_skeletons():
    with pytest.raises(SltError):
        term_to_slt(lookup("u_2"))
