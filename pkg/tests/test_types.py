import random

import pytest
from hypothesis import given, strategies as st

from linear_bohm.corpus import lookup
from linear_bohm.syntax import App, parse_term
from linear_bohm.types import (
    B_HM,
    B_SEQ,
    ClashError,
    Lolli,
    OccursCheckError,
    PolyTypingError,
    Tensor,
    TVar,
    TypingError,
    apply_subst,
    arrows,
    check_poly_typable,
    check_typing,
    compose_poly,
    implicational_order,
    infer_principal_type,
    instance_of,
    parse_type,
    pretty_type,
    principal_type,
    type_vars,
    types_equal,
    unify,
)
from termgen import closed_terms

BB = parse_type("B_HM -> B_HM")


def ty(s):
    return parse_type(s)


def test_type_grammar():
    assert ty("'a * 'b -> 'c") == Lolli(Tensor(TVar("a"), TVar("b")), TVar("c"))
    assert ty("'a -> 'b -> 'c") == Lolli(TVar("a"), Lolli(TVar("b"), TVar("c")))
    assert pretty_type(ty("('a -> 'a) -> 'a")) == "('a -> 'a) -> 'a"


def test_unify_variable():
    theta = unify(ty("'a"), ty("'b -> 'b"))
    assert theta == {"a": ty("'b -> 'b")}


def test_unify_tensor_domain():
    theta = unify(ty("'a -> 'a"), ty("('b * 'c) -> 'd"))
    assert apply_subst(theta, TVar("a")) == ty("'b * 'c")
    assert apply_subst(theta, TVar("d")) == ty("'b * 'c")


def test_occurs_check():
    with pytest.raises(OccursCheckError):
        unify(ty("'a"), ty("'a -> 'b"))


def test_clash():
    with pytest.raises(ClashError):
        unify(ty("'a * 'b"), ty("'a -> 'b"))


def test_principal_types_of_booleans():
    assert pretty_type(principal_type(lookup("True"))) == "'a -> 'b -> ('a -> 'b -> 'c) -> 'c"
    assert pretty_type(principal_type(lookup("False"))) == "'a -> 'b -> ('b -> 'a -> 'c) -> 'c"


def test_let_of_function_is_untypable():
    with pytest.raises(TypingError):
        infer_principal_type(parse_term("let val (x,y)=fn z=>z in (x,y) end"))


def test_open_term_context():
    ctx, a = infer_principal_type(parse_term("f x"))
    assert ctx.names() == ["f", "x"]
    assert pretty_type(a) == "'b"


def test_check_typing():
    assert check_typing((), lookup("I"), BB)
    assert not check_typing((), lookup("Not_POLY"), BB)
    assert check_typing((), lookup("True"), B_HM)


def test_instance_of():
    assert instance_of(B_HM, ty("'a")) == {"a": B_HM}
    assert instance_of(ty("'a"), B_HM) is None
    a0 = ty("B_HM -> B_HM -> (B_HM -> B_HM -> B_HM) -> B_HM")
    assert instance_of(a0, principal_type(lookup("True"))) is not None


def test_implicational_order():
    assert implicational_order(ty("'a")) == 1
    assert implicational_order(ty("'a -> 'a")) == 2
    assert implicational_order(B_HM) == 3
    assert implicational_order(B_SEQ) == 3
    with pytest.raises(ValueError):
        implicational_order(ty("'a * 'a"))


def test_not_poly_is_poly_typable():
    for arg in ("True", "False"):
        cert = check_poly_typable(lookup("Not_POLY"), BB, [lookup(arg)])
        assert cert.recheck() and cert.verify()


def test_plain_typing_is_a_special_case():
    assert check_poly_typable(lookup("I"), BB, [lookup("True")]).verify()


def test_true_is_not_poly_typable_as_function():
    with pytest.raises(PolyTypingError):
        check_poly_typable(lookup("True"), BB, [lookup("True")])


def test_certificate_consequence():
    """t s types at B: the application's principal type has B as an instance."""
    for arg in ("True", "False"):
        s = lookup(arg)
        check_poly_typable(lookup("Not_POLY"), BB, [s])
        assert check_typing((), App(lookup("Not_POLY"), s), B_HM)


def test_compose_not_poly_twice():
    not_poly = lookup("Not_POLY")
    t, f = lookup("True"), lookup("False")
    from linear_bohm.rewrite import equal_beta_eta_c
    from linear_bohm.types import certify

    first = certify(not_poly, BB, [[t], [f]])
    second = certify(not_poly, BB, [[App(not_poly, t)], [App(not_poly, f)]])
    cert = compose_poly(first, second)
    assert cert.verify()
    for s in (t, f):
        assert equal_beta_eta_c(App(cert.subject, s), s)


def test_compose_identity():
    i = lookup("I")
    t = lookup("True")
    first = check_poly_typable(i, BB, [t])
    second = check_poly_typable(i, BB, [App(i, t)])
    assert compose_poly(first, second).verify()


def test_compose_mismatched_middle_type():
    i = lookup("I")
    first = check_poly_typable(i, BB, [lookup("True")])
    second = check_poly_typable(i, parse_type("B_Seq -> B_Seq"), [lookup("TrSeq")])
    with pytest.raises(PolyTypingError):
        compose_poly(first, second)


ground = st.sampled_from([ty("'a"), ty("'a -> 'a"), B_HM, ty("'a * 'a")])


@given(closed_terms(), st.data())
def test_principality(t, data):
    a = principal_type(t)
    theta = {v: data.draw(ground) for v in type_vars(a)}
    assert check_typing((), t, apply_subst(theta, a))


@given(closed_terms())
def test_subject_reduction(t):
    from linear_bohm.rewrite import reduce_randomly

    a = principal_type(t)
    out, _ = reduce_randomly(t, random.Random(0))
    assert check_typing((), out, a)


def test_pretty_types_equal():
    assert types_equal(arrows(TVar("a"), TVar("a")), ty("'a -> 'a"))
