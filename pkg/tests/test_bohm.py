import itertools

import pytest

from linear_bohm import bohm
from linear_bohm.corpus import lookup
from linear_bohm.inhabit import inhabitants
from linear_bohm.rewrite import equal_beta_eta_c
from linear_bohm.syntax import App, alpha_eq, app, is_linear, parse_term, tuple_term
from linear_bohm.types import B_HM, B_SEQ, Tensor, implicational_order, parse_type

I = parse_term("fn x=>x")
TRUE, FALSE = lookup("True"), lookup("False")
TR, FL = lookup("TrSeq"), lookup("FlSeq")
ORDER4 = parse_type("(('a->'a)->'a->'a)->('a->'a)->'a->'a")


def eq(a, b):
    return equal_beta_eta_c(a, b)


def test_ldtr_identity_for_low_order():
    r = bohm.ldtr(B_HM)
    assert r.identity and r.target == B_HM and r.order == 3


def test_ldtr_pair_is_corpus_transformer():
    r = bohm.ldtr(Tensor(B_HM, B_HM))
    assert r.name == "LDTr_Pair"
    assert alpha_eq(r.transformer, lookup("LDTr_Pair"))
    assert r.order < 4


def test_ldtr_unsupported():
    with pytest.raises(bohm.UnsupportedTypeError) as info:
        bohm.ldtr(parse_type("('a * 'a -> 'a) -> 'a"))
    assert info.value.subformula is not None


def test_ldtr_generic_pair():
    a = Tensor(B_SEQ, B_HM)
    r = bohm.ldtr(a, probes=[tuple_term([s, t]) for s in (TR, FL) for t in (TRUE, FALSE)])
    assert r.order < 4


def test_ldtr_curries_order_four():
    assert implicational_order(ORDER4) == 4
    r = bohm.ldtr(ORDER4)
    assert r.name == "curry" and r.order < 4
    probes = inhabitants(ORDER4, 30)
    assert len(probes) == 3
    r.check_injective(probes)
    assert len({r.skeleton(p).body for p in probes}) == 3


def test_register_ldtr():
    pattern = parse_type("B_HM * B_Seq")
    transformer = parse_term(
        "fn p=>fn x=>fn y=>fn f=>fn z=>fn g=>fn h=>fn l=>let val (u,v)=p in l (u x y f) (v z g h) end"
    )
    probes = [tuple_term([t, s]) for t in (TRUE, FALSE) for s in (TR, FL)]
    r = bohm.register_ldtr("hm_seq", pattern, transformer, probes)
    assert bohm.ldtr(pattern).name == "hm_seq"
    assert r.order < 4


def test_register_rejects_open_transformer():
    with pytest.raises(bohm.BohmError):
        bohm.register_ldtr("bad", B_HM, parse_term("fn p=>q p"))


def test_eraser_matches_reference_shape():
    assert alpha_eq(bohm.eraser(B_HM), parse_term("fn x0=>x0 (fn x=>x) (fn x=>x) (fn x1=>fn x2=>x1 (x2 (fn x=>x)))"))


def test_projection_term():
    t, cert = bohm.projection_term(B_HM, B_HM, TRUE)
    assert eq(App(t, TRUE), I) and eq(App(t, FALSE), I)
    assert cert.verify()


def test_projection_n_matches_proj_1():
    t, cert = bohm.projection_n(B_HM, 2, 1)
    assert eq(t, lookup("proj_1"))
    assert eq(app(t, TRUE, FALSE), TRUE)
    assert cert.verify()


def test_projection_n_unary_and_last():
    t1, _ = bohm.projection_n(B_HM, 1, 1)
    for s in (TRUE, FALSE):
        assert eq(App(t1, s), s)
    t3, _ = bohm.projection_n(B_HM, 3, 3)
    assert eq(app(t3, TRUE, TRUE, FALSE), FALSE)


def test_projection_index_out_of_range():
    with pytest.raises(bohm.BohmError):
        bohm.projection_n(B_HM, 2, 3)


def test_constant_term_is_const_f():
    t, cert = bohm.constant_term(B_HM, B_HM, FALSE)
    assert eq(t, lookup("const_F"))
    assert eq(App(t, TRUE), FALSE) and eq(App(t, FALSE), FALSE)
    assert cert.verify()


def test_constant_n():
    t, cert = bohm.constant_n(B_HM, 2, TR, B_SEQ)
    for a, b in itertools.product((TRUE, FALSE), repeat=2):
        assert eq(app(t, a, b), TR)
    assert cert.verify()


@pytest.mark.parametrize("a", [B_HM, B_SEQ, Tensor(B_HM, B_HM), ORDER4])
def test_projection_on_every_inhabitant(a):
    probes = inhabitants(a, 30)
    assert probes
    t, _ = bohm.projection_term(a, B_HM, probes[:1])
    for p in probes:
        assert eq(App(t, p), I)


def test_separator_not_gate():
    sep = bohm.separator(bohm.SeparatorSpec(B_HM, TRUE, FALSE, B_HM, FALSE, TRUE))
    not_hm = lookup("Not_HM")
    for s in (TRUE, FALSE):
        assert eq(App(sep.term, s), App(not_hm, s))
    assert sep.certificate.verify()
    assert is_linear(sep.term)
    term, cert = sep
    assert term is sep.term


def test_separator_constant_outputs():
    t, _ = bohm.separator(bohm.SeparatorSpec(B_HM, TRUE, FALSE, B_SEQ, TR, TR))
    assert eq(App(t, TRUE), TR) and eq(App(t, FALSE), TR)


def test_separator_seq():
    t, cert = bohm.separator(bohm.SeparatorSpec(B_SEQ, TR, FL, B_SEQ, FL, TR))
    assert eq(App(t, TR), FL) and eq(App(t, FL), TR)
    assert cert.verify()


def test_separator_rejects_equal_inputs():
    with pytest.raises(bohm.BohmError):
        bohm.separator(bohm.SeparatorSpec(B_HM, TRUE, App(I, TRUE), B_HM, TRUE, FALSE))


def test_separator_rejects_ill_typed_output():
    with pytest.raises(bohm.BohmError):
        bohm.separator(bohm.SeparatorSpec(B_HM, TRUE, FALSE, B_HM, TR, FL))


def test_separator_on_order_four_type():
    p = inhabitants(ORDER4, 30)
    for s1, s2 in itertools.permutations(p, 2):
        t, _ = bohm.separator(bohm.SeparatorSpec(ORDER4, s1, s2, B_HM, TRUE, FALSE))
        assert eq(App(t, s1), TRUE) and eq(App(t, s2), FALSE)


def test_separator_on_pairs():
    a = Tensor(B_HM, B_HM)
    p = inhabitants(a, 30)
    assert len(p) == 4
    for s1, s2 in itertools.permutations(p, 2):
        t, _ = bohm.separator(bohm.SeparatorSpec(a, s1, s2, B_HM, TRUE, FALSE))
        assert eq(App(t, s1), TRUE) and eq(App(t, s2), FALSE)


def test_copy_term_hm():
    c = bohm.copy_term(B_HM, FALSE, TRUE, 2)
    for s in (TRUE, FALSE):
        assert eq(App(c, s), tuple_term([s, s]))
        assert eq(App(c, s), App(lookup("Copy_HM"), s))


def test_copy_term_seq_three():
    c = bohm.copy_term(B_SEQ, TR, FL, 3)
    for s in (TR, FL):
        assert eq(App(c, s), tuple_term([s, s, s]))


def test_copy_needs_two():
    with pytest.raises(bohm.BohmError):
        bohm.copy_term(B_HM, TRUE, FALSE, 1)


def _and_case(b, zero, one):
    const0 = bohm.constant_term(b, b, zero, [zero, one])[0]
    return bohm.binary_separator(b, zero, one, b, zero, one, const0, I)


@pytest.mark.parametrize("strategy", ["auto", "search"])
def test_binary_separator_and_hm(strategy):
    const0 = bohm.constant_term(B_HM, B_HM, FALSE)[0]
    res = bohm.binary_separator(B_HM, FALSE, TRUE, B_HM, FALSE, TRUE, const0, I, strategy=strategy)
    and_hm = lookup("And_HM")
    for x, y in itertools.product((TRUE, FALSE), repeat=2):
        assert eq(app(res.term, x, y), app(and_hm, x, y))
    assert res.certificate.verify()
    if strategy == "auto":
        assert res.route.startswith("guided")


def test_binary_separator_and_seq():
    res = _and_case(B_SEQ, FL, TR)
    and_seq = lookup("AndSeq")
    for x, y in itertools.product((TR, FL), repeat=2):
        assert eq(app(res.term, x, y), app(and_seq, x, y))


def test_binary_separator_equal_outputs():
    k = bohm.constant_term(B_HM, B_HM, TRUE)[0]
    res = bohm.binary_separator(B_HM, FALSE, TRUE, B_HM, FALSE, TRUE, k, k)
    for x, y in itertools.product((TRUE, FALSE), repeat=2):
        assert eq(app(res.term, x, y), TRUE)


def test_binary_separator_mixed_types():
    """First argument over B_Seq, second and result over B_HM."""
    not_hm = lookup("Not_HM")
    res = bohm.binary_separator(B_SEQ, FL, TR, B_HM, FALSE, TRUE, not_hm, I)
    for s, u in ((FL, not_hm), (TR, I)):
        for r in (FALSE, TRUE):
            assert eq(app(res.term, s, r), App(u, r))


def test_binary_separator_too_many_outputs():
    a0 = Tensor(B_HM, B_HM)
    r1, r2 = tuple_term([FALSE, FALSE]), tuple_term([TRUE, TRUE])
    k = bohm.constant_term(a0, a0, tuple_term([FALSE, TRUE]), [r1, r2])[0]
    with pytest.raises(bohm.BohmError, match="more than two"):
        bohm.binary_separator(B_HM, FALSE, TRUE, a0, r1, r2, I, k)


def test_route_is_reported():
    res = _and_case(B_SEQ, FL, TR)
    assert res.route in ("guided:degenerate", "search")
    assert any(line.startswith("route") for line in res.transcript)
