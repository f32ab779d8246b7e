import random

from hypothesis import given, strategies as st

from linear_bohm.corpus import lookup, named_terms
from linear_bohm.proofnet import (
    CUT,
    ID,
    LOLLI_POS,
    TENSOR_POS,
    net_equal,
    nets_agree_on,
    reduce_net,
    to_dot,
    translate,
)
from linear_bohm.rewrite import equal_beta_eta_c, normalize_trace, reduce_randomly
from linear_bohm.syntax import App, parse_term
from linear_bohm.types import parse_type
from termgen import closed_terms


def test_identity_net():
    net = translate(parse_term("fn x=>x"))
    assert net.count(ID) == 1 and net.count(LOLLI_POS) == 1
    assert [str(f) for f in net.conclusion_formulas()] == ["'a -> 'a^+"]


def test_redex_net_reduces_to_variable():
    a = parse_type("'a")
    n1 = translate(parse_term("(fn x=>x) y"), a)
    n2 = translate(parse_term("y"), a)
    assert net_equal(n1, n2)


def test_pair_net_has_tensor_link():
    net = translate(parse_term("fn u=>fn v=>(u,v)"))
    assert net.count(TENSOR_POS) == 1


def test_cut_eliminated():
    net = translate(App(lookup("Not_HM"), lookup("True")))
    assert net.count(CUT) > 0
    normal = reduce_net(net)
    assert normal.is_normal()
    assert reduce_net(normal) == normal or net_equal(normal, reduce_net(normal))


def test_booleans_differ():
    assert not nets_agree_on(lookup("True"), lookup("False"))


def test_net_equal_reflexive():
    n = translate(lookup("Copy_HM"))
    assert net_equal(n, n)


def test_comm_related_terms_share_a_net():
    a = parse_term("fn p=>fn f=>let val (x,y)=p in f (x y) end")
    b = parse_term("fn p=>fn f=>f (let val (x,y)=p in x y end)")
    assert nets_agree_on(a, b)


def test_dot_export():
    dot = to_dot(translate(parse_term("fn x=>x")))
    assert dot.startswith("digraph") and "^+" in dot and "ID" in dot
    assert dot == to_dot(translate(parse_term("fn x=>x")))


def test_trace_steps_preserve_nets():
    t = App(lookup("Not_HM"), lookup("True"))
    _, trace = normalize_trace(t)
    for entry in trace[:6]:
        assert nets_agree_on(t, entry.result)


def test_corpus_faithful():
    terms = list(named_terms().items())
    for i, (n1, t1) in enumerate(terms):
        for n2, t2 in terms[i:]:
            try:
                same = equal_beta_eta_c(t1, t2)
            except Exception:
                continue
            assert same == nets_agree_on(t1, t2), (n1, n2)


@given(closed_terms(), st.integers(0, 2**16))
def test_reduction_preserves_net(t, seed):
    out, _ = reduce_randomly(t, random.Random(seed))
    assert nets_agree_on(t, out)


@given(closed_terms(), closed_terms())
def test_agreement_on_random_pairs(a, b):
    try:
        same = equal_beta_eta_c(a, b)
    except Exception:
        return
    assert same == nets_agree_on(a, b)


def test_shadowed_binders():
    a = parse_term("fn z=>fn k=>k z (fn z=>z)")
    b = parse_term("fn w=>fn k=>k w (fn v=>v)")
    assert net_equal(translate(a), translate(b))
