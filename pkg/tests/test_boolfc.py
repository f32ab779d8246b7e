import itertools

import pytest
from hypothesis import given, settings, strategies as st

from linear_bohm.boolfc import (
    CODINGS,
    MAJORITY,
    XOR,
    BoolError,
    BooleanCoding,
    TruthTable,
    and_gate,
    appendix_b_check,
    compile_table,
    corpus,
    duplicate,
    not_gate,
    pair_coding,
    register_coding,
    shannon,
    verify_encoding,
)
from linear_bohm.corpus import lookup
from linear_bohm.rewrite import equal_beta_eta_c
from linear_bohm.syntax import App, app, parse_term, tuple_term
from linear_bohm.types import B_HM, arrows, certify, check_typing


CODING_NAMES = ["HM", "Seq"]
CORPUS_GATES = {"HM": ("Not_HM", "Copy_HM", "And_HM"), "Seq": ("NotSeq", "CopySeq", "AndSeq")}


def _agree(c, t, ref, arity):
    for bits in itertools.product((0, 1), repeat=arity):
        args = [c.bit(b) for b in bits]
        assert equal_beta_eta_c(app(t, *args), app(ref, *args), check_types=False), bits


@pytest.mark.parametrize("name", CODING_NAMES)
def test_not_agrees_with_corpus(name):
    c = CODINGS[name]
    _agree(c, not_gate(c), lookup(CORPUS_GATES[name][0]), 1)


@pytest.mark.parametrize("name", CODING_NAMES)
def test_duplicate_agrees_with_corpus(name):
    c = CODINGS[name]
    _agree(c, duplicate(c), lookup(CORPUS_GATES[name][1]), 1)


@pytest.mark.parametrize("name", CODING_NAMES)
def test_and_agrees_with_corpus(name):
    c = CODINGS[name]
    _agree(c, and_gate(c), lookup(CORPUS_GATES[name][2]), 2)


@pytest.mark.parametrize("name", CODING_NAMES)
def test_double_negation(name):
    c = CODINGS[name]
    n = not_gate(c)
    for b in (0, 1):
        assert equal_beta_eta_c(App(n, App(n, c.bit(b))), c.bit(b), check_types=False)


def test_xor_over_hm():
    c = CODINGS["HM"]
    out = compile_table(c, XOR)
    assert out.report.all_pass
    # the compiled term is certified poly-typable; the plain typing is not claimed
    assert out.certificate is not None
    assert str(out.expression)


def test_constant_zero():
    c = CODINGS["HM"]
    out = compile_table(c, TruthTable(1, (0, 0)))
    for b in (0, 1):
        assert equal_beta_eta_c(App(out.term, c.bit(b)), c.bit(0), check_types=False)


def test_majority_over_seq():
    c = CODINGS["Seq"]
    assert compile_table(c, MAJORITY, certify_poly=False).report.all_pass


def test_pair_coding_compiles():
    c = pair_coding()
    c.check()
    assert c.name == "HMxHM"
    assert compile_table(c, TruthTable(1, (1, 0)), certify_poly=False).report.all_pass


@settings(max_examples=12)
@given(st.integers(0, 15), st.sampled_from(CODING_NAMES))
def test_every_binary_table(index, name):
    f = TruthTable.from_index(2, index)
    assert compile_table(CODINGS[name], f, certify_poly=False).report.all_pass


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** (1 << n) - 1))))
def test_shannon_expression_evaluates(arg):
    n, index = arg
    f = TruthTable.from_index(n, index)
    e = shannon(f.outputs)
    counts: dict[int, int] = {}
    e.occurrences(counts)
    assert set(counts) <= set(range(n))


def test_verify_reports_failure():
    c = CODINGS["HM"]
    report = verify_encoding(c, lookup("Not_HM"), TruthTable(1, (0, 1)))
    assert not report.all_pass
    assert "FAIL" in report.format()
    good = verify_encoding(c, lookup("Not_HM"), TruthTable(1, (1, 0)))
    assert good.all_pass and good.format().count("ok") == 2


def test_table_roundtrip():
    text = MAJORITY.format()
    assert TruthTable.parse(text) == MAJORITY
    assert MAJORITY(1, 1, 0) == 1 and MAJORITY(1, 0, 0) == 0


@pytest.mark.parametrize(
    "text",
    ["", "n=x\n0 -> 1\n1 -> 0\n", "n=1\n0 -> 1\n", "n=1\n1 -> 1\n0 -> 0\n", "n=1\n0 -> 2\n1 -> 0\n", "n=1\n0 1\n1 -> 0\n"],
)
def test_table_parse_errors(text):
    with pytest.raises(BoolError):
        TruthTable.parse(text)


def test_table_validation():
    with pytest.raises(BoolError):
        TruthTable(2, (0, 1))
    with pytest.raises(BoolError):
        TruthTable(0, (0,))


def test_coding_rejects_equal_terms():
    t = lookup("True")
    with pytest.raises(BoolError):
        register_coding(BooleanCoding("bad", B_HM, t, t))


def test_decode():
    c = CODINGS["Seq"]
    assert c.decode(lookup("TrSeq")) == 1
    assert c.decode(App(lookup("NotSeq"), lookup("TrSeq"))) == 0
    assert CODINGS["HM"].decode(parse_term("fn x=>fn y=>fn z=>z y x")) == 0


def test_corpus_names_and_gates():
    cp = corpus()
    for name in ("True", "False", "Not_HM", "LDTr_Pair", "CopySeq", "AndSeq", "Not_POLY", "erase_3"):
        assert name in cp
    assert len(cp.gates) == 6
    assert all(g.check() for g in cp.gates)


def test_corpus_duplicator_output_is_pair():
    c = CODINGS["HM"]
    out = App(lookup("Copy_HM"), c.bit(1))
    assert equal_beta_eta_c(out, tuple_term([c.bit(1), c.bit(1)]))


@pytest.mark.parametrize("name", CODING_NAMES)
def test_gates_are_poly_typable_not_plainly_typed(name):
    c = CODINGS[name]
    t = and_gate(c)
    claimed = arrows(c.type, c.type, c.type)
    rows = [[c.bit(a), c.bit(b)] for a in (0, 1) for b in (0, 1)]
    assert certify(t, claimed, rows) is not None
    # keep the boolean out of the assert so a failure does not render the term
    plain = check_typing((), t, claimed)
    assert plain is False


def test_no_plain_separator_into_hm():
    report = appendix_b_check(depth_bound=6)
    assert report.candidates > 0
    assert report.plain_witnesses == []
    assert report.separator_ok
    assert report.ok
    assert "confirmed" in report.format()
    with pytest.raises(BoolError):
        appendix_b_check(depth_bound=0)
