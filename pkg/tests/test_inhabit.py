import pytest

from linear_bohm.inhabit import balanced, count_inhabitants, inhabitants
from linear_bohm.rewrite import equal_beta_eta_c
from linear_bohm.syntax import alpha_eq, is_linear
from linear_bohm.corpus import lookup
from linear_bohm.types import B_HM, B_SEQ, check_typing, parse_type


@pytest.mark.parametrize(
    "text,count",
    [
        ("B_HM", 2),
        ("B_Seq", 2),
        ("B_HM * B_HM", 4),
        ("'a -> 'a", 1),
        ("(('a->'a)->'a->'a)->('a->'a)->'a->'a", 3),
        ("B_HM -> B_HM", 4),
        ("'a -> 'b", 0),
    ],
)
def test_counts(text, count):
    assert count_inhabitants(parse_type(text), 40) == count


def test_booleans_are_the_inhabitants():
    found = inhabitants(B_HM, 40)
    assert any(alpha_eq(t, lookup("True")) for t in found)
    assert any(alpha_eq(t, lookup("False")) for t in found)
    assert not equal_beta_eta_c(found[0], found[1])


def test_inhabitants_are_typed_and_linear():
    for a in (B_HM, B_SEQ, parse_type("B_HM -> B_HM")):
        for t in inhabitants(a, 40):
            assert is_linear(t)
            assert check_typing((), t, a)


def test_balance_prunes():
    assert not balanced(parse_type("'a"), (parse_type("'b"),))
    assert balanced(parse_type("'a"), (parse_type("'a"),))
