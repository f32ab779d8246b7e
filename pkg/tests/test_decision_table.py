"""The const/id/neg table of the two-argument separator, row by row.

The synthetic shape T1 = F(H(G(x)), K(y)), T2 = F(H(x), K(G(y))) lands in
the table case for every behaviour pair.  At the model level all nine rows
are driven directly.  End to end, through real terms, only rows where u1 is
not a negation can occur, because outputs are numbered starting from the
class of u1 r1.
"""

import itertools

import pytest

from linear_bohm import bohm
from linear_bohm.corpus import lookup
from linear_bohm.rewrite import equal_beta_eta_c
from linear_bohm.slt import parse_slt
from linear_bohm.syntax import App, app, parse_term
from linear_bohm.types import B_HM, parse_type

T1 = parse_slt("F(H(G(x)), K(y))")
T2 = parse_slt("F(H(x), K(G(y)))")
HEADER = [("x", 0), ("y", 0), ("F", 2), ("G", 1), ("H", 1), ("K", 1)]

PAIRS = {"const": [(0, 0), (1, 1)], "id": [(0, 1)], "neg": [(1, 0)]}


def test_rows_verbatim():
    rows = [(r.u1, r.u2, r.f_choice, r.g, r.h, r.k) for r in bohm.DECISION_TABLE.rows]
    dc = bohm.DONT_CARE
    assert rows == [
        ("const", "const", "left", "const", "const", dc),
        ("const", "id", "left", "const", "id", dc),
        ("const", "neg", "left", "const", "neg", dc),
        ("id", "const", "right", "const", dc, "id"),
        ("neg", "const", "right", "const", dc, "neg"),
        ("id", "id", "left", "id", "id", "id"),
        ("neg", "neg", "left", "id", "neg", dc),
        ("id", "neg", "left", "neg", "neg", dc),
        ("neg", "id", "left", "neg", "id", dc),
    ]


def test_lookup_covers_all_behaviour_pairs():
    seen = set()
    for u1, u2 in itertools.product(PAIRS, repeat=2):
        row_no, row = bohm.DECISION_TABLE.lookup(u1, u2)
        seen.add(row_no)
    assert seen == set(range(1, 10))


def test_shape_is_table_case():
    assert bohm._locate(T1, T2) == ("F", "G", "x")
    assert not bohm._path_avoids(T1, "G", "x")
    assert bohm._path_avoids(T2, "x", "G")


@pytest.mark.parametrize("u1,u2", list(itertools.product(PAIRS, repeat=2)))
def test_every_row_model_level(u1, u2):
    expected_row, _ = bohm.DECISION_TABLE.lookup(u1, u2)
    for b1, b2 in itertools.product(PAIRS[u1], PAIRS[u2]):
        route, choice = bohm._guided(HEADER, T1, T2, b1, b2)
        assert route == f"guided:case2:row{expected_row}"
        assert bohm._eval(T1, choice) == b1
        assert bohm._eval(T2, choice) == b2


A = parse_type("'a -> 'a -> ('a -> 'a -> 'a) -> ('a -> 'a) -> ('a -> 'a) -> ('a -> 'a) -> 'a")
S1 = parse_term("fn x=>fn y=>fn F=>fn G=>fn H=>fn K=>F (H (G x)) (K y)")
S2 = parse_term("fn x=>fn y=>fn F=>fn G=>fn H=>fn K=>F (H x) (K (G y))")
I = parse_term("fn x=>x")
TRUE, FALSE = lookup("True"), lookup("False")
NOT = lookup("Not_HM")


def _const(u):
    return bohm.constant_term(B_HM, B_HM, u)[0]


END_TO_END = {
    1: (_const(FALSE), _const(TRUE)),
    2: (_const(FALSE), I),
    3: (_const(FALSE), NOT),
    4: (I, _const(FALSE)),
    6: (I, I),
    8: (I, NOT),
}


@pytest.mark.parametrize("row", sorted(END_TO_END))
def test_row_end_to_end(row):
    u1, u2 = END_TO_END[row]
    res = bohm.binary_separator(A, S1, S2, B_HM, FALSE, TRUE, u1, u2, strategy="guided")
    assert res.route == f"guided:case2:row{row}"
    for (s, u), r in itertools.product(((S1, u1), (S2, u2)), (FALSE, TRUE)):
        assert equal_beta_eta_c(app(res.term, s, r), App(u, r))
    assert res.certificate.verify()


def test_guided_construction_covers_small_vocabulary():
    """Every pair of full skeletons over x, y, F/2, G/1, H/1 and every
    behaviour pair gets a guided model that satisfies both trees."""
    from linear_bohm import slt

    header = [("x", 0), ("y", 0), ("F", 2), ("G", 1), ("H", 1)]
    terms = [
        t
        for t in slt.enumerate_slt(["x", "y"], {"F": 2, "G": 1, "H": 1})
        if len(slt.first_order_vars(t)) == 2 and len(slt.second_order_vars(t)) == 3
    ]
    behaviours = [(0, 0), (0, 1), (1, 0), (1, 1)]
    for a, b in itertools.permutations(terms, 2):
        for b1, b2 in itertools.product(behaviours, repeat=2):
            found = bohm._guided(header, a, b, b1, b2)
            assert found is not None, (a, b, b1, b2)
            assert bohm._satisfies(found[1], a, b, b1, b2)
