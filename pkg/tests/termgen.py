"""Random closed linear terms for property tests.

Terms are grown top-down from a pool of variables that must each be used
exactly once, so every output is linear by construction; typability is
checked afterwards and untypable draws are discarded.  Applications favour
an abstraction in function position so that there is something to reduce.
"""

from __future__ import annotations

import random

from hypothesis import strategies as st

from linear_bohm.syntax import App, Lam, LetPair, Pair, Term, Var, size
from linear_bohm.types import is_typable


class _Gen:
    def __init__(self, rng: random.Random, allow_pairs: bool):
        self.rng = rng
        self.allow_pairs = allow_pairs
        self.counter = 0

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def split(self, names: list[str]) -> tuple[list[str], list[str]]:
        left, right = [], []
        for n in names:
            (left if self.rng.random() < 0.5 else right).append(n)
        return left, right

    def term(self, names: list[str], depth: int) -> Term:
        rng = self.rng
        if depth <= 0:
            return self.spine(names)
        if len(names) == 1 and rng.random() < 0.35:
            return Var(names[0])
        r = rng.random()
        if r < 0.3 or not names and r < 0.5:
            x = self.fresh("x")
            return Lam(x, self.term(names + [x], depth - 1))
        if r < 0.75 or not self.allow_pairs:
            left, right = self.split(names)
            if rng.random() < 0.5:
                x = self.fresh("x")
                fun: Term = Lam(x, self.term(left + [x], depth - 1))
            else:
                fun = self.term(left, depth - 1)
            return App(fun, self.term(right, depth - 1))
        if r < 0.87:
            left, right = self.split(names)
            return Pair(self.term(left, depth - 1), self.term(right, depth - 1))
        left, right = self.split(names)
        a, b = self.fresh("p"), self.fresh("q")
        if rng.random() < 0.6:
            scrut: Term = Pair(self.term(left, depth - 1), self.term([], depth - 1))
            body_names = right + [a, b]
        else:
            scrut = self.term(left, depth - 1)
            body_names = right + [a, b]
        return LetPair(a, b, scrut, self.term(body_names, depth - 1))

    def spine(self, names: list[str]) -> Term:
        if not names:
            x = self.fresh("x")
            return Lam(x, Var(x))
        out: Term = Var(names[0])
        for n in names[1:]:
            out = App(out, Var(n))
        return out


def random_closed_term(
    rng: random.Random, depth: int = 6, allow_pairs: bool = True, min_size: int = 8, tries: int = 500
) -> Term:
    """A closed, linear, typable term of at least ``min_size`` nodes."""
    for _ in range(tries):
        t = _Gen(rng, allow_pairs).term([], depth)
        if size(t) >= min_size and is_typable(t):
            return t
    raise RuntimeError("no typable term drawn")


def random_terms(seed: int, count: int, depth: int = 6) -> list[Term]:
    rng = random.Random(seed)
    return [random_closed_term(rng, depth) for _ in range(count)]


@st.composite
def closed_terms(draw, depth: int = 5) -> Term:
    seed = draw(st.integers(0, 2**32 - 1))
    return random_closed_term(random.Random(seed), depth)
