"""Enumeration of closed linear inhabitants of a type.

Terms are produced in eta-long beta-normal form.  Hypotheses of tensor type
are split by ``let`` as soon as they appear, which picks one representative
per commuting-conversion class in the cases that matter here.  The search
is driven by resources: every hypothesis must be consumed exactly once, so
the arguments of an application receive a partition of what is left.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator

from .syntax import App, Lam, LetPair, Pair, Term, Var, size
from .types import Lolli, Tensor, TVar, Type, pretty_type, uncurry


def _atoms(a: Type, sign: int, out: dict[str, int]) -> None:
    if isinstance(a, TVar):
        out[a.name] = out.get(a.name, 0) + sign
    elif isinstance(a, Tensor):
        _atoms(a.left, sign, out)
        _atoms(a.right, sign, out)
    else:
        _atoms(a.dom, -sign, out)
        _atoms(a.cod, sign, out)


def balanced(goal: Type, hyps: tuple[Type, ...]) -> bool:
    """Necessary condition for linear provability: atom occurrences cancel."""
    count: dict[str, int] = {}
    _atoms(goal, 1, count)
    for h in hyps:
        _atoms(h, -1, count)
    return all(v == 0 for v in count.values())


class _Search:
    def __init__(self, max_size: int, max_depth: int | None):
        self.max_size = max_size
        self.max_depth = max_depth
        self.counter = 0
        self.memo: dict = {}

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def prove(self, goal: Type, hyps: tuple[tuple[str, Type], ...], budget: int, depth: int) -> list[Term]:
        if budget <= 0:
            return []
        if not balanced(goal, tuple(t for _, t in hyps)):
            return []
        key = (goal, hyps, budget, depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = list(self._prove(goal, hyps, budget, depth))
        self.memo[key] = out
        return out

    def _prove(self, goal, hyps, budget, depth) -> Iterator[Term]:
        for i, (name, t) in enumerate(hyps):
            if isinstance(t, Tensor):
                x, y = self.fresh("p"), self.fresh("q")
                rest = hyps[:i] + ((x, t.left), (y, t.right)) + hyps[i + 1:]
                for body in self.prove(goal, rest, budget - 2, depth):
                    yield LetPair(x, y, Var(name), body)
                return
        if isinstance(goal, Lolli):
            x = self.fresh("x")
            for body in self.prove(goal.cod, hyps + ((x, goal.dom),), budget - 1, depth):
                yield Lam(x, body)
            return
        if isinstance(goal, Tensor):
            for left_ix in _subsets(len(hyps)):
                left = tuple(hyps[j] for j in left_ix)
                right = tuple(h for j, h in enumerate(hyps) if j not in left_ix)
                for lt in self.prove(goal.left, left, budget - 2, depth):
                    for rt in self.prove(goal.right, right, budget - 1 - size(lt), depth):
                        yield Pair(lt, rt)
            return
        # atomic goal: pick a head whose final codomain is the goal
        if self.max_depth is not None and depth >= self.max_depth:
            return
        for i, (name, t) in enumerate(hyps):
            doms, cod = uncurry(t)
            if cod != goal:
                continue
            rest = hyps[:i] + hyps[i + 1:]
            if not doms:
                if not rest:
                    yield Var(name)
                continue
            yield from self._spine(Var(name), doms, rest, budget - 1 - len(doms), depth + 1)

    def _spine(self, head: Term, doms: list[Type], rest, budget, depth) -> Iterator[Term]:
        k = len(doms)
        for assignment in product(range(k), repeat=len(rest)):
            parts = [tuple(h for h, a in zip(rest, assignment) if a == j) for j in range(k)]
            if not all(balanced(d, tuple(t for _, t in p)) for d, p in zip(doms, parts)):
                continue
            yield from self._args(head, doms, parts, 0, budget, depth)

    def _args(self, acc: Term, doms, parts, j, budget, depth) -> Iterator[Term]:
        if j == len(doms):
            yield acc
            return
        remaining = len(doms) - j - 1  # minimum one node per later argument
        for arg in self.prove(doms[j], parts[j], budget - remaining, depth):
            yield from self._args(App(acc, arg), doms, parts, j + 1, budget - size(arg), depth)


def _subsets(n: int) -> Iterator[frozenset[int]]:
    for mask in range(1 << n):
        yield frozenset(j for j in range(n) if mask >> j & 1)


def inhabitants(a: Type, max_size: int = 40, max_depth: int | None = None, *, eta_long: bool = True) -> list[Term]:
    """All closed eta-long normal inhabitants of ``a`` within the bounds.

    ``max_size`` bounds the node count of the eta-long term; ``max_depth``
    bounds the nesting of applications (a head applied to arguments that are
    themselves applications counts two).  With ``eta_long=False`` each result
    is returned in its beta-eta normal form instead.
    """
    search = _Search(max_size, max_depth)
    found = search.prove(a, (), max_size + 1, 0)
    # renumber binders so the output is independent of search history
    from .syntax import freshen

    out = []
    for t in found:
        if size(t) <= max_size:
            out.append(freshen(t))
    if not eta_long:
        from .rewrite import normalize

        out = [normalize(t) for t in out]
    return out


def count_inhabitants(a: Type, max_size: int = 40, max_depth: int | None = None) -> int:
    return len(inhabitants(a, max_size, max_depth))


@lru_cache(maxsize=64)
def _cached(text: str, max_size: int) -> tuple[Term, ...]:
    from .types import parse_type

    return tuple(inhabitants(parse_type(text), max_size))


def some_inhabitants(a: Type, max_size: int = 24) -> tuple[Term, ...]:
    """Cached enumeration keyed by the printed type, for probe selection."""
    return _cached(pretty_type(a), max_size)
