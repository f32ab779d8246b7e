"""Reduction theory: beta/eta steps, commutative conversions, normal forms.

Rules (x, y bound, C[] a one-hole context)::

    beta1   (fn x=>t) s                         ~> t[s/x]
    beta2   let val (x,y)=(u,v) in w            ~> w[u/x, v/y]
    eta1    fn x=>t x            (x not in t)   ~> t
    eta2    let val (x,y)=t in (x,y)            ~> t
    c       C[let val (x,y)=t in u]  <->  let val (x,y)=t in C[u]
            when FV(C) and {x,y} are disjoint and CV(C) and FV(t) are disjoint

``normalize`` is the fast path used everywhere else in the package.  It works
bottom-up and floats every let-pair outward as far as the side conditions
permit, so its output is beta-eta normal with lets hoisted.  ``step``,
``comm_step`` and ``normalize_trace`` work one rule application at a time and
exist for traces, random strategies and tests.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Iterator

from .syntax import (
    App,
    Hole,
    Lam,
    LetPair,
    Pair,
    Path,
    SourceSpan,
    Term,
    Var,
    alpha_eq,
    captured_vars,
    format_path,
    free_vars,
    freshen,
    plug,
    positions,
    pretty,
    replace_at,
    subterm_at,
    substitute_many,
)

DEFAULT_STEP_BUDGET = 100_000
BUDGET_ENV = "LINEAR_BOHM_STEP_BUDGET"

BETA1, BETA2, ETA1, ETA2, C_LEFT, C_RIGHT = "β1", "β2", "η1", "η2", "c-left", "c-right"
RULES = (BETA1, BETA2, ETA1, ETA2, C_LEFT, C_RIGHT)


class BudgetExceeded(RuntimeError):
    """Normalization took more contractions than the budget allows."""


class TypeMismatchError(ValueError):
    pass


def step_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_STEP_BUDGET


# ---------------------------------------------------------------------------
# Fast normalizer
#
# The working term always has pairwise distinct binders that also differ from
# its free names (established by ``freshen`` on entry).  Linear beta never
# copies a subterm, so that invariant survives every contraction and naive
# substitution is capture free.

_Let = tuple[str, str, Term]


class _Counter:
    __slots__ = ("left", "used")

    def __init__(self, budget: int):
        self.left = budget
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded(f"normalization exceeded {self.used - 1} contractions")


def _fv(t: Term) -> set[str]:
    """Free variables, valid under the distinct-binder invariant."""
    used: set[str] = set()
    bound: set[str] = set()
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            used.add(n.name)
        elif isinstance(n, App):
            stack.append(n.fun)
            stack.append(n.arg)
        elif isinstance(n, Lam):
            bound.add(n.binder)
            stack.append(n.body)
        elif isinstance(n, Pair):
            stack.append(n.left)
            stack.append(n.right)
        elif isinstance(n, LetPair):
            bound.add(n.binder1)
            bound.add(n.binder2)
            stack.append(n.scrutinee)
            stack.append(n.body)
    return used - bound


def _subst(t: Term, m: dict[str, Term]) -> Term:
    """Naive substitution; callers guarantee no capture."""
    if isinstance(t, Var):
        return m.get(t.name, t)
    if isinstance(t, App):
        return App(_subst(t.fun, m), _subst(t.arg, m))
    if isinstance(t, Lam):
        return Lam(t.binder, _subst(t.body, m))
    if isinstance(t, Pair):
        return Pair(_subst(t.left, m), _subst(t.right, m))
    if isinstance(t, LetPair):
        return LetPair(t.binder1, t.binder2, _subst(t.scrutinee, m), _subst(t.body, m))
    return t


def _block(lets: list[_Let], core: Term) -> Term:
    for x, y, s in reversed(lets):
        core = LetPair(x, y, s, core)
    return core


def _norm(t: Term, c: _Counter, reduce: bool) -> tuple[list[_Let], Term]:
    """Return ``(lets, core)``: floated let bindings and a let-free core."""
    if isinstance(t, Var):
        return [], t
    if isinstance(t, App):
        lf, cf = _norm(t.fun, c, reduce)
        la, ca = _norm(t.arg, c, reduce)
        if reduce and isinstance(cf, Lam):
            c.tick()
            lr, cr = _norm(_subst(cf.body, {cf.binder: ca}), c, reduce)
            return lf + la + lr, cr
        return lf + la, App(cf, ca)
    if isinstance(t, Lam):
        lets, core = _norm(t.body, c, reduce)
        inside: list[_Let] = []
        outside: list[_Let] = []
        if lets:
            dep = {t.binder}
            for let in lets:
                if _fv(let[2]) & dep:
                    inside.append(let)
                    dep.add(let[0])
                    dep.add(let[1])
                else:
                    outside.append(let)
        if (
            reduce
            and not inside
            and isinstance(core, App)
            and isinstance(core.arg, Var)
            and core.arg.name == t.binder
            and t.binder not in _fv(core.fun)
        ):
            c.tick()
            return outside, core.fun
        return outside, Lam(t.binder, _block(inside, core))
    if isinstance(t, Pair):
        ll, cl = _norm(t.left, c, reduce)
        lr, cr = _norm(t.right, c, reduce)
        return ll + lr, Pair(cl, cr)
    if isinstance(t, LetPair):
        ls, cs = _norm(t.scrutinee, c, reduce)
        if reduce and isinstance(cs, Pair):
            c.tick()
            lr, cr = _norm(_subst(t.body, {t.binder1: cs.left, t.binder2: cs.right}), c, reduce)
            return ls + lr, cr
        lb, cb = _norm(t.body, c, reduce)
        if (
            reduce
            and isinstance(cb, Pair)
            and isinstance(cb.left, Var)
            and isinstance(cb.right, Var)
            and cb.left.name == t.binder1
            and cb.right.name == t.binder2
        ):
            # No let in lb can mention x or y: both are used by the core.
            c.tick()
            return ls + lb, cs
        return ls + [(t.binder1, t.binder2, cs)] + lb, cb
    raise TypeError(f"cannot normalize {t!r}")


@dataclass(frozen=True)
class NormalizationResult:
    term: Term
    contractions: int


def normalize_counted(t: Term, budget: int | None = None) -> NormalizationResult:
    c = _Counter(step_budget(budget))
    lets, core = _norm(freshen(t), c, True)
    return NormalizationResult(_block(lets, core), c.used)


def normalize(t: Term, budget: int | None = None) -> Term:
    """A beta-eta-c normal form of ``t`` (unique up to =c and renaming).

    Raises :class:`BudgetExceeded` after ``budget`` contractions; the budget
    defaults to ``LINEAR_BOHM_STEP_BUDGET`` or 100000.
    """
    return normalize_counted(t, budget).term


def float_lets(t: Term) -> Term:
    """Hoist every let-pair as far out as the side conditions allow."""
    lets, core = _norm(freshen(t), _Counter(0), False)
    return _block(lets, core)


def is_normal(t: Term) -> bool:
    return not step(t)


# ---------------------------------------------------------------------------
# Canonical representatives of =c classes


def canonicalize_c(t: Term) -> Term:
    """Canonical member of the =c class of a normal term.

    Lets are floated outward maximally, then each block of consecutive lets
    is ordered by demand: walking the block's body from left to right, a let
    is emitted when one of its variables is first reached, after the lets its
    own scrutinee needs.  Commuting two independent lets therefore never
    changes the result.
    """
    return _order(float_lets(t))


def _order(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(_order(t.fun), _order(t.arg))
    if isinstance(t, Lam):
        return Lam(t.binder, _order(t.body))
    if isinstance(t, Pair):
        return Pair(_order(t.left), _order(t.right))
    if isinstance(t, LetPair):
        lets: list[_Let] = []
        node: Term = t
        while isinstance(node, LetPair):
            lets.append((node.binder1, node.binder2, _order(node.scrutinee)))
            node = node.body
        core = _order(node)
        owner: dict[str, int] = {}
        for i, (x, y, _) in enumerate(lets):
            owner[x] = i
            owner[y] = i
        done = [False] * len(lets)
        out: list[_Let] = []

        def demand(term: Term) -> None:
            for name in _var_occurrences(term):
                i = owner.get(name)
                if i is not None and not done[i]:
                    emit(i)

        def emit(i: int) -> None:
            done[i] = True
            demand(lets[i][2])
            out.append(lets[i])

        demand(core)
        for i, let in enumerate(lets):
            if not done[i]:
                emit(i)
        return _block(out, core)
    return t


def _var_occurrences(t: Term) -> Iterator[str]:
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            yield n.name
        elif isinstance(n, App):
            stack.append(n.arg)
            stack.append(n.fun)
        elif isinstance(n, Lam):
            stack.append(n.body)
        elif isinstance(n, Pair):
            stack.append(n.right)
            stack.append(n.left)
        elif isinstance(n, LetPair):
            stack.append(n.body)
            stack.append(n.scrutinee)


def normal_form(t: Term, budget: int | None = None) -> Term:
    """``canonicalize_c(normalize(t))``."""
    return canonicalize_c(normalize(t, budget))


def equal_beta_eta_c(
    t1: Term,
    t2: Term,
    *,
    check_types: bool = True,
    cross_check: bool = False,
    budget: int | None = None,
) -> bool:
    """Decide ``t1 =βηc t2`` by comparing canonical normal forms.

    With ``check_types`` the two terms must have unifiable principal types.
    With ``cross_check`` the answer is also computed through proof nets and
    an :class:`AssertionError` is raised if the two disagree.
    """
    if check_types:
        _common_type(t1, t2)
    answer = alpha_eq(normal_form(t1, budget), normal_form(t2, budget))
    if cross_check:
        from .proofnet import nets_agree_on

        other = nets_agree_on(t1, t2)
        if other != answer:
            raise AssertionError(
                f"proof-net oracle disagrees on {pretty(t1)} versus {pretty(t2)}: "
                f"terms say {answer}, nets say {other}"
            )
    return answer


def _common_type(t1: Term, t2: Term):
    from .types import (
        TypingError,
        UnificationError,
        apply_subst,
        infer_principal_type,
        rename_apart,
        unify,
    )

    try:
        _, a = infer_principal_type(t1)
        _, b = infer_principal_type(t2)
    except TypingError as exc:
        raise TypeMismatchError(str(exc)) from None
    a, b = rename_apart(a, "l_"), rename_apart(b, "r_")
    try:
        theta = unify(a, b)
    except UnificationError as exc:
        raise TypeMismatchError(f"no common type: {exc}") from None
    return apply_subst(theta, a)


# ---------------------------------------------------------------------------
# Single steps


@dataclass(frozen=True)
class RewriteStep:
    """One rule application.

    ``path`` locates the redex (for c-moves: the outer end of the move) and
    ``hole`` is the relative position of the inner end for c-moves.
    """

    rule: str
    path: Path
    span: SourceSpan | None = None
    hole: Path = ()

    def __str__(self) -> str:
        extra = f" [{format_path(self.hole)}]" if self.rule in (C_LEFT, C_RIGHT) else ""
        return f"{self.rule} @ {format_path(self.path)}{extra}"


def _contract(node: Term) -> tuple[str, Term] | None:
    """The beta/eta contractum of ``node`` if it is a redex."""
    if isinstance(node, App) and isinstance(node.fun, Lam):
        return BETA1, substitute_many(node.fun.body, {node.fun.binder: node.arg})
    if isinstance(node, LetPair) and isinstance(node.scrutinee, Pair):
        return BETA2, substitute_many(
            node.body, {node.binder1: node.scrutinee.left, node.binder2: node.scrutinee.right}
        )
    if (
        isinstance(node, Lam)
        and isinstance(node.body, App)
        and isinstance(node.body.arg, Var)
        and node.body.arg.name == node.binder
        and node.binder not in free_vars(node.body.fun)
    ):
        return ETA1, node.body.fun
    if (
        isinstance(node, LetPair)
        and isinstance(node.body, Pair)
        and isinstance(node.body.left, Var)
        and isinstance(node.body.right, Var)
        and node.body.left.name == node.binder1
        and node.body.right.name == node.binder2
    ):
        return ETA2, node.scrutinee
    return None


def step(t: Term) -> list[tuple[RewriteStep, Term]]:
    """Every one-step beta/eta reduct, leftmost-outermost first."""
    out = []
    for path, node in positions(t):
        for rule, contractum in _all_contractions(node):
            out.append((RewriteStep(rule, path, node.span), replace_at(t, path, contractum)))
    return out


def _all_contractions(node: Term) -> list[tuple[str, Term]]:
    # A let of a pair whose body is (x,y) is both a beta2 and an eta2 redex;
    # the two contracta coincide but both steps are listed.
    first = _contract(node)
    if first is None:
        return []
    out = [first]
    if first[0] == BETA2 and (
        isinstance(node.body, Pair)
        and isinstance(node.body.left, Var)
        and isinstance(node.body.right, Var)
        and node.body.left.name == node.binder1
        and node.body.right.name == node.binder2
    ):
        out.append((ETA2, node.scrutinee))
    return out


def _side_conditions(ctx: Term, let: LetPair) -> bool:
    fv_ctx = free_vars(ctx)
    if let.binder1 in fv_ctx or let.binder2 in fv_ctx:
        return False
    return not (captured_vars(ctx) & free_vars(let.scrutinee))


def _out_move(t: Term, outer: Path, inner: Path) -> Term | None:
    """Move the let at ``outer + inner`` out to ``outer``; None if not allowed."""
    sub = subterm_at(t, outer)
    let = subterm_at(sub, inner)
    if not inner or not isinstance(let, LetPair):
        return None
    ctx = replace_at(sub, inner, Hole())
    if not _side_conditions(ctx, let):
        return None
    moved = LetPair(let.binder1, let.binder2, let.scrutinee, plug(ctx, let.body))
    return replace_at(t, outer, moved)


def _in_move(t: Term, outer: Path, inner: Path) -> Term | None:
    """Move the let at ``outer`` inward around the body position ``inner``."""
    let = subterm_at(t, outer)
    if not inner or not isinstance(let, LetPair):
        return None
    ctx = replace_at(let.body, inner, Hole())
    if not _side_conditions(ctx, let):
        return None
    target = subterm_at(let.body, inner)
    moved = plug(ctx, LetPair(let.binder1, let.binder2, let.scrutinee, target))
    return replace_at(t, outer, moved)


def comm_moves(t: Term) -> list[tuple[RewriteStep, Term]]:
    """All single commutative-conversion moves, in both directions."""
    out: list[tuple[RewriteStep, Term]] = []
    for path, node in positions(t):
        if not isinstance(node, LetPair):
            continue
        for k in range(len(path)):
            outer, inner = path[:k], path[k:]
            moved = _out_move(t, outer, inner)
            if moved is not None:
                out.append((RewriteStep(C_LEFT, outer, node.span, inner), moved))
        for inner, _ in positions(node.body):
            if not inner:
                continue
            moved = _in_move(t, path, inner)
            if moved is not None:
                out.append((RewriteStep(C_RIGHT, path, node.span, inner), moved))
    return out


def comm_step(t: Term) -> list[Term]:
    """Every term reachable by one commutative conversion, either direction."""
    return [u for _, u in comm_moves(t)]


def _float_moves(t: Term) -> list[tuple[RewriteStep, Term]]:
    """One-level outward let moves that make progress, leftmost-outermost first.

    Lifting a let out of another let's body merely swaps two bindings, so
    such a swap is only offered when it exposes an eta2 redex.
    """
    out = []
    swaps = []
    for path, node in positions(t):
        if isinstance(node, LetPair) and path:
            outer = path[:-1]
            moved = _out_move(t, outer, path[-1:])
            if moved is None:
                continue
            s = RewriteStep(C_LEFT, outer, node.span, path[-1:])
            parent = subterm_at(t, outer)
            if isinstance(parent, LetPair) and path[-1] == 1:
                inner = subterm_at(moved, outer + (1,))
                if _contract(inner) is not None:
                    swaps.append((s, moved))
            else:
                out.append((s, moved))
    return out or swaps


def apply_step(t: Term, s: RewriteStep) -> Term:
    """Replay a recorded step."""
    if s.rule == C_LEFT:
        out = _out_move(t, s.path, s.hole)
    elif s.rule == C_RIGHT:
        out = _in_move(t, s.path, s.hole)
    else:
        node = subterm_at(t, s.path)
        out = None
        for rule, contractum in _all_contractions(node):
            if rule == s.rule:
                out = replace_at(t, s.path, contractum)
                break
    if out is None:
        raise ValueError(f"step {s} does not apply")
    return out


def replay(t: Term, steps: list[RewriteStep]) -> Term:
    for s in steps:
        t = apply_step(t, s)
    return t


@dataclass(frozen=True)
class TraceEntry:
    step: RewriteStep
    before: Term
    after: Term
    result: Term

    def line(self) -> str:
        return f"{self.step.rule} @ {format_path(self.step.path)} : {pretty(self.before)} ~> {pretty(self.after)}"


def normalize_trace(t: Term, budget: int | None = None) -> tuple[Term, list[TraceEntry]]:
    """Leftmost-outermost reduction, one rule at a time, with a full trace.

    When no beta/eta redex is left, lets are floated outward one level at a
    time (leftmost-outermost) until a redex appears or nothing moves.
    """
    limit = step_budget(budget)
    trace: list[TraceEntry] = []
    while True:
        if len(trace) >= limit:
            raise BudgetExceeded(f"trace exceeded {limit} steps")
        chosen = None
        for path, node in positions(t):
            hit = _contract(node)
            if hit is not None:
                chosen = (RewriteStep(hit[0], path, node.span), path, hit[1])
                break
        if chosen is None:
            moves = _float_moves(t)
            if not moves:
                return t, trace
            s, new = moves[0]
            trace.append(TraceEntry(s, subterm_at(t, s.path), subterm_at(new, s.path), new))
            t = new
            continue
        s, path, contractum = chosen
        before = subterm_at(t, path)
        t = replace_at(t, path, contractum)
        trace.append(TraceEntry(s, before, contractum, t))


def format_trace(trace: list[TraceEntry]) -> str:
    return "\n".join(e.line() for e in trace)


def reduce_randomly(
    t: Term,
    rng: random.Random,
    *,
    shuffle_prob: float = 0.15,
    max_shuffles: int = 8,
    budget: int | None = None,
) -> tuple[Term, list[RewriteStep]]:
    """A random maximal reduction sequence.

    Each round picks a uniformly random beta/eta redex.  With probability
    ``shuffle_prob`` (at most ``max_shuffles`` times) a random commutative
    move in either direction is taken instead.  When no redex is left, random
    outward let moves are made until a redex appears or none applies.
    """
    limit = step_budget(budget)
    steps: list[RewriteStep] = []
    shuffles = 0
    while True:
        if len(steps) >= limit:
            raise BudgetExceeded(f"random reduction exceeded {limit} steps")
        if shuffles < max_shuffles and rng.random() < shuffle_prob:
            moves = comm_moves(t)
            if moves:
                s, t = rng.choice(moves)
                steps.append(s)
                shuffles += 1
                continue
        reds = step(t)
        if reds:
            s, t = rng.choice(reds)
            steps.append(s)
            continue
        floats = _float_moves(t)
        if not floats:
            return t, steps
        s, t = rng.choice(floats)
        steps.append(s)
