"""Types, unification, principal types and poly-typability.

Types are built from type variables, the tensor ``A * B`` and linear
implication ``A -> B``.  Textually a variable is written with a leading
quote (``'a``); the quote is not part of :attr:`TVar.name`.

Inference is constraint generation plus Robinson unification.  A
:class:`FreshSupply` object hands out type variables, and every inference
call creates its own supply, so no state is shared between calls.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .syntax import App, Hole, Lam, LetPair, Pair, Term, Var, free_var_order, linearity_check
from .syntax import pretty as pretty_term


# ---------------------------------------------------------------------------
# Type syntax


@dataclass(frozen=True, slots=True)
class TVar:
    name: str

    def __str__(self) -> str:
        return pretty_type(self)


@dataclass(frozen=True, slots=True)
class Tensor:
    left: "Type"
    right: "Type"

    def __str__(self) -> str:
        return pretty_type(self)


@dataclass(frozen=True, slots=True)
class Lolli:
    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        return pretty_type(self)


Type = Union[TVar, Tensor, Lolli]
TypeSubstitution = dict[str, Type]


@dataclass(frozen=True)
class TypeContext:
    """Ordered list of ``(variable, type)`` entries; each variable once."""

    entries: tuple[tuple[str, Type], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"variable listed twice in context: {names}")

    def __iter__(self) -> Iterator[tuple[str, Type]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def lookup(self, name: str) -> Type | None:
        for n, a in self.entries:
            if n == name:
                return a
        return None

    def __str__(self) -> str:
        return ", ".join(f"{n} : {pretty_type(a)}" for n, a in self.entries)


def arrows(*types: Type) -> Type:
    """``arrows(A1, ..., An, B)`` is ``A1 -> ... -> An -> B``."""
    out = types[-1]
    for a in reversed(types[:-1]):
        out = Lolli(a, out)
    return out


def tensors(items: Sequence[Type]) -> Type:
    """Right-nested ``A1 * (A2 * ... An)``."""
    out = items[-1]
    for a in reversed(items[:-1]):
        out = Tensor(a, out)
    return out


def uncurry(a: Type) -> tuple[list[Type], Type]:
    """Split ``A1 -> ... -> An -> B`` (B not an arrow) into ``([A1..An], B)``."""
    doms: list[Type] = []
    while isinstance(a, Lolli):
        doms.append(a.dom)
        a = a.cod
    return doms, a


def type_vars(a: Type) -> list[str]:
    """Type variables in first-occurrence (left to right) order."""
    seen: dict[str, None] = {}
    visited: set[int] = set()
    stack = [a]
    while stack:
        t = stack.pop()
        if id(t) in visited:
            continue
        visited.add(id(t))
        if isinstance(t, TVar):
            seen.setdefault(t.name)
        elif isinstance(t, Tensor):
            stack.append(t.right)
            stack.append(t.left)
        else:
            stack.append(t.cod)
            stack.append(t.dom)
    return list(seen)


def dag_size(a: Type) -> int:
    """Number of distinct nodes (types are often heavily shared)."""
    visited: set[int] = set()
    stack = [a]
    while stack:
        t = stack.pop()
        if id(t) in visited:
            continue
        visited.add(id(t))
        if isinstance(t, Tensor):
            stack.extend((t.left, t.right))
        elif isinstance(t, Lolli):
            stack.extend((t.dom, t.cod))
    return len(visited)


def tree_size(a: Type, cap: int = 10**9) -> int:
    """Number of nodes when fully unshared, saturating at ``cap``."""
    memo: dict[int, int] = {}

    def go(t: Type) -> int:
        k = id(t)
        if k in memo:
            return memo[k]
        if isinstance(t, TVar):
            n = 1
        elif isinstance(t, Tensor):
            n = min(cap, 1 + go(t.left) + go(t.right))
        else:
            n = min(cap, 1 + go(t.dom) + go(t.cod))
        memo[k] = n
        return n

    return go(a)


def types_equal(a: Type, b: Type) -> bool:
    """Structural equality that stays linear on shared representations."""
    same: set[tuple[int, int]] = set()
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y or (id(x), id(y)) in same:
            continue
        same.add((id(x), id(y)))
        if isinstance(x, TVar):
            if not (isinstance(y, TVar) and x.name == y.name):
                return False
        elif isinstance(x, Tensor):
            if not isinstance(y, Tensor):
                return False
            stack.append((x.left, y.left))
            stack.append((x.right, y.right))
        else:
            if not isinstance(y, Lolli):
                return False
            stack.append((x.dom, y.dom))
            stack.append((x.cod, y.cod))
    return True


def is_implicational(a: Type) -> bool:
    if isinstance(a, TVar):
        return True
    if isinstance(a, Tensor):
        return False
    return is_implicational(a.dom) and is_implicational(a.cod)


def contains_tensor(a: Type) -> bool:
    return not is_implicational(a)


# ---------------------------------------------------------------------------
# Printing and parsing


def pretty_type(a: Type) -> str:
    if isinstance(a, TVar):
        return "'" + a.name
    if isinstance(a, Tensor):
        left = pretty_type(a.left)
        right = pretty_type(a.right)
        if not isinstance(a.left, TVar):
            left = f"({left})"
        if isinstance(a.right, Lolli):
            right = f"({right})"
        return f"{left} * {right}"
    dom = pretty_type(a.dom)
    if isinstance(a.dom, Lolli):
        dom = f"({dom})"
    return f"{dom} -> {pretty_type(a.cod)}"


class TypeSyntaxError(ValueError):
    pass


_TYPE_TOKEN = re.compile(r"\s*(?:(?P<var>'[A-Za-z_][A-Za-z0-9_']*)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>->|\*|\(|\)))")


def parse_type(text: str, abbreviations: Mapping[str, Type] | None = None) -> Type:
    """Parse the type grammar; bare identifiers resolve through ``abbreviations``.

    ``*`` binds tighter than ``->``; both associate to the right.
    """
    abbreviations = DEFAULT_ABBREVIATIONS if abbreviations is None else abbreviations
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TYPE_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise TypeSyntaxError(f"unexpected character {text[pos]!r} at {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    i = 0

    def peek() -> tuple[str, str, int]:
        return tokens[i]

    def take() -> tuple[str, str, int]:
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def arrow() -> Type:
        left = product()
        if peek()[1] == "->":
            take()
            return Lolli(left, arrow())
        return left

    def product() -> Type:
        left = atom()
        if peek()[1] == "*":
            take()
            return Tensor(left, product())
        return left

    def atom() -> Type:
        kind, val, where = take()
        if kind == "var":
            return TVar(val[1:])
        if kind == "name":
            if val not in abbreviations:
                raise TypeSyntaxError(f"unknown type name {val!r} at {where}")
            return abbreviations[val]
        if val == "(":
            inner = arrow()
            if take()[1] != ")":
                raise TypeSyntaxError(f"expected ')' in {text!r}")
            return inner
        raise TypeSyntaxError(f"unexpected {val or 'end of input'!r} at {where}")

    result = arrow()
    if peek()[0] != "eof":
        raise TypeSyntaxError(f"trailing input at {peek()[2]}")
    return result


_a = TVar("a")
B_HM: Type = arrows(_a, _a, arrows(_a, _a, _a), _a)
B_SEQ: Type = arrows(_a, arrows(_a, _a), arrows(_a, _a), _a)
DEFAULT_ABBREVIATIONS: dict[str, Type] = {"B_HM": B_HM, "B_Seq": B_SEQ}


# ---------------------------------------------------------------------------
# Substitutions


def apply_subst(theta: Mapping[str, Type], a: Type) -> Type:
    """Apply ``theta`` once (suitable for idempotent substitutions)."""
    if not theta:
        return a
    memo: dict[int, Type] = {}

    def go(t: Type) -> Type:
        k = id(t)
        hit = memo.get(k)
        if hit is not None:
            return hit
        if isinstance(t, TVar):
            out = theta.get(t.name, t)
        elif isinstance(t, Tensor):
            l, r = go(t.left), go(t.right)
            out = t if (l is t.left and r is t.right) else Tensor(l, r)
        else:
            d, c = go(t.dom), go(t.cod)
            out = t if (d is t.dom and c is t.cod) else Lolli(d, c)
        memo[k] = out
        return out

    return go(a)


def compose(theta2: Mapping[str, Type], theta1: Mapping[str, Type]) -> TypeSubstitution:
    """``theta2 . theta1``: first apply ``theta1``, then ``theta2``."""
    out = {k: apply_subst(theta2, v) for k, v in theta1.items()}
    for k, v in theta2.items():
        out.setdefault(k, v)
    return {k: v for k, v in out.items() if v != TVar(k)}


def rename_type(a: Type, mapping: Mapping[str, str]) -> Type:
    return apply_subst({k: TVar(v) for k, v in mapping.items()}, a)


def format_subst(theta: Mapping[str, Type]) -> str:
    body = ", ".join(f"'{k} := {pretty_type(v)}" for k, v in sorted(theta.items()))
    return "{" + body + "}"


class UnificationError(ValueError):
    pass


class OccursCheckError(UnificationError):
    pass


class ClashError(UnificationError):
    pass


def _short(a: Type, limit: int = 200) -> str:
    if tree_size(a, cap=limit + 1) > limit:
        return f"<type with {dag_size(a)} distinct nodes>"
    return pretty_type(a)


class _Unifier:
    """Triangular-substitution unifier with optional rigid variables.

    Rigid variables behave like constants: they may be the image of other
    variables but are never bound themselves.
    """

    def __init__(self, rigid: Iterable[str] = ()):
        self.bindings: dict[str, Type] = {}
        self.rigid = frozenset(rigid)
        self._cache: dict[str, Type] = {}

    def walk(self, a: Type) -> Type:
        while isinstance(a, TVar) and a.name in self.bindings:
            a = self.bindings[a.name]
        return a

    def resolve(self, a: Type) -> Type:
        """Fully apply the bindings.  Shared subterms are resolved once."""
        cache = self._cache
        stack: list[tuple[Type, bool]] = [(a, False)]
        done: dict[int, Type] = {}
        while stack:
            t, expanded = stack.pop()
            key = id(t)
            if key in done:
                continue
            if isinstance(t, TVar):
                if t.name in cache:
                    done[key] = cache[t.name]
                    continue
                if t.name not in self.bindings:
                    done[key] = t
                    continue
                target = self.bindings[t.name]
                if id(target) in done:
                    cache[t.name] = done[key] = done[id(target)]
                elif expanded:
                    raise AssertionError("cyclic binding")  # pragma: no cover
                else:
                    stack.append((t, True))
                    stack.append((target, False))
                continue
            if expanded:
                if isinstance(t, Tensor):
                    l, r = done[id(t.left)], done[id(t.right)]
                    done[key] = t if (l is t.left and r is t.right) else Tensor(l, r)
                else:
                    d, c = done[id(t.dom)], done[id(t.cod)]
                    done[key] = t if (d is t.dom and c is t.cod) else Lolli(d, c)
                continue
            stack.append((t, True))
            if isinstance(t, Tensor):
                stack.append((t.right, False))
                stack.append((t.left, False))
            else:
                stack.append((t.cod, False))
                stack.append((t.dom, False))
        return done[id(a)]

    def occurs(self, name: str, a: Type) -> bool:
        stack = [a]
        seen: set[int] = set()
        while stack:
            t = self.walk(stack.pop())
            if id(t) in seen:
                continue
            seen.add(id(t))
            if isinstance(t, TVar):
                if t.name == name:
                    return True
            elif isinstance(t, Tensor):
                stack.extend((t.left, t.right))
            else:
                stack.extend((t.dom, t.cod))
        return False

    def bind(self, name: str, a: Type) -> None:
        if self.occurs(name, a):
            raise OccursCheckError(f"'{name} occurs in {_short(self.resolve(a))}")
        self.bindings[name] = a
        self._cache.clear()

    def unify(self, a: Type, b: Type) -> None:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x, y = self.walk(x), self.walk(y)
            if isinstance(x, TVar) and isinstance(y, TVar) and x.name == y.name:
                continue
            if isinstance(x, TVar) and x.name not in self.rigid:
                self.bind(x.name, y)
            elif isinstance(y, TVar) and y.name not in self.rigid:
                self.bind(y.name, x)
            elif isinstance(x, TVar) or isinstance(y, TVar):
                raise ClashError(f"cannot unify {_short(self.resolve(x))} with {_short(self.resolve(y))}")
            elif isinstance(x, Tensor) and isinstance(y, Tensor):
                stack.append((x.right, y.right))
                stack.append((x.left, y.left))
            elif isinstance(x, Lolli) and isinstance(y, Lolli):
                stack.append((x.cod, y.cod))
                stack.append((x.dom, y.dom))
            else:
                raise ClashError(f"cannot unify {_short(self.resolve(x))} with {_short(self.resolve(y))}")

    def substitution(self, names: Iterable[str] | None = None) -> TypeSubstitution:
        keys = self.bindings.keys() if names is None else names
        out = {}
        for k in keys:
            v = self.resolve(TVar(k))
            if v != TVar(k):
                out[k] = v
        return out


def unify(a: Type, b: Type, rigid: Iterable[str] = ()) -> TypeSubstitution:
    """Most general unifier of ``a`` and ``b`` as an idempotent substitution."""
    u = _Unifier(rigid)
    u.unify(a, b)
    return u.substitution()


def unify_all(pairs: Iterable[tuple[Type, Type]], rigid: Iterable[str] = ()) -> TypeSubstitution:
    u = _Unifier(rigid)
    for a, b in pairs:
        u.unify(a, b)
    return u.substitution()


def match(pattern: Type, target: Type, theta: dict[str, Type] | None = None) -> TypeSubstitution | None:
    """One-sided matching: ``theta`` with ``theta(pattern) == target`` or None.

    Variables of ``target`` are treated as constants.
    """
    theta = {} if theta is None else dict(theta)
    stack = [(pattern, target)]
    seen: set[tuple[int, int]] = set()
    while stack:
        p, t = stack.pop()
        key = (id(p), id(t))
        if key in seen:
            continue
        seen.add(key)
        if isinstance(p, TVar):
            bound = theta.get(p.name)
            if bound is None:
                theta[p.name] = t
            elif not types_equal(bound, t):
                return None
        elif isinstance(p, Tensor) and isinstance(t, Tensor):
            stack.append((p.left, t.left))
            stack.append((p.right, t.right))
        elif isinstance(p, Lolli) and isinstance(t, Lolli):
            stack.append((p.dom, t.dom))
            stack.append((p.cod, t.cod))
        else:
            return None
    return theta


def instance_of(a: Type, b: Type) -> TypeSubstitution | None:
    """Some ``theta`` with ``theta(b) == a`` (``a`` is an instance of ``b``)."""
    return match(b, a)


# ---------------------------------------------------------------------------
# Canonical renaming


def canonical_names() -> Iterator[str]:
    letters = string.ascii_lowercase
    for c in letters:
        yield c
    i = 1
    while True:
        for c in letters:
            yield f"{c}{i}"
        i += 1


def canonical_renaming(types: Sequence[Type]) -> dict[str, str]:
    mapping: dict[str, str] = {}
    gen = canonical_names()
    for a in types:
        for v in type_vars(a):
            if v not in mapping:
                mapping[v] = next(gen)
    return mapping


def canonicalize_type(a: Type) -> Type:
    return rename_type(a, canonical_renaming([a]))


def rename_apart(a: Type, prefix: str) -> Type:
    return rename_type(a, {v: f"{prefix}{v}" for v in type_vars(a)})


# ---------------------------------------------------------------------------
# Inference


class TypingError(ValueError):
    pass


class FreshSupply:
    """Explicit source of fresh type variables ``_0, _1, ...``."""

    def __init__(self, prefix: str = "_"):
        self.prefix = prefix
        self.counter = 0

    def __call__(self) -> TVar:
        v = TVar(f"{self.prefix}{self.counter}")
        self.counter += 1
        return v


def _generate(t: Term, supply: FreshSupply, unifier: _Unifier, record: dict[int, Type] | None = None) -> tuple[list[tuple[str, Type]], Type]:
    """Constraint generation; returns free-variable context and result type."""
    free: dict[str, Type] = {}

    def go(t: Term, env: dict[str, Type]) -> Type:
        if isinstance(t, Var):
            if t.name in env:
                a = env[t.name]
            else:
                if t.name in free:
                    raise TypingError(f"free variable {t.name} occurs twice")
                a = supply()
                free[t.name] = a
        elif isinstance(t, Lam):
            a0 = supply()
            a = Lolli(a0, go(t.body, {**env, t.binder: a0}))
        elif isinstance(t, App):
            f = go(t.fun, env)
            s = go(t.arg, env)
            a = supply()
            try:
                unifier.unify(f, Lolli(s, a))
            except UnificationError as exc:
                raise TypingError(f"ill-typed application {pretty_term(t)}: {exc}") from None
        elif isinstance(t, Pair):
            a = Tensor(go(t.left, env), go(t.right, env))
        elif isinstance(t, LetPair):
            s = go(t.scrutinee, env)
            x, y = supply(), supply()
            try:
                unifier.unify(s, Tensor(x, y))
            except UnificationError as exc:
                raise TypingError(f"scrutinee of {pretty_term(t)} is not a pair: {exc}") from None
            a = go(t.body, {**env, t.binder1: x, t.binder2: y})
        elif isinstance(t, Hole):
            raise TypingError("cannot type a context")
        else:  # pragma: no cover
            raise TypeError(t)
        if record is not None:
            record[id(t)] = a
        return a

    result = go(t, {})
    context = [(name, free[name]) for name in free_var_order(t)]
    return context, result


def infer_principal_type(t: Term) -> tuple[TypeContext, Type]:
    """Principal typing ``(context, type)`` with canonically renamed variables."""
    report = linearity_check(t)
    if not report.ok:
        raise TypingError(f"term is not linear: {report}")
    supply = FreshSupply()
    unifier = _Unifier()
    context, result = _generate(t, supply, unifier)
    ctx_types = [unifier.resolve(a) for _, a in context]
    ty = unifier.resolve(result)
    renaming = canonical_renaming(ctx_types + [ty])
    ctx = TypeContext(tuple((n, rename_type(a, renaming)) for (n, _), a in zip(context, ctx_types)))
    return ctx, rename_type(ty, renaming)


def principal_type(t: Term) -> Type:
    """Principal type of a term, ignoring the context of free variables."""
    return infer_principal_type(t)[1]


def is_typable(t: Term) -> bool:
    try:
        infer_principal_type(t)
    except TypingError:
        return False
    return True


def check_typing(ctx: TypeContext | Sequence[tuple[str, Type]], t: Term, a: Type) -> bool:
    """Whether ``ctx |- t : a`` is derivable (instance of the principal typing)."""
    ctx = ctx if isinstance(ctx, TypeContext) else TypeContext(tuple(ctx))
    try:
        pctx, pty = infer_principal_type(t)
    except TypingError:
        return False
    if sorted(pctx.names()) != sorted(ctx.names()):
        return False
    theta: dict[str, Type] | None = {}
    for name, pa in pctx:
        theta = match(pa, ctx.lookup(name), theta)
        if theta is None:
            return False
    return match(pty, a, theta) is not None


def implicational_order(a: Type) -> int:
    """order('a) = 1; order(A1->...->An->'a) = max(order(Ai)) + 1."""
    if contains_tensor(a):
        raise ValueError(f"type {pretty_type(a)} contains a tensor")
    doms, _ = uncurry(a)
    if not doms:
        return 1
    return max(implicational_order(d) for d in doms) + 1


# ---------------------------------------------------------------------------
# Poly-typability


class PolyTypingError(ValueError):
    pass


@dataclass(frozen=True)
class PolyWitness:
    """One argument list together with the substitution that justifies it.

    ``subject_pt`` and ``arg_pts`` are the principal types after renaming
    apart; ``theta`` maps their variables so that
    ``theta(subject_pt) == arg_instances[0] -> ... -> result`` and
    ``theta(arg_pts[i]) == arg_instances[i]``.
    """

    args: tuple[Term, ...]
    subject_pt: Type
    arg_pts: tuple[Type, ...]
    theta: tuple[tuple[str, Type], ...]
    arg_instances: tuple[Type, ...]

    @property
    def substitution(self) -> dict[str, Type]:
        return dict(self.theta)


@dataclass(frozen=True)
class PolyTypeCertificate:
    """Evidence that ``subject`` is poly-typable by ``claimed``.

    ``claimed`` is ``A1 -> ... -> An -> B`` where ``n`` is the number of
    arguments of each witness.  Several witnesses certify the same subject
    with respect to several argument lists.
    """

    subject: Term
    claimed: Type
    arity: int
    witnesses: tuple[PolyWitness, ...]

    @property
    def result_type(self) -> Type:
        t = self.claimed
        for _ in range(self.arity):
            t = t.cod  # type: ignore[union-attr]
        return t

    @property
    def domains(self) -> list[Type]:
        doms = []
        t = self.claimed
        for _ in range(self.arity):
            doms.append(t.dom)  # type: ignore[union-attr]
            t = t.cod  # type: ignore[union-attr]
        return doms

    def recheck(self) -> bool:
        """Re-validate the witness equations from the recorded fields alone."""
        result = self.result_type
        for w in self.witnesses:
            theta = w.substitution
            if len(w.args) != self.arity or len(w.arg_pts) != self.arity:
                return False
            expect = arrows(*w.arg_instances, result)
            if not types_equal(apply_subst(theta, w.subject_pt), expect):
                return False
            for pt, inst in zip(w.arg_pts, w.arg_instances):
                if not types_equal(apply_subst(theta, pt), inst):
                    return False
            if set(type_vars(result)) & set(theta):
                return False
        return True

    def verify(self) -> bool:
        """``recheck`` plus recomputation of every recorded principal type."""
        if not self.recheck():
            return False
        pt = principal_type(self.subject)
        for w in self.witnesses:
            if not types_equal(canonicalize_type(w.subject_pt), pt):
                return False
            for arg, apt in zip(w.args, w.arg_pts):
                if not types_equal(canonicalize_type(apt), principal_type(arg)):
                    return False
            for arg, dom in zip(w.args, self.domains):
                if not check_typing(TypeContext(), arg, dom):
                    return False
        return True

    def merge(self, other: "PolyTypeCertificate") -> "PolyTypeCertificate":
        if other.subject != self.subject or other.claimed != self.claimed or other.arity != self.arity:
            raise PolyTypingError("certificates concern different judgements")
        return PolyTypeCertificate(self.subject, self.claimed, self.arity, self.witnesses + other.witnesses)

    def describe(self) -> str:
        lines = [f"subject : {pretty_term(self.subject)}", f"claimed : {pretty_type(self.claimed)}"]
        for i, w in enumerate(self.witnesses):
            args = ", ".join(pretty_term(a) for a in w.args)
            lines.append(f"witness {i} args : {args}")
            lines.append(f"witness {i} theta : {format_subst(w.substitution)}")
        return "\n".join(lines)


def _split_claim(claimed: Type, n: int) -> tuple[list[Type], Type]:
    doms = []
    t = claimed
    for _ in range(n):
        if not isinstance(t, Lolli):
            raise PolyTypingError(f"claimed type {pretty_type(claimed)} takes fewer than {n} arguments")
        doms.append(t.dom)
        t = t.cod
    return doms, t


def check_poly_typable(t: Term, claimed: Type, args: Sequence[Term]) -> PolyTypeCertificate:
    """Certify that ``t`` is poly-typable by ``claimed`` w.r.t. ``args``.

    With ``claimed = A1 -> ... -> An -> B`` we look for ``theta`` with
    ``theta(PT(t)) = theta(PT(s1)) -> ... -> theta(PT(sn)) -> B`` where the
    variables of ``B`` are held fixed, and each ``si`` has type ``Ai``.
    """
    args = tuple(args)
    doms, result = _split_claim(claimed, len(args))
    for i, (s, a) in enumerate(zip(args, doms)):
        if not check_typing(TypeContext(), s, a):
            raise PolyTypingError(f"argument {i + 1} ({pretty_term(s)}) is not of type {pretty_type(a)}")
    try:
        ctx, pt = infer_principal_type(t)
        if len(ctx):
            raise PolyTypingError("subject must be closed")
        arg_pts = []
        for i, s in enumerate(args):
            actx, apt = infer_principal_type(s)
            if len(actx):
                raise PolyTypingError(f"argument {i + 1} must be closed")
            arg_pts.append(rename_apart(apt, f"s{i}_"))
    except TypingError as exc:
        raise PolyTypingError(str(exc)) from None
    subject_pt = rename_apart(pt, "t_")
    rigid = type_vars(result)
    u = _Unifier(rigid)
    try:
        u.unify(subject_pt, arrows(*arg_pts, result))
    except UnificationError as exc:
        raise PolyTypingError(
            f"{pretty_term(t)} is not poly-typable by {pretty_type(claimed)}: {exc}"
        ) from None
    names = type_vars(subject_pt) + [v for a in arg_pts for v in type_vars(a)]
    theta = u.substitution(dict.fromkeys(names))
    witness = PolyWitness(
        args=args,
        subject_pt=subject_pt,
        arg_pts=tuple(arg_pts),
        theta=tuple(sorted(theta.items())),
        arg_instances=tuple(apply_subst(theta, a) for a in arg_pts),
    )
    cert = PolyTypeCertificate(t, claimed, len(args), (witness,))
    assert cert.recheck()
    return cert


def certify(t: Term, claimed: Type, arg_lists: Iterable[Sequence[Term]]) -> PolyTypeCertificate:
    """Certificate covering several argument lists at once."""
    cert: PolyTypeCertificate | None = None
    for args in arg_lists:
        c = check_poly_typable(t, claimed, args)
        cert = c if cert is None else cert.merge(c)
    if cert is None:
        raise PolyTypingError("no argument lists given")
    return cert


def compose_poly(first: PolyTypeCertificate, second: PolyTypeCertificate) -> PolyTypeCertificate:
    """Compose ``t : A->B`` (w.r.t. s, s') with ``t' : B->C`` (w.r.t. t s, t s').

    Returns a certificate for ``fn x=>t' (t x)`` at ``A->C`` w.r.t. the
    arguments of ``first``.
    """
    from .rewrite import equal_beta_eta_c  # local import: rewrite depends on types

    if first.arity != 1 or second.arity != 1:
        raise PolyTypingError("composition needs unary certificates")
    (a,), b = first.domains, first.result_type
    (b2,), c = second.domains, second.result_type
    if b != b2:
        raise PolyTypingError(
            f"middle types differ: {pretty_type(b)} versus {pretty_type(b2)}"
        )
    second_args = [w.args[0] for w in second.witnesses]
    for w in first.witnesses:
        image = App(first.subject, w.args[0])
        if not any(equal_beta_eta_c(image, s, check_types=False) for s in second_args):
            raise PolyTypingError(
                f"second certificate does not cover {pretty_term(first.subject)} {pretty_term(w.args[0])}"
            )
    from .syntax import all_names, fresh_name

    x = fresh_name("x", all_names(first.subject) | all_names(second.subject))
    composed = Lam(x, App(second.subject, App(first.subject, Var(x))))
    return certify(composed, Lolli(a, c), [w.args for w in first.witnesses])
