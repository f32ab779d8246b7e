"""Separation of closed terms: erasers, constants, projections and separators.

Every construction here is checked before it is returned: the defining
equations are confirmed by normalization and the claimed poly-typing is
certified.  The constructions follow one pattern.  A closed term ``s`` of
``A`` is first sent through a transformer ``LDTr_A`` to an implicational
type of order below four, where it becomes an SLT skeleton.  The slots of
that skeleton are then filled with closed terms chosen by a model-theoretic
argument (module :mod:`linear_bohm.slt`), so that applying the image to the
slot fillers produces the wanted output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from . import slt
from .rewrite import equal_beta_eta_c, normalize
from .slt import Const, FirstVar, SecondApp, SltSkeleton, SltTerm
from .syntax import (
    App,
    Lam,
    Term,
    Var,
    app,
    freshen,
    is_closed,
    lams,
    let_tuple,
    pretty,
    tuple_term,
)
from .types import (
    Lolli,
    PolyTypeCertificate,
    PolyTypingError,
    Tensor,
    TVar,
    Type,
    TypingError,
    arrows,
    canonicalize_type,
    certify,
    check_poly_typable,
    check_typing,
    implicational_order,
    infer_principal_type,
    instance_of,
    is_implicational,
    pretty_type,
    rename_apart,
    tensors,
    type_vars,
    unify,
    apply_subst,
    uncurry,
)


class BohmError(ValueError):
    """A construction could not be carried out (premise or internal failure)."""


class UnsupportedTypeError(BohmError):
    def __init__(self, message: str, subformula: Type | None = None):
        super().__init__(message)
        self.subformula = subformula


def _identity() -> Term:
    return Lam("x", Var("x"))


def _chain(k: int) -> Term:
    """``fn x1 .. xk => x1 (x2 (... (xk I)))``: consumes k unary functions."""
    names = [f"x{i}" for i in range(1, k + 1)]
    body: Term = _identity()
    for n in reversed(names):
        body = App(Var(n), body)
    return lams(names, body)


def _finish(t: Term) -> Term:
    return freshen(normalize(t))


# ---------------------------------------------------------------------------
# Transformers into order below four


@dataclass
class LdtrResult:
    """A transformer ``LDTr_A`` together with its target type.

    ``identity`` marks the trivial transformer, in which case :meth:`apply`
    leaves its argument alone instead of building a redex.
    """

    source: Type
    transformer: Term
    target: Type
    order: int
    name: str
    identity: bool = False
    cache: dict[Term, Term] = field(default_factory=dict, compare=False, repr=False)

    def apply(self, x: Term) -> Term:
        return x if self.identity else App(self.transformer, x)

    def image(self, s: Term) -> Term:
        hit = self.cache.get(s)
        if hit is None:
            hit = normalize(self.apply(s))
            self.cache[s] = hit
        return hit

    @property
    def header(self) -> tuple[int, ...]:
        return slt.header_from_type(self.target)

    def skeleton(self, s: Term) -> SltSkeleton:
        return slt.term_to_slt(self.image(s), self.header, canonical=True)

    def check_injective(self, probes: Sequence[Term]) -> None:
        images = [self.image(p) for p in probes]
        for i, j in itertools.combinations(range(len(probes)), 2):
            if equal_beta_eta_c(probes[i], probes[j], check_types=False):
                continue
            if equal_beta_eta_c(images[i], images[j], check_types=False):
                raise BohmError(
                    f"transformer {self.name} identifies {pretty(probes[i])} and {pretty(probes[j])}"
                )


def _target_type(transformer: Term, a: Type) -> Type:
    """Result type of ``transformer x`` for ``x : a`` (variables of ``a`` fixed)."""
    try:
        ctx, pt = infer_principal_type(transformer)
    except TypingError as exc:
        raise BohmError(f"transformer is untypable: {exc}") from None
    if not isinstance(pt, Lolli):
        raise BohmError("transformer is not a function")
    pt = rename_apart(pt, "l_")
    theta = unify(pt.dom, a, rigid=type_vars(a))
    out = apply_subst(theta, pt.cod)
    # give leftover variables short names distinct from those of ``a``
    taken = set(type_vars(a))
    mapping = {}
    fresh = (f"r{i}" for i in itertools.count(1))
    for v in type_vars(out):
        if v not in taken:
            name = next(fresh)
            while name in taken:
                name = next(fresh)
            mapping[v] = TVar(name)
            taken.add(name)
    return apply_subst(mapping, out)


def _make(a: Type, transformer: Term, name: str, identity: bool = False) -> LdtrResult:
    target = a if identity else _target_type(transformer, a)
    if not is_implicational(target):
        raise UnsupportedTypeError(f"{name} does not produce an implicational type", target)
    order = implicational_order(target)
    if order >= 4:
        raise UnsupportedTypeError(f"{name} produces a type of order {order}", target)
    try:
        slt.header_from_type(target)
    except slt.SltError as exc:
        raise UnsupportedTypeError(str(exc), target) from None
    return LdtrResult(a, transformer, target, order, name, identity)


def _curry_step(a: Type) -> tuple[Term, Type] | None:
    """One application of ``((F->R)->C)->D  ~>  F->(R->C)->D`` inside ``a``.

    Returns the transformer for this step and the new type, or None when no
    argument of ``a`` has order three or more.
    """
    doms, cod = uncurry(a)
    for i, d in enumerate(doms):
        inner, b = uncurry(d)
        for j, e in enumerate(inner):
            if isinstance(e, Lolli):
                f1, r = e.dom, e.cod
                new_inner = inner[:j] + [r] + inner[j + 1:]
                new_d = arrows(*new_inner, b)
                new_doms = doms[:i] + [f1, new_d] + doms[i + 1:]
                ds = [f"d{k}" for k in range(len(doms))]
                es = [f"e{k}" for k in range(len(inner))]
                g_args = [Var(e_) for e_ in es]
                g_args[j] = App(Var(es[j]), Var("a"))
                adapter = lams(es, app(Var("g"), *g_args))
                s_args = [Var(x) for x in ds]
                s_args[i] = adapter
                binders = ds[:i] + ["a", "g"] + ds[i + 1:]
                term = Lam("s", lams(binders, app(Var("s"), *s_args)))
                return term, arrows(*new_doms, cod)
    return None


def _curry_transformer(a: Type) -> LdtrResult:
    steps: list[Term] = []
    current = a
    for _ in range(200):
        step = _curry_step(current)
        if step is None:
            break
        term, current = step
        steps.append(term)
    else:
        raise UnsupportedTypeError("currying rewrites did not terminate", a)
    if not steps:
        raise UnsupportedTypeError("no currying rewrite applies", a)
    body: Term = Var("s0")
    for term in steps:
        body = App(term, body)
    return _make(a, _finish(Lam("s0", body)), "curry")


def _pair_transformer(a: Tensor) -> LdtrResult:
    left, right = ldtr(a.left), ldtr(a.right)
    la = [f"a{i}" for i in range(len(left.header))]
    rb = [f"b{i}" for i in range(len(right.header))]
    body = App(
        App(Var("l"), app(left.apply(Var("u")), *[Var(x) for x in la])),
        app(right.apply(Var("v")), *[Var(x) for x in rb]),
    )
    from .syntax import LetPair

    term = Lam("p", lams(la + rb + ["l"], LetPair("u", "v", Var("p"), body)))
    return _make(a, _finish(term), "pair")


@dataclass
class _Entry:
    name: str
    pattern: Type
    transformer: Term


_REGISTRY: list[_Entry] = []
_CACHE: dict[str, LdtrResult] = {}


def _key(a: Type) -> str:
    return pretty_type(canonicalize_type(a))


def _same_up_to_renaming(a: Type, b: Type) -> bool:
    return instance_of(a, b) is not None and instance_of(b, a) is not None


def register_ldtr(name: str, pattern: Type, transformer: Term, probes: Sequence[Term] = ()) -> LdtrResult:
    """Register a transformer for every type equal to ``pattern`` up to renaming.

    The transformer must be closed and typable at ``pattern -> A0`` with
    ``A0`` implicational of order below four; if probes are given, their
    images must be pairwise distinct.
    """
    if not is_closed(transformer):
        raise BohmError("transformer must be closed")
    result = _make(pattern, transformer, name)
    if probes:
        for p in probes:
            if not check_typing((), p, pattern):
                raise BohmError(f"probe {pretty(p)} does not have type {pretty_type(pattern)}")
        result.check_injective(probes)
    _REGISTRY.insert(0, _Entry(name, pattern, transformer))
    _CACHE.clear()
    return result


def _lookup(a: Type) -> LdtrResult:
    for entry in _REGISTRY:
        if _same_up_to_renaming(a, entry.pattern):
            return _make(a, entry.transformer, entry.name)
    if is_implicational(a):
        if implicational_order(a) < 4:
            return _make(a, _identity(), "identity", identity=True)
        return _curry_transformer(a)
    if isinstance(a, Tensor):
        return _pair_transformer(a)
    raise UnsupportedTypeError(f"no transformer for {pretty_type(a)}", _offending(a))


def _offending(a: Type) -> Type:
    if isinstance(a, Lolli) and not is_implicational(a):
        return a.dom if not is_implicational(a.dom) else _offending(a.cod)
    return a


def ldtr(a: Type, probes: Sequence[Term] = ()) -> LdtrResult:
    """Transformer for ``a`` into an implicational type of order below four.

    Lookup order: registered patterns first, then the identity (order below
    four), currying rewrites (implicational, order four or more) and the
    generic pair transformer.  Types with a tensor to the left of an arrow
    are not covered unless registered.
    """
    key = _key(a)
    result = _CACHE.get(key)
    if result is None or result.source != a:
        result = _lookup(a)
        _CACHE[key] = result
    if probes:
        result.check_injective(probes)
    return result


def _seed_registry() -> None:
    from .corpus import hm_program
    from .types import B_HM

    _REGISTRY.append(_Entry("LDTr_Pair", Tensor(B_HM, B_HM), hm_program()["LDTr_Pair"]))


_seed_registry()


# ---------------------------------------------------------------------------
# Erasers, projections and constants


@lru_cache(maxsize=None)
def eraser(a: Type) -> Term:
    """``fn x0 => LDTr_A x0 I .. I u_k1 .. u_km`` (one filler per header slot).

    Applied to any closed term of ``a`` it reduces to the identity.
    """
    result = ldtr(a)
    fillers = [_identity() if k == 0 else _chain(k) for k in result.header]
    return _finish(Lam("x0", app(result.apply(Var("x0")), *fillers)))


def _erase(a: Type, x: Term, rest: Term) -> Term:
    return App(App(eraser(a), x), rest)


def _probes_for(a: Type, probes: Sequence[Term] | None) -> list[Term]:
    if probes:
        return list(probes)
    from .inhabit import some_inhabitants

    found = list(some_inhabitants(a))
    if not found:
        raise BohmError(f"no closed inhabitant of {pretty_type(a)} found to certify against")
    return found[:4]


def _arg_lists(probes: Sequence[Term], n: int, limit: int = 16) -> list[tuple[Term, ...]]:
    lists = list(itertools.islice(itertools.product(probes, repeat=n), limit))
    return [tuple(x) for x in lists]


def projection_term(a: Type, b: Type, probes: Sequence[Term] | Term | None = None) -> tuple[Term, PolyTypeCertificate]:
    """Term ``t`` with ``t s = I`` for closed ``s : a``, poly-typed by ``a -> (b -> b)``."""
    if isinstance(probes, (Var, Lam, App)) or (probes is not None and not isinstance(probes, (list, tuple))):
        probes = [probes]  # type: ignore[list-item]
    ps = _probes_for(a, probes)  # type: ignore[arg-type]
    t = eraser(a)
    for p in ps:
        if not equal_beta_eta_c(App(t, p), _identity()):
            raise BohmError(f"eraser applied to {pretty(p)} is not the identity")
    cert = certify(t, Lolli(a, Lolli(b, b)), [[p] for p in ps])
    return t, cert


def projection_n(a: Type, n: int, i: int, probes: Sequence[Term] | None = None) -> tuple[Term, PolyTypeCertificate]:
    """The ``i``-th of ``n`` arguments (1-based), erasing the others in order."""
    if n < 1 or not 1 <= i <= n:
        raise BohmError(f"projection index {i} out of range for {n} arguments")
    t = _projection_body(a, n, i)
    ps = _probes_for(a, probes)
    lists = _arg_lists(ps, n)
    for args in lists:
        if not equal_beta_eta_c(app(t, *args), args[i - 1], check_types=False):
            raise BohmError("projection check failed")
    cert = certify(t, arrows(*([a] * n), a), lists)
    return t, cert


@lru_cache(maxsize=None)
def _projection_body(a: Type, n: int, i: int, post: Term | None = None) -> Term:
    names = [f"z{j}" for j in range(1, n + 1)]
    body: Term = Var(names[i - 1]) if post is None else App(post, Var(names[i - 1]))
    for j in reversed(range(n)):
        if j != i - 1:
            body = _erase(a, Var(names[j]), body)
    return _finish(lams(names, body))


@lru_cache(maxsize=None)
def _constant_body(a: Type, n: int, u: Term) -> Term:
    names = [f"z{j}" for j in range(1, n + 1)]
    body: Term = u
    for j in reversed(range(n)):
        body = _erase(a, Var(names[j]), body)
    return _finish(lams(names, body))


def constant_term(a: Type, b: Type, u: Term, probes: Sequence[Term] | None = None) -> tuple[Term, PolyTypeCertificate]:
    """``fn x0 => proj x0 u``: returns ``u`` on every closed term of ``a``."""
    return constant_n(a, 1, u, b, probes)


def constant_n(a: Type, n: int, u: Term, b: Type | None = None, probes: Sequence[Term] | None = None) -> tuple[Term, PolyTypeCertificate]:
    """An ``n``-ary constant function with value ``u``."""
    b = a if b is None else b
    if not check_typing((), u, b):
        raise BohmError(f"{pretty(u)} does not have type {pretty_type(b)}")
    t = _constant_body(a, n, u)
    ps = _probes_for(a, probes)
    lists = _arg_lists(ps, n)
    for args in lists:
        if not equal_beta_eta_c(app(t, *args), u, check_types=False):
            raise BohmError("constant check failed")
    cert = certify(t, arrows(*([a] * n), b), lists)
    return t, cert


# ---------------------------------------------------------------------------
# Strong separation


@dataclass(frozen=True)
class SeparatorSpec:
    a: Type
    s1: Term
    s2: Term
    b: Type
    u1: Term
    u2: Term

    def check(self) -> None:
        for label, t, ty in (("s1", self.s1, self.a), ("s2", self.s2, self.a), ("u1", self.u1, self.b), ("u2", self.u2, self.b)):
            if not is_closed(t):
                raise BohmError(f"{label} must be closed")
            if not check_typing((), t, ty):
                raise BohmError(f"{label} = {pretty(t)} does not have type {pretty_type(ty)}")
        if equal_beta_eta_c(self.s1, self.s2, check_types=False):
            raise BohmError("s1 and s2 are equal; nothing to separate")


@dataclass
class Separation:
    """Result of a separator construction; unpacks as ``(term, certificate)``."""

    term: Term
    certificate: PolyTypeCertificate
    assignment: slt.Assignment | None = None
    skeletons: tuple[SltSkeleton, ...] = ()
    transcript: tuple[str, ...] = ()
    route: str = "slt"

    def __iter__(self) -> Iterator:
        return iter((self.term, self.certificate))


def _slot_filler(b: Type, k: int, f: slt.CPFunction, u1: Term, u2: Term) -> Term:
    if isinstance(f, Const):
        return _constant_body(b, k, u1 if f.value == 0 else u2)
    return _projection_body(b, k, f.index)


def separator(spec: SeparatorSpec) -> Separation:
    """``t`` with ``t s1 = u1`` and ``t s2 = u2``, poly-typed by ``A -> B``.

    Model value 0 selects ``u1`` and value 1 selects ``u2``; the assignment
    is flipped when the first skeleton evaluates to 1.
    """
    return _separator_cached(spec)


@lru_cache(maxsize=None)
def _separator_cached(spec: SeparatorSpec) -> Separation:
    spec.check()
    result = ldtr(spec.a)
    sk1, sk2 = result.skeleton(spec.s1), result.skeleton(spec.s2)
    lines = [
        f"ldtr\t{result.name}",
        f"target\t{pretty_type(result.target)}",
        f"skeleton s1\t{sk1}",
        f"skeleton s2\t{sk2}",
    ]
    if sk1.body == sk2.body:
        raise BohmError(f"transformer {result.name} maps s1 and s2 to the same skeleton")
    rho = slt.separate(sk1.body, sk2.body)
    if slt.eval_slt(sk1.body, rho) == 1:
        rho = rho.dual()
        lines.append("assignment\tdual taken so that s1 evaluates to 0")
    lines.append(f"assignment\t{rho}")
    args: list[Term] = []
    for name, k in sk1.header:
        if k == 0:
            args.append(spec.u1 if rho.first(name) == 0 else spec.u2)
        else:
            args.append(_slot_filler(spec.b, k, rho.second(name), spec.u1, spec.u2))
    t = _finish(Lam("x0", app(result.apply(Var("x0")), *args)))
    for s, u, label in ((spec.s1, spec.u1, "s1"), (spec.s2, spec.u2, "s2")):
        if not equal_beta_eta_c(App(t, s), u):
            raise BohmError(f"internal: separator fails on {label}")
        lines.append(f"check t {label}\tok")
    try:
        cert = certify(t, Lolli(spec.a, spec.b), [[spec.s1], [spec.s2]])
    except PolyTypingError as exc:
        raise BohmError(f"internal: separator not poly-typable: {exc}") from None
    lines.append("poly-typing\tcertified")
    return Separation(t, cert, rho, (sk1, sk2), tuple(lines))


def copy_separation(a: Type, s1: Term, s2: Term, n: int) -> Separation:
    if n < 2:
        raise BohmError("copy needs n >= 2")
    b = tensors([a] * n)
    return separator(SeparatorSpec(a, s1, s2, b, tuple_term([s1] * n), tuple_term([s2] * n)))


def copy_term(a: Type, s1: Term, s2: Term, n: int) -> Term:
    """``Copy_A_n`` with ``Copy s1 = (s1,..,s1)`` and ``Copy s2 = (s2,..,s2)``."""
    return copy_separation(a, s1, s2, n).term


# ---------------------------------------------------------------------------
# Separation with a second argument


@dataclass(frozen=True)
class DecisionRow:
    u1: str
    u2: str
    f_choice: str
    g: str
    h: str
    k: str


DONT_CARE = "don't care"

_TABLE_ROWS = (
    DecisionRow("const", "const", "left", "const", "const", DONT_CARE),
    DecisionRow("const", "id", "left", "const", "id", DONT_CARE),
    DecisionRow("const", "neg", "left", "const", "neg", DONT_CARE),
    DecisionRow("id", "const", "right", "const", DONT_CARE, "id"),
    DecisionRow("neg", "const", "right", "const", DONT_CARE, "neg"),
    DecisionRow("id", "id", "left", "id", "id", "id"),
    DecisionRow("neg", "neg", "left", "id", "neg", DONT_CARE),
    DecisionRow("id", "neg", "left", "neg", "neg", DONT_CARE),
    DecisionRow("neg", "id", "left", "neg", "id", DONT_CARE),
)


@dataclass(frozen=True)
class DecisionTable:
    """Behaviours of ``u1``/``u2`` to the choices for the nodes F, G, H, K."""

    rows: tuple[DecisionRow, ...] = _TABLE_ROWS

    def lookup(self, u1: str, u2: str) -> tuple[int, DecisionRow]:
        for i, row in enumerate(self.rows, 1):
            if row.u1 == u1 and row.u2 == u2:
                return i, row
        raise KeyError((u1, u2))


DECISION_TABLE = DecisionTable()

# Model of the two-argument construction.  The value of a node is the pair
# (class of the output on r1, class on r2), classes being indices into the
# list of distinct outputs.  Options per slot:
#   ("const", o)          constant output class o
#   ("sur", (a, b))       leaf fed a copy of the second argument, mapped
#                          r1 -> a, r2 -> b
#   ("proj", p, m)        the p-th argument, then m in {"id", "neg"}
#   ("fresh", (a, b))     internal node that discards its arguments and
#                          maps its own copy of the second argument
Option = tuple

ID_PAIR = (0, 1)
NEG_PAIR = (1, 0)


def behaviour(pair: tuple[int, int]) -> str:
    if pair[0] == pair[1]:
        return "const"
    return "id" if pair == ID_PAIR else "neg"


def _eval(t: SltTerm, choice: dict[str, Option]) -> tuple[int, int]:
    opt = choice[t.name]
    kind = opt[0]
    if kind == "const":
        return (opt[1], opt[1])
    if kind in ("sur", "fresh"):
        return opt[1]
    assert isinstance(t, SecondApp)
    a, b = _eval(t.args[opt[1] - 1], choice)
    return (a, b) if opt[2] == "id" else (1 - a, 1 - b)


def _uses_copy(opt: Option) -> bool:
    return opt[0] in ("sur", "fresh")


def _live_leaves(t: SltTerm, choice: dict[str, Option], out: set[str]) -> None:
    opt = choice.get(t.name)
    if isinstance(t, FirstVar):
        out.add(t.name)
        return
    if opt is None:
        for a in t.args:
            _live_leaves(a, choice, out)
    elif opt[0] == "proj":
        _live_leaves(t.args[opt[1] - 1], choice, out)


def _tidy(choice: dict[str, Option], trees: Sequence[SltTerm]) -> dict[str, Option]:
    """Replace options on unreachable leaves by a constant, saving copies."""
    live: set[str] = set()
    for t in trees:
        _live_leaves(t, choice, live)
    out = dict(choice)
    for name, opt in choice.items():
        if opt[0] == "sur" and name not in live:
            out[name] = ("const", 0)
    return out


def _node_index(t: SltTerm) -> dict[str, tuple[tuple[int, ...], SltTerm]]:
    out: dict[str, tuple[tuple[int, ...], SltTerm]] = {}

    def go(u: SltTerm, path: tuple[int, ...]) -> None:
        out[u.name] = (path, u)
        if isinstance(u, SecondApp):
            for i, a in enumerate(u.args):
                go(a, path + (i,))

    go(t, ())
    return out


def _at(t: SltTerm, path: tuple[int, ...]) -> SltTerm | None:
    for i in path:
        if not isinstance(t, SecondApp) or i >= len(t.args):
            return None
        t = t.args[i]
    return t


def _ancestors(t: SltTerm, path: tuple[int, ...]) -> list[tuple[str, int]]:
    """``(name, child index)`` for each proper ancestor, root first."""
    out = []
    node = t
    for i in path:
        out.append((node.name, i))
        node = node.args[i]  # type: ignore[union-attr]
    return out


def _names(t: SltTerm) -> set[str]:
    return set(_node_index(t))


def _down_path(t: SltTerm, avoid: str) -> list[tuple[str, int]] | None:
    """Steps from ``t`` down to a leaf that never visit ``avoid``."""
    if t.name == avoid:
        return None
    if isinstance(t, FirstVar):
        return []
    for i, a in enumerate(t.args):
        rest = _down_path(a, avoid)
        if rest is not None:
            return [(t.name, i)] + rest
    return None


def _path_avoids(t: SltTerm, x: str, y: str) -> bool:
    """Is there a root-to-leaf path through ``x`` that misses ``y``?"""
    idx = _node_index(t)
    if x not in idx:
        return False
    path, node = idx[x]
    if any(n == y for n, _ in _ancestors(t, path)):
        return False
    return _down_path(node, y) is not None


class _Conflict(Exception):
    pass


def _pin(choice: dict[str, Option], name: str, opt: Option) -> None:
    if name in choice and choice[name] != opt:
        raise _Conflict(name)
    choice[name] = opt


def _leaf_option(pair: tuple[int, int]) -> Option:
    return ("const", pair[0]) if pair[0] == pair[1] else ("sur", pair)


def _assign_target(choice, tree: SltTerm, x: str, avoid: str, want: tuple[int, int], style: str) -> None:
    idx = _node_index(tree)
    path, node = idx[x]
    for anc, i in _ancestors(tree, path):
        _pin(choice, anc, ("proj", i + 1, "id"))
    if isinstance(node, FirstVar):
        _pin(choice, x, _leaf_option(want))
    elif want[0] == want[1]:
        _pin(choice, x, ("const", want[0]))
    elif style == "fresh":
        _pin(choice, x, ("fresh", want))
    else:
        down = _down_path(node, avoid)
        if down is None:
            raise _Conflict(x)
        (first, i0), rest = down[0], down[1:]
        _pin(choice, first, ("proj", i0 + 1, "id" if want == ID_PAIR else "neg"))
        for n, i in rest:
            _pin(choice, n, ("proj", i + 1, "id"))
        leaf = _at(node, tuple(i for _, i in down))
        assert leaf is not None
        _pin(choice, leaf.name, ("sur", ID_PAIR))


def _complete(choice: dict[str, Option], header: Sequence[tuple[str, int]]) -> dict[str, Option]:
    out = dict(choice)
    for name, _ in header:
        out.setdefault(name, ("const", 0))
    return out


def _satisfies(choice, t1, t2, b1, b2) -> bool:
    return _eval(t1, choice) == b1 and _eval(t2, choice) == b2


def _try_target_pair(header, t1, t2, p, q, b1, b2, style) -> dict[str, Option] | None:
    choice: dict[str, Option] = {}
    try:
        _assign_target(choice, t1, p, q, b1, style)
        _assign_target(choice, t2, q, p, b2, style)
    except _Conflict:
        return None
    full = _complete(choice, header)
    return full if _satisfies(full, t1, t2, b1, b2) else None


def _locate(t1: SltTerm, t2: SltTerm):
    """Find (F, G, H) as in the case analysis, or None."""
    idx1, idx2 = _node_index(t1), _node_index(t2)
    arity = {n: (len(u.args) if isinstance(u, SecondApp) else 0) for n, (_, u) in idx1.items()}
    for g, (path1, _) in idx1.items():
        path2 = idx2[g][0]
        if path1 == path2:
            continue
        anc2 = {n for n, _ in _ancestors(t2, path2)}
        f = None
        for n, _ in reversed(_ancestors(t1, path1)):
            if arity[n] >= 2 and n in anc2:
                f = n
                break
        if f is None:
            continue
        h_node = _at(t2, path1)
        if h_node is None or h_node.name == g:
            continue
        return f, g, h_node.name
    return None


def _table_assignment(header, t1, t2, f, g, h, b1, b2):
    idx1, idx2 = _node_index(t1), _node_index(t2)
    k_node = _at(t1, idx2[g][0])
    if k_node is None:
        return None
    k = k_node.name
    if not (not _path_avoids(t2, g, k) and _path_avoids(t1, k, g)):
        return "swap", k
    row_no, row = DECISION_TABLE.lookup(behaviour(b1), behaviour(b2))
    f_path = idx1[f][0]
    steps_g = _ancestors(t1, idx1[g][0])
    steps_k = _ancestors(t1, idx1[k][0])
    left = next((i for n, i in steps_g if n == f), None)
    right = next((i for n, i in steps_k if n == f), None)
    if left is None or right is None or left == right:
        return None
    base: dict[str, Option] = {}
    try:
        for anc, i in _ancestors(t1, f_path):
            _pin(base, anc, ("proj", i + 1, "id"))
        _pin(base, f, ("proj", (left if row.f_choice == "left" else right) + 1, "id"))
    except _Conflict:
        return None
    specials = {g: row.g, h: row.h, k: row.k}
    # every other internal node projects towards a special node if it has one below
    for name, (path, node) in list(idx1.items()):
        if name in base or name in specials or isinstance(node, FirstVar):
            continue
        toward = None
        for tree in (t1, t2):
            tidx = _node_index(tree)
            for s in specials:
                sp = tidx[s][0]
                mine = tidx[name][0]
                if len(sp) > len(mine) and sp[: len(mine)] == mine:
                    toward = sp[len(mine)]
                    break
            if toward is not None:
                break
        base[name] = ("proj", (toward or 0) + 1, "id")
    const_cells = [s for s, fn in specials.items() if fn == "const"]
    for consts in itertools.product((0, 1), repeat=len(const_cells)):
        choice = dict(base)
        for s, fn in specials.items():
            node = idx1[s][1]
            if fn == "const":
                choice[s] = ("const", consts[const_cells.index(s)])
            elif isinstance(node, FirstVar):
                choice[s] = ("sur", NEG_PAIR if fn == "neg" else ID_PAIR)
            else:
                below = [i for i, a in enumerate(node.args) if _names(a) & set(specials)]
                choice[s] = ("proj", (below[0] if below else 0) + 1, "neg" if fn == "neg" else "id")
        for name, _ in header:
            choice.setdefault(name, ("sur", ID_PAIR))
        if _satisfies(choice, t1, t2, b1, b2):
            return choice, row_no
    return None


def _guided(header, t1, t2, b1, b2) -> tuple[str, dict[str, Option]] | None:
    """Case analysis on the two skeletons, then a scan over target pairs."""
    found = _case_analysis(header, t1, t2, b1, b2)
    if found is not None:
        return found
    scanned = _scan_pairs(header, t1, t2, b1, b2)
    if scanned is None:
        return None
    return ("guided:degenerate" if _locate(t1, t2) is None else "guided:scan", scanned)


def _scan_pairs(header, t1, t2, b1, b2) -> dict[str, Option] | None:
    """Some node P of T1 and Q of T2 that can carry the two behaviours."""
    names1 = list(_node_index(t1))
    names2 = list(_node_index(t2))
    for style in ("project", "fresh"):
        for p in names1:
            for q in names2:
                if p == q:
                    continue
                found = _try_target_pair(header, t1, t2, p, q, b1, b2, style)
                if found:
                    return found
    return None


def _case_analysis(header, t1, t2, b1, b2) -> tuple[str, dict[str, Option]] | None:
    located = _locate(t1, t2)
    if located is not None:
        f, g, h = located
        case1 = _path_avoids(t1, g, h) and _path_avoids(t2, h, g)
        if case1:
            found = _try_target_pair(header, t1, t2, g, h, b1, b2, "project")
            return ("guided:case1", found) if found else None
        if not _path_avoids(t1, g, h) and _path_avoids(t2, h, g):
            res = _table_assignment(header, t1, t2, f, g, h, b1, b2)
            if isinstance(res, tuple) and res and res[0] == "swap":
                # the roles of G and H move to K and G
                k = res[1]
                found = _try_target_pair(header, t1, t2, k, g, b1, b2, "project")
                return ("guided:case1", found) if found else None
            if res is None:
                return None
            choice, row_no = res
            return (f"guided:case2:row{row_no}", choice)
        found = _try_target_pair(header, t1, t2, h, g, b1, b2, "fresh")
        return ("guided:case3", found) if found else None
    return None


def _options(k: int, n_classes: int) -> list[Option]:
    consts = [("const", o) for o in range(n_classes)]
    if k == 0:
        return consts + ([("sur", ID_PAIR), ("sur", NEG_PAIR)] if n_classes == 2 else [])
    projs = [("proj", p, "id") for p in range(1, k + 1)]
    if n_classes == 2:
        projs += [("proj", p, "neg") for p in range(1, k + 1)]
        projs += [("fresh", ID_PAIR), ("fresh", NEG_PAIR)]
    return consts + projs


def _search(header, t1, t2, b1, b2, n_classes) -> dict[str, Option] | None:
    names = [n for n, _ in header]
    for combo in itertools.product(*[_options(k, n_classes) for _, k in header]):
        choice = dict(zip(names, combo))
        if _satisfies(choice, t1, t2, b1, b2):
            return choice
    return None


@dataclass
class BinarySeparation:
    term: Term
    certificate: PolyTypeCertificate
    route: str
    skeletons: tuple[SltSkeleton, SltSkeleton]
    choice: dict[str, Option]
    classes: tuple[Term, ...]
    transcript: tuple[str, ...] = ()

    def __iter__(self) -> Iterator:
        return iter((self.term, self.certificate))


def _class_index(classes: list[Term], t: Term) -> int:
    for i, c in enumerate(classes):
        if equal_beta_eta_c(c, t, check_types=False):
            return i
    classes.append(t)
    return len(classes) - 1


def binary_separator(
    a: Type,
    s1: Term,
    s2: Term,
    a0: Type,
    r1: Term,
    r2: Term,
    u1: Term,
    u2: Term,
    *,
    b: Type | None = None,
    strategy: str = "auto",
) -> BinarySeparation:
    """``t`` with ``t si rj = ui rj`` for i, j in {1, 2}, poly-typed by ``A -> A0 -> B``.

    ``b`` defaults to ``a0``.  ``strategy`` is ``"auto"`` (guided, then
    search), ``"guided"`` or ``"search"``.
    """
    b = a0 if b is None else b
    SeparatorSpec(a, s1, s2, a, s1, s2).check()
    for label, r in (("r1", r1), ("r2", r2)):
        if not is_closed(r) or not check_typing((), r, a0):
            raise BohmError(f"{label} must be a closed term of type {pretty_type(a0)}")
    for label, u in (("u1", u1), ("u2", u2)):
        for r in (r1, r2):
            try:
                check_poly_typable(u, Lolli(a0, b), [r])
            except PolyTypingError as exc:
                raise BohmError(f"{label} is not poly-typable by A0 -> B: {exc}") from None
    classes: list[Term] = []
    outputs = {}
    for i, u in ((0, u1), (1, u2)):
        for j, r in ((0, r1), (1, r2)):
            nf = normalize(App(u, r))
            outputs[i, j] = _class_index(classes, nf)
    if len(classes) > 2:
        raise BohmError("premise violated: more than two distinct outputs")
    for c in classes:
        if not check_typing((), c, b):
            raise BohmError(f"output {pretty(c)} does not have type {pretty_type(b)}")
    b1 = (outputs[0, 0], outputs[0, 1])
    b2 = (outputs[1, 0], outputs[1, 1])
    result = ldtr(a)
    sk1, sk2 = result.skeleton(s1), result.skeleton(s2)
    if sk1.body == sk2.body:
        raise BohmError(f"transformer {result.name} maps s1 and s2 to the same skeleton")
    header = sk1.header
    lines = [
        f"ldtr\t{result.name}",
        f"skeleton s1\t{sk1}",
        f"skeleton s2\t{sk2}",
        f"behaviour u1\t{behaviour(b1)}",
        f"behaviour u2\t{behaviour(b2)}",
    ]
    route, choice = "search", None
    if strategy in ("auto", "guided"):
        guided = _guided(header, sk1.body, sk2.body, b1, b2)
        if guided is not None:
            route, choice = guided
    if choice is None:
        if strategy == "guided":
            raise BohmError("guided construction does not apply to these skeletons")
        route = "search"
        choice = _search(header, sk1.body, sk2.body, b1, b2, len(classes))
        if choice is None:
            raise BohmError("template search exhausted without a separator")
    choice = _tidy(choice, (sk1.body, sk2.body))
    assert _satisfies(choice, sk1.body, sk2.body, b1, b2)
    lines.append(f"route\t{route}")
    lines.append("choice\t" + " ".join(f"{n}={_fmt_option(choice[n])}" for n, _ in header))
    t = _realize(result, header, choice, a0, b, r1, r2, classes)
    for (i, si), (j, rj) in itertools.product(((0, s1), (1, s2)), ((0, r1), (1, r2))):
        expected = App((u1, u2)[i], rj)
        if not equal_beta_eta_c(app(t, si, rj), expected):
            raise BohmError(f"internal: equation for s{i + 1}, r{j + 1} fails")
        lines.append(f"check t s{i + 1} r{j + 1}\tok")
    try:
        cert = certify(t, arrows(a, a0, b), [(s1, r1), (s1, r2), (s2, r1), (s2, r2)])
    except PolyTypingError as exc:
        raise BohmError(f"internal: result not poly-typable: {exc}") from None
    lines.append("poly-typing\tcertified")
    return BinarySeparation(t, cert, route, (sk1, sk2), choice, tuple(classes), tuple(lines))


def _fmt_option(opt: Option) -> str:
    if opt[0] == "const":
        return f"C{opt[1]}"
    if opt[0] == "proj":
        return f"P{opt[1]}" + ("" if opt[2] == "id" else "~")
    return f"{opt[0]}{behaviour(opt[1])}"


def _surjection(a0: Type, b: Type, r1: Term, r2: Term, classes: Sequence[Term], pair) -> Term:
    target1, target2 = classes[pair[0]], classes[pair[1]]
    if (
        equal_beta_eta_c(target1, r1, check_types=False)
        and equal_beta_eta_c(target2, r2, check_types=False)
        and check_typing((), r1, b)
        and check_typing((), r2, b)
    ):
        return _identity()
    return separator(SeparatorSpec(a0, r1, r2, b, target1, target2)).term


def _realize(result: LdtrResult, header, choice, a0, b, r1, r2, classes) -> Term:
    copies = [n for n, _ in header if _uses_copy(choice[n])]
    ys = {n: f"y{i + 1}" for i, n in enumerate(copies)}
    if len(copies) == 1:
        ys = {copies[0]: "y0"}
    neg = None
    if any(opt[0] == "proj" and opt[2] == "neg" for opt in choice.values()):
        neg = separator(SeparatorSpec(b, classes[0], classes[1], b, classes[1], classes[0])).term
    args: list[Term] = []
    for name, k in header:
        opt = choice[name]
        if opt[0] == "const":
            args.append(classes[opt[1]] if k == 0 else _constant_body(b, k, classes[opt[1]]))
        elif opt[0] == "sur":
            args.append(App(_surjection(a0, b, r1, r2, classes, opt[1]), Var(ys[name])))
        elif opt[0] == "fresh":
            inner = App(_surjection(a0, b, r1, r2, classes, opt[1]), Var(ys[name]))
            zs = [f"z{j}" for j in range(1, k + 1)]
            body: Term = inner
            for z in reversed(zs):
                body = _erase(b, Var(z), body)
            args.append(lams(zs, body))
        else:
            args.append(_projection_body(b, k, opt[1], neg if opt[2] == "neg" else None))
    body = app(result.apply(Var("x0")), *args)
    if not copies:
        body = _erase(a0, Var("y0"), body)
    elif len(copies) > 1:
        dup = copy_term(a0, r1, r2, len(copies))
        body = let_tuple([ys[n] for n in copies], App(dup, Var("y0")), body)
    return _finish(Lam("x0", Lam("y0", body)))
