"""IMLL proof nets: translation from terms, reduction, and equality.

A net is a set of signed formula occurrences wired together by links.  Each
link kind has fixed premise and conclusion slots::

    ID      premises ()          conclusions (A+, A-)
    TENSOR+ premises (A+, B+)    conclusions ((A*B)+,)
    TENSOR- premises (A-, B-)    conclusions ((A*B)-,)
    LOLLI+  premises (A-, B+)    conclusions ((A->B)+,)
    LOLLI-  premises (A+, B-)    conclusions ((A->B)-,)
    CUT     premises (A+, A-)    conclusions ()

Every occurrence is the conclusion of exactly one link, and the premise of
at most one link; occurrences that are premises of nothing are the
conclusions of the net.  A net translated from a term with free variables
``x1 .. xk`` and type ``B`` has conclusions ``A1- .. Ak-, B+``.

Reduction eliminates cuts (axiom, implication and tensor steps) and then
eta-expands axioms until they are atomic.  Normal nets are compared through a
canonical traversal starting from the conclusions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import App, Lam, LetPair, Pair, Term, Var, free_var_order, freshen, linearity_check
from .types import (
    FreshSupply,
    Lolli,
    Tensor,
    TVar,
    Type,
    TypingError,
    UnificationError,
    _Unifier,
    canonical_names,
    infer_principal_type,
    pretty_type,
    rename_apart,
    rename_type,
    type_vars,
    unify,
    apply_subst,
)

ID, TENSOR_POS, TENSOR_NEG, LOLLI_POS, LOLLI_NEG, CUT = "ID", "⊗+", "⊗-", "⊸+", "⊸-", "CUT"
LINK_KINDS = (ID, TENSOR_POS, TENSOR_NEG, LOLLI_POS, LOLLI_NEG, CUT)


@dataclass(frozen=True, slots=True)
class SignedFormula:
    formula: Type
    positive: bool

    def __str__(self) -> str:
        return f"{pretty_type(self.formula)}^{'+' if self.positive else '-'}"


@dataclass(frozen=True, slots=True)
class Link:
    kind: str
    premises: tuple[int, ...]
    conclusions: tuple[int, ...]


@dataclass(frozen=True)
class ProofNet:
    occurrences: tuple[tuple[int, SignedFormula], ...]
    links: tuple[Link, ...]
    conclusions: tuple[int, ...]

    def occurrence(self, i: int) -> SignedFormula:
        for j, sf in self.occurrences:
            if j == i:
                return sf
        raise KeyError(i)

    def conclusion_formulas(self) -> list[SignedFormula]:
        table = dict(self.occurrences)
        return [table[i] for i in self.conclusions]

    def count(self, kind: str) -> int:
        return sum(1 for link in self.links if link.kind == kind)

    def is_normal(self) -> bool:
        table = dict(self.occurrences)
        for link in self.links:
            if link.kind == CUT:
                return False
            if link.kind == ID and not isinstance(table[link.conclusions[0]].formula, TVar):
                return False
        return True


class NetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Translation


class _Builder:
    def __init__(self) -> None:
        self.formulas: dict[int, Type] = {}
        self.polarity: dict[int, bool] = {}
        self.links: list[Link] = []
        self.next = 0

    def occ(self, formula: Type, positive: bool) -> int:
        i = self.next
        self.next += 1
        self.formulas[i] = formula
        self.polarity[i] = positive
        return i

    def link(self, kind: str, premises: tuple[int, ...], conclusions: tuple[int, ...]) -> None:
        self.links.append(Link(kind, premises, conclusions))


def translate(t: Term, type: Type | None = None) -> ProofNet:
    """The proof net of ``t``, optionally at an instance ``type`` of its principal type.

    The variables of ``type`` are held fixed.  Formula variables are renamed
    canonically, in order of first occurrence in the conclusions.
    """
    report = linearity_check(t)
    if not report.ok:
        raise NetError(f"term is not linear: {report}")
    # hypotheses are tracked by name, so shadowed binders must be renamed apart
    t = freshen(t)
    supply = FreshSupply("n")
    u = _Unifier(type_vars(type) if type is not None else ())
    b = _Builder()
    hyps: dict[str, int] = {}  # unconsumed hypothesis occurrence of each variable
    free_types: dict[str, Type] = {}

    def go(t: Term, env: dict[str, Type]) -> int:
        if isinstance(t, Var):
            a = env.get(t.name)
            if a is None:
                a = supply()
                free_types[t.name] = a
            pos, neg = b.occ(a, True), b.occ(a, False)
            b.link(ID, (), (pos, neg))
            hyps[t.name] = neg
            return pos
        if isinstance(t, Lam):
            a = supply()
            body = go(t.body, {**env, t.binder: a})
            hyp = hyps.pop(t.binder)
            out = b.occ(Lolli(a, b.formulas[body]), True)
            b.link(LOLLI_POS, (hyp, body), (out,))
            return out
        if isinstance(t, App):
            f = go(t.fun, env)
            s = go(t.arg, env)
            r = supply()
            pos, neg = b.occ(r, True), b.occ(r, False)
            b.link(ID, (), (pos, neg))
            m = b.occ(Lolli(b.formulas[s], r), False)
            b.link(LOLLI_NEG, (s, neg), (m,))
            try:
                u.unify(b.formulas[f], b.formulas[m])
            except UnificationError as exc:
                raise NetError(f"untypable application: {exc}") from None
            b.link(CUT, (f, m), ())
            return pos
        if isinstance(t, Pair):
            left = go(t.left, env)
            right = go(t.right, env)
            out = b.occ(Tensor(b.formulas[left], b.formulas[right]), True)
            b.link(TENSOR_POS, (left, right), (out,))
            return out
        if isinstance(t, LetPair):
            s = go(t.scrutinee, env)
            x, y = supply(), supply()
            body = go(t.body, {**env, t.binder1: x, t.binder2: y})
            hx, hy = hyps.pop(t.binder1), hyps.pop(t.binder2)
            m = b.occ(Tensor(x, y), False)
            b.link(TENSOR_NEG, (hx, hy), (m,))
            try:
                u.unify(b.formulas[s], b.formulas[m])
            except UnificationError as exc:
                raise NetError(f"untypable let: {exc}") from None
            b.link(CUT, (s, m), ())
            return body
        raise NetError(f"cannot translate {t!r}")

    out = go(t, {})
    if type is not None:
        try:
            u.unify(b.formulas[out], type)
        except UnificationError as exc:
            raise NetError(f"term does not have type {pretty_type(type)}: {exc}") from None
    conclusions = tuple(hyps[name] for name in free_var_order(t)) + (out,)
    formulas = {i: u.resolve(f) for i, f in b.formulas.items()}
    net = ProofNet(
        tuple((i, SignedFormula(formulas[i], b.polarity[i])) for i in sorted(formulas)),
        tuple(b.links),
        conclusions,
    )
    return _rename_formulas(net, keep=type_vars(type) if type is not None else ())


def _rename_formulas(net: ProofNet, keep=()) -> ProofNet:
    table = dict(net.occurrences)
    mapping: dict[str, str] = {v: v for v in keep}
    gen = (n for n in canonical_names() if n not in set(keep))
    order = list(net.conclusions) + [i for i, _ in net.occurrences]
    for i in order:
        for v in type_vars(table[i].formula):
            if v not in mapping:
                mapping[v] = next(gen)
    occs = tuple(
        (i, SignedFormula(rename_type(sf.formula, mapping), sf.positive)) for i, sf in net.occurrences
    )
    return ProofNet(occs, net.links, net.conclusions)


# ---------------------------------------------------------------------------
# Reduction


class _Work:
    """Mutable copy of a net used during reduction."""

    def __init__(self, net: ProofNet):
        self.occ: dict[int, SignedFormula] = dict(net.occurrences)
        self.links: dict[int, list] = {}
        self.producer: dict[int, int] = {}
        self.consumer: dict[int, tuple[int, int]] = {}
        self.conclusions = list(net.conclusions)
        self.next_occ = max(self.occ, default=-1) + 1
        self.next_link = 0
        for link in net.links:
            self.add_link(link.kind, list(link.premises), list(link.conclusions))

    def add_link(self, kind: str, premises: list[int], conclusions: list[int]) -> int:
        lid = self.next_link
        self.next_link += 1
        self.links[lid] = [kind, premises, conclusions]
        for slot, o in enumerate(premises):
            self.consumer[o] = (lid, slot)
        for o in conclusions:
            self.producer[o] = lid
        return lid

    def remove_link(self, lid: int) -> list:
        kind, premises, conclusions = self.links.pop(lid)
        for o in premises:
            if self.consumer.get(o, (None,))[0] == lid:
                del self.consumer[o]
        for o in conclusions:
            if self.producer.get(o) == lid:
                del self.producer[o]
        return [kind, premises, conclusions]

    def new_occ(self, formula: Type, positive: bool) -> int:
        i = self.next_occ
        self.next_occ += 1
        self.occ[i] = SignedFormula(formula, positive)
        return i

    def redirect(self, old: int, new: int) -> None:
        """Make whatever consumed ``old`` consume ``new`` instead."""
        where = self.consumer.pop(old, None)
        if where is None:
            self.conclusions[self.conclusions.index(old)] = new
            self.consumer.pop(new, None)
        else:
            lid, slot = where
            self.links[lid][1][slot] = new
            self.consumer[new] = (lid, slot)

    def freeze(self) -> ProofNet:
        live = set(self.producer)
        occs = tuple((i, self.occ[i]) for i in sorted(live))
        links = tuple(Link(k, tuple(p), tuple(c)) for k, p, c in (self.links[l] for l in sorted(self.links)))
        return ProofNet(occs, links, tuple(self.conclusions))


def reduce_net(net: ProofNet, budget: int = 1_000_000) -> ProofNet:
    """Cut elimination followed by eta-expansion of non-atomic axioms."""
    w = _Work(net)
    steps = 0
    pending = [lid for lid, (kind, _, _) in w.links.items() if kind == CUT]
    while pending:
        steps += 1
        if steps > budget:
            raise NetError("net reduction budget exceeded")
        cid = pending.pop()
        if cid not in w.links:
            continue
        _, (p, n), _ = w.links[cid]
        lp, ln = w.producer[p], w.producer[n]
        kp, kn = w.links[lp][0], w.links[ln][0]
        if kp == ID:
            w.remove_link(cid)
            _, _, (pos, neg) = w.remove_link(lp)
            w.redirect(neg, n)
            del w.occ[pos], w.occ[neg]
        elif kn == ID:
            w.remove_link(cid)
            _, _, (pos, neg) = w.remove_link(ln)
            w.redirect(pos, p)
            del w.occ[pos], w.occ[neg]
        elif kp == LOLLI_POS and kn == LOLLI_NEG:
            w.remove_link(cid)
            _, (a_neg, b_pos), _ = w.remove_link(lp)
            _, (a_pos, b_neg), _ = w.remove_link(ln)
            del w.occ[p], w.occ[n]
            pending.append(w.add_link(CUT, [a_pos, a_neg], []))
            pending.append(w.add_link(CUT, [b_pos, b_neg], []))
        elif kp == TENSOR_POS and kn == TENSOR_NEG:
            w.remove_link(cid)
            _, (a_pos, b_pos), _ = w.remove_link(lp)
            _, (a_neg, b_neg), _ = w.remove_link(ln)
            del w.occ[p], w.occ[n]
            pending.append(w.add_link(CUT, [a_pos, a_neg], []))
            pending.append(w.add_link(CUT, [b_pos, b_neg], []))
        else:
            raise NetError(f"stuck cut between {kp} and {kn}")
    # eta-expansion
    todo = [lid for lid, (kind, _, _) in w.links.items() if kind == ID]
    while todo:
        lid = todo.pop()
        _, _, (pos, neg) = w.links[lid]
        f = w.occ[pos].formula
        if isinstance(f, TVar):
            continue
        w.remove_link(lid)
        if isinstance(f, Lolli):
            a, bb = f.dom, f.cod
            a_pos, a_neg = w.new_occ(a, True), w.new_occ(a, False)
            b_pos, b_neg = w.new_occ(bb, True), w.new_occ(bb, False)
            todo.append(w.add_link(ID, [], [a_pos, a_neg]))
            todo.append(w.add_link(ID, [], [b_pos, b_neg]))
            w.add_link(LOLLI_POS, [a_neg, b_pos], [pos])
            w.add_link(LOLLI_NEG, [a_pos, b_neg], [neg])
        else:
            a, bb = f.left, f.right
            a_pos, a_neg = w.new_occ(a, True), w.new_occ(a, False)
            b_pos, b_neg = w.new_occ(bb, True), w.new_occ(bb, False)
            todo.append(w.add_link(ID, [], [a_pos, a_neg]))
            todo.append(w.add_link(ID, [], [b_pos, b_neg]))
            w.add_link(TENSOR_POS, [a_pos, b_pos], [pos])
            w.add_link(TENSOR_NEG, [a_neg, b_neg], [neg])
    return w.freeze()


# ---------------------------------------------------------------------------
# Equality


def canonical_encoding(net: ProofNet) -> tuple:
    """A traversal-order encoding; isomorphic nets give equal encodings."""
    table = dict(net.occurrences)
    producer: dict[int, int] = {}
    consumer: dict[int, int] = {}
    for lid, link in enumerate(net.links):
        for o in link.conclusions:
            producer[o] = lid
        for o in link.premises:
            consumer[o] = lid
    occ_index: dict[int, int] = {}
    link_index: dict[int, int] = {}
    encoded_links: list[tuple] = []
    stack: list[int] = []

    def see(o: int) -> int:
        if o not in occ_index:
            occ_index[o] = len(occ_index)
            stack.append(o)
        return occ_index[o]

    def visit_link(lid: int) -> None:
        if lid in link_index:
            return
        link_index[lid] = len(link_index)
        link = net.links[lid]
        encoded_links.append(
            (link.kind, tuple(see(o) for o in link.premises), tuple(see(o) for o in link.conclusions))
        )

    for o in net.conclusions:
        see(o)
    # Explore in discovery order so the numbering depends only on structure.
    cursor = 0
    order: list[int] = list(stack)
    stack.clear()
    while cursor < len(order):
        o = order[cursor]
        cursor += 1
        for lid in (producer.get(o), consumer.get(o)):
            if lid is not None:
                visit_link(lid)
                order.extend(stack)
                stack.clear()
    if len(link_index) != len(net.links):
        raise NetError("net is not connected")
    labels = [None] * len(occ_index)
    for o, i in occ_index.items():
        labels[i] = str(table[o])
    return (
        tuple(occ_index[o] for o in net.conclusions),
        tuple(labels),
        tuple(encoded_links),
    )


def net_equal(n1: ProofNet, n2: ProofNet) -> bool:
    """Whether the normal forms of two nets are isomorphic."""
    return canonical_encoding(reduce_net(n1)) == canonical_encoding(reduce_net(n2))


def common_type(t1: Term, t2: Term) -> Type:
    """Most general common instance of the principal types of two terms."""
    _, a = infer_principal_type(t1)
    _, b = infer_principal_type(t2)
    a, b = rename_apart(a, "l_"), rename_apart(b, "r_")
    theta = unify(a, b)
    return apply_subst(theta, a)


def nets_agree_on(t1: Term, t2: Term) -> bool:
    """Proof-net equality of two terms translated at their common type."""
    try:
        ty = common_type(t1, t2)
    except (TypingError, UnificationError) as exc:
        raise NetError(f"no common type: {exc}") from None
    return net_equal(translate(t1, ty), translate(t2, ty))


# ---------------------------------------------------------------------------
# Rendering


def to_dot(net: ProofNet, name: str = "net") -> str:
    """Graphviz rendering: one node per occurrence, links as edge groups."""
    lines = [f"digraph {name} {{", "  node [shape=plaintext];"]
    for i, sf in sorted(net.occurrences):
        label = str(sf).replace('"', '\\"')
        lines.append(f'  o{i} [label="{label}"];')
    for k, link in enumerate(net.links):
        if link.kind == ID:
            a, b = link.conclusions
            lines.append(f'  o{a} -> o{b} [dir=none, style=bold, label="ID"];')
        elif link.kind == CUT:
            a, b = link.premises
            lines.append(f'  o{a} -> o{b} [dir=none, style=dashed, label="CUT"];')
        else:
            (c,) = link.conclusions
            for p in link.premises:
                lines.append(f'  o{p} -> o{c} [label="{link.kind}"];')
    for pos, c in enumerate(net.conclusions):
        lines.append(f'  c{pos} [shape=point]; o{c} -> c{pos};')
    lines.append("}")
    return "\n".join(lines)


def describe(net: ProofNet) -> str:
    table = dict(net.occurrences)
    out = [f"conclusions: {', '.join(str(table[c]) for c in net.conclusions)}"]
    for link in net.links:
        prem = ", ".join(str(table[o]) for o in link.premises)
        conc = ", ".join(str(table[o]) for o in link.conclusions)
        out.append(f"{link.kind}: [{prem}] => [{conc}]")
    return "\n".join(out)
