"""Boolean functions as linear lambda terms.

A coding fixes a type ``A`` and two distinct closed terms of it, ``s1`` for
the bit 0 and ``s2`` for the bit 1.  From the separators of
:mod:`linear_bohm.bohm` we obtain NOT, AND and a duplicator; every truth
table is then compiled by Shannon expansion over that basis, with an
explicit duplicator wherever a variable is used twice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from . import bohm
from .corpus import CODING_TERMS, GATES, GateSpec, lookup, program_for
from .inhabit import inhabitants
from .rewrite import equal_beta_eta_c, normalize
from .syntax import App, Lam, Program, Term, Var, app, is_closed, lams, linearity_check, pretty, tuple_term
from .types import (
    B_HM,
    B_SEQ,
    PolyTypeCertificate,
    Tensor,
    Type,
    apply_subst,
    arrows,
    certify,
    check_typing,
    pretty_type,
)


class BoolError(ValueError):
    pass


@dataclass(frozen=True)
class BooleanCoding:
    name: str
    type: Type
    s1: Term
    s2: Term

    def check(self) -> None:
        for t in (self.s1, self.s2):
            if not is_closed(t) or not check_typing((), t, self.type):
                raise BoolError(f"{pretty(t)} is not a closed term of {pretty_type(self.type)}")
        if equal_beta_eta_c(self.s1, self.s2, check_types=False):
            raise BoolError("the two coding terms are equal")

    def bit(self, b: int) -> Term:
        return self.s2 if b else self.s1

    def decode(self, t: Term) -> int | None:
        for b in (0, 1):
            if equal_beta_eta_c(t, self.bit(b), check_types=False):
                return b
        return None


def builtin_coding(name: str) -> BooleanCoding:
    zero, one = CODING_TERMS[name]
    ty = {"HM": B_HM, "Seq": B_SEQ}[name]
    return BooleanCoding(name, ty, lookup(zero), lookup(one))


CODINGS: dict[str, BooleanCoding] = {n: builtin_coding(n) for n in CODING_TERMS}


def register_coding(c: BooleanCoding) -> BooleanCoding:
    c.check()
    bohm.ldtr(c.type)
    CODINGS[c.name] = c
    return c


def pair_coding() -> BooleanCoding:
    """A coding over ``B_HM * B_HM``, handled by the registered pair transformer."""
    f, t = lookup("False"), lookup("True")
    return BooleanCoding("HMxHM", Tensor(B_HM, B_HM), tuple_term([f, t]), tuple_term([t, f]))


# ---------------------------------------------------------------------------
# Truth tables


@dataclass(frozen=True)
class TruthTable:
    """Outputs for the ``2**arity`` rows in lexicographic order (x1 most significant)."""

    arity: int
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise BoolError("arity must be at least 1")
        if len(self.outputs) != 1 << self.arity:
            raise BoolError(f"expected {1 << self.arity} rows, got {len(self.outputs)}")
        if any(b not in (0, 1) for b in self.outputs):
            raise BoolError("outputs must be bits")

    def rows(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for i, out in enumerate(self.outputs):
            yield tuple((i >> (self.arity - 1 - j)) & 1 for j in range(self.arity)), out

    def __call__(self, *bits: int) -> int:
        index = 0
        for b in bits:
            index = index * 2 + b
        return self.outputs[index]

    @classmethod
    def from_function(cls, arity: int, f) -> "TruthTable":
        return cls(arity, tuple(int(bool(f(*bits))) for bits in itertools.product((0, 1), repeat=arity)))

    @classmethod
    def from_index(cls, arity: int, index: int) -> "TruthTable":
        """Table whose output on row ``i`` is bit ``i`` of ``index``."""
        return cls(arity, tuple((index >> i) & 1 for i in range(1 << arity)))

    @classmethod
    def parse(cls, text: str) -> "TruthTable":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
        if not lines or not lines[0].startswith("n="):
            raise BoolError("first line must be n=<arity>")
        try:
            n = int(lines[0][2:])
        except ValueError:
            raise BoolError(f"bad arity line {lines[0]!r}") from None
        body = lines[1:]
        if n < 1 or len(body) != 1 << n:
            raise BoolError(f"expected {1 << max(n, 0)} rows after n={n}, got {len(body)}")
        outputs = []
        for i, line in enumerate(body):
            lhs, sep, rhs = line.partition("->")
            bits, out = lhs.strip(), rhs.strip()
            expected = format(i, f"0{n}b")
            if not sep or bits != expected or out not in ("0", "1"):
                raise BoolError(f"row {i + 1}: expected '{expected} -> 0|1', got {line!r}")
            outputs.append(int(out))
        return cls(n, tuple(outputs))

    def format(self) -> str:
        lines = [f"n={self.arity}"]
        for bits, out in self.rows():
            lines.append(f"{''.join(map(str, bits))} -> {out}")
        return "\n".join(lines) + "\n"


XOR = TruthTable(2, (0, 1, 1, 0))
MAJORITY = TruthTable.from_function(3, lambda a, b, c: a + b + c >= 2)


# ---------------------------------------------------------------------------
# Gates


def _check_rows(c: BooleanCoding, t: Term, n: int, f, outputs: int = 1) -> None:
    for bits in itertools.product((0, 1), repeat=n):
        want = f(*bits)
        expected = c.bit(want) if outputs == 1 else tuple_term([c.bit(b) for b in want])
        got = app(t, *[c.bit(b) for b in bits])
        if not equal_beta_eta_c(got, expected):
            raise BoolError(f"gate check failed on {bits} for coding {c.name}")


@lru_cache(maxsize=None)
def not_gate(c: BooleanCoding) -> Term:
    c.check()
    t = bohm.separator(bohm.SeparatorSpec(c.type, c.s1, c.s2, c.type, c.s2, c.s1)).term
    _check_rows(c, t, 1, lambda x: 1 - x)
    return t


@lru_cache(maxsize=None)
def duplicate(c: BooleanCoding) -> Term:
    c.check()
    t = bohm.copy_term(c.type, c.s1, c.s2, 2)
    _check_rows(c, t, 1, lambda x: (x, x), outputs=2)
    return t


@lru_cache(maxsize=None)
def and_gate(c: BooleanCoding) -> Term:
    c.check()
    const0 = bohm.constant_term(c.type, c.type, c.s1, [c.s1, c.s2])[0]
    ident = Lam("x", Var("x"))
    t = bohm.binary_separator(c.type, c.s1, c.s2, c.type, c.s1, c.s2, const0, ident).term
    _check_rows(c, t, 2, lambda x, y: x & y)
    return t


# ---------------------------------------------------------------------------
# Compilation


@dataclass(frozen=True)
class Expr:
    op: str  # "var", "const", "not", "and", "or"
    args: tuple["Expr", ...] = ()
    value: int = 0

    def occurrences(self, counts: dict[int, int]) -> None:
        if self.op == "var":
            counts[self.value] = counts.get(self.value, 0) + 1
        for a in self.args:
            a.occurrences(counts)

    def __str__(self) -> str:
        if self.op == "var":
            return f"x{self.value + 1}"
        if self.op == "const":
            return str(self.value)
        if self.op == "not":
            return f"~{self.args[0]}"
        sym = " & " if self.op == "and" else " | "
        return "(" + sym.join(map(str, self.args)) + ")"


def _var(i: int) -> Expr:
    return Expr("var", value=i)


def _const(b: int) -> Expr:
    return Expr("const", value=b)


def _not(e: Expr) -> Expr:
    if e.op == "const":
        return _const(1 - e.value)
    if e.op == "not":
        return e.args[0]
    return Expr("not", (e,))


def _and(a: Expr, b: Expr) -> Expr:
    return Expr("and", (a, b))


def _or(a: Expr, b: Expr) -> Expr:
    return Expr("or", (a, b))


def shannon(outputs: Sequence[int], first: int = 0) -> Expr:
    """Expression for the table ``outputs`` over variables ``first, first+1, ...``."""
    if all(b == outputs[0] for b in outputs):
        return _const(outputs[0])
    half = len(outputs) // 2
    lo, hi = outputs[:half], outputs[half:]
    x = _var(first)
    if list(lo) == list(hi):
        return shannon(lo, first + 1)
    f0, f1 = shannon(lo, first + 1), shannon(hi, first + 1)
    if f1.op == "const" and f0.op == "const":
        return x if f1.value == 1 else _not(x)
    if f0 == _const(0):
        return _and(x, f1)
    if f1 == _const(0):
        return _and(_not(x), f0)
    if f1 == _const(1):
        return _or(x, f0)
    if f0 == _const(1):
        return _or(_not(x), f1)
    return _or(_and(x, f1), _and(_not(x), f0))


@dataclass
class Compiled:
    term: Term
    expression: Expr
    certificate: PolyTypeCertificate
    report: "VerificationReport"


class _Gates:
    def __init__(self, c: BooleanCoding):
        self.c = c
        self.not_t = not_gate(c)
        self.and_t = and_gate(c)
        self.dup = duplicate(c)

    def build(self, e: Expr, names: dict[int, list[str]]) -> Term:
        if e.op == "var":
            return Var(names[e.value].pop(0))
        if e.op == "const":
            return self.c.bit(e.value)
        if e.op == "not":
            return App(self.not_t, self.build(e.args[0], names))
        a = self.build(e.args[0], names)
        b = self.build(e.args[1], names)
        if e.op == "and":
            return app(self.and_t, a, b)
        # x | y = ~(~x & ~y)
        return App(self.not_t, app(self.and_t, App(self.not_t, a), App(self.not_t, b)))


def expression_to_term(c: BooleanCoding, e: Expr, n: int) -> Term:
    """``fn x1 .. xn => e`` with duplicators for repeated and erasers for unused inputs."""
    from .syntax import LetPair

    gates = _Gates(c)
    counts: dict[int, int] = {}
    e.occurrences(counts)
    names = {i: [f"x{i + 1}_{k}" for k in range(counts.get(i, 0))] for i in range(n)}
    body = gates.build(e, {i: list(v) for i, v in names.items()})
    eraser = bohm.eraser(c.type)
    for i in reversed(range(n)):
        k = counts.get(i, 0)
        x = f"x{i + 1}"
        if k == 0:
            body = app(eraser, Var(x), body)
        elif k == 1:
            body = _rename(body, names[i][0], x)
        else:
            occ = names[i]
            rest = [f"x{i + 1}_r{j}" for j in range(k - 1)]
            # peel one occurrence per duplicator: x -> (occ0, r0), r0 -> (occ1, r1) ...
            source = [x] + rest[:-1]
            seconds = rest[:-1] + [occ[-1]]
            for j in reversed(range(k - 1)):
                body = LetPair(occ[j], seconds[j], App(gates.dup, Var(source[j])), body)
    return lams([f"x{i + 1}" for i in range(n)], body)


def _rename(t: Term, old: str, new: str) -> Term:
    from .syntax import substitute

    return substitute(t, old, Var(new))


@dataclass
class RowResult:
    inputs: tuple[int, ...]
    expected: int
    ok: bool


@dataclass
class VerificationReport:
    coding: str
    rows: list[RowResult] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(r.ok for r in self.rows)

    def format(self) -> str:
        lines = []
        for r in self.rows:
            lines.append(f"{''.join(map(str, r.inputs))} -> {r.expected}\t{'ok' if r.ok else 'FAIL'}")
        return "\n".join(lines)


def verify_encoding(c: BooleanCoding, t: Term, f: TruthTable) -> VerificationReport:
    """Check ``t x1 .. xn = y`` for every row; never raises on a failing row."""
    report = VerificationReport(c.name)
    for bits, out in f.rows():
        try:
            ok = equal_beta_eta_c(app(t, *[c.bit(b) for b in bits]), c.bit(out), check_types=False)
        except Exception:
            ok = False
        report.rows.append(RowResult(bits, out, ok))
    return report


def compile_table(c: BooleanCoding, f: TruthTable, *, certify_poly: bool = True) -> Compiled:
    """Closed term representing ``f`` over the coding ``c``, verified on every row."""
    e = shannon(f.outputs)
    t = normalize(expression_to_term(c, e, f.arity))
    report = verify_encoding(c, t, f)
    if not report.all_pass:
        bad = [r.inputs for r in report.rows if not r.ok]
        raise BoolError(f"internal: compiled term fails on rows {bad}")
    arg_lists = [[c.bit(b) for b in bits] for bits, _ in f.rows()]
    claimed = arrows(*([c.type] * f.arity), c.type)
    cert = certify(t, claimed, arg_lists) if certify_poly else None
    return Compiled(t, e, cert, report)  # type: ignore[arg-type]


compile = compile_table  # noqa: A001  (public name used by the CLI and docs)


# ---------------------------------------------------------------------------
# Corpus


@dataclass
class CorpusGate:
    spec: GateSpec
    term: Term
    coding: BooleanCoding

    def check(self) -> bool:
        c = self.coding
        for i, bits in enumerate(itertools.product((0, 1), repeat=self.spec.arity)):
            want = self.spec.outputs[i]
            expected = c.bit(want[0]) if len(want) == 1 else tuple_term([c.bit(b) for b in want])
            if not equal_beta_eta_c(app(self.term, *[c.bit(b) for b in bits]), expected):
                return False
        return True


@dataclass
class Corpus:
    programs: dict[str, Program]
    gates: list[CorpusGate]

    def names(self) -> list[str]:
        seen: list[str] = []
        for prog in self.programs.values():
            for n in prog.names():
                if n not in seen:
                    seen.append(n)
        return seen

    def __getitem__(self, name: str) -> Term:
        return lookup(name)

    def __contains__(self, name: str) -> bool:
        return name in self.names()


@lru_cache(maxsize=None)
def corpus() -> Corpus:
    """Every reference declaration, linearity-checked, with the gate tables."""
    from .corpus import poly_program

    programs = {"HM": program_for("HM"), "Seq": program_for("Seq"), "POLY": poly_program()}
    for label, prog in programs.items():
        for name in prog.names():
            report = linearity_check(prog[name])
            if not report.ok:
                raise BoolError(f"{label} declaration {name} is not linear")
    gates = [CorpusGate(g, lookup(g.name), CODINGS[g.coding]) for g in GATES]
    return Corpus(programs, gates)


# ---------------------------------------------------------------------------
# B_Seq at B_HM into B_HM


@dataclass
class PlainSeparatorReport:
    depth_bound: int
    candidates: int
    plain_witnesses: list[Term]
    separator_term: Term
    separator_ok: bool
    gate_pairs: list[tuple[str, str, bool]]

    @property
    def ok(self) -> bool:
        return not self.plain_witnesses and self.separator_ok and not any(ok for _, _, ok in self.gate_pairs)

    def format(self) -> str:
        lines = [
            f"depth bound\t{self.depth_bound}",
            f"plainly typed candidates\t{self.candidates}",
            f"plain witnesses\t{len(self.plain_witnesses)}",
            f"poly separator\t{'ok' if self.separator_ok else 'FAIL'}",
            f"poly separator term\t{pretty(self.separator_term)}",
        ]
        for f, g, ok in self.gate_pairs:
            lines.append(f"f={f} g={g}\t{'separates' if ok else 'fails'}")
        lines.append(f"result\t{'confirmed' if self.ok else 'NOT confirmed'}")
        return "\n".join(lines)


def appendix_b_type() -> Type:
    """``B_Seq[B_HM/'a] -> B_HM``."""
    from .types import Lolli

    return Lolli(apply_subst({"a": B_HM}, B_SEQ), B_HM)


def appendix_b_check(depth_bound: int = 6, max_size: int = 250) -> PlainSeparatorReport:
    """No plainly typed term maps TrSeq, FlSeq to True, False; a poly-typed one does.

    The search enumerates eta-long normal closed terms of
    ``B_Seq[B_HM/'a] -> B_HM`` whose application nesting is at most
    ``depth_bound``.  The second half repeats the case split on the two
    unary arguments: each is the identity or negation on B_HM, and the four
    combinations are checked directly.
    """
    if depth_bound < 1:
        raise BoolError("depth bound must be at least 1")
    tr, fl = lookup("TrSeq"), lookup("FlSeq")
    true, false = lookup("True"), lookup("False")
    ty = appendix_b_type()
    cands = inhabitants(ty, max_size=max_size, max_depth=depth_bound)
    witnesses = [
        s
        for s in cands
        if equal_beta_eta_c(App(s, tr), true, check_types=False)
        and equal_beta_eta_c(App(s, fl), false, check_types=False)
    ]
    sep = bohm.separator(bohm.SeparatorSpec(B_SEQ, tr, fl, B_HM, true, false))
    sep_ok = equal_beta_eta_c(App(sep.term, tr), true) and equal_beta_eta_c(App(sep.term, fl), false)
    # s = fn h => h x f g for some x : B_HM and unary f, g; TrSeq gives g (f x), FlSeq gives f (g x)
    ident = Lam("x", Var("x"))
    unary = {"id": ident, "not": lookup("Not_HM")}
    pairs = []
    for (fn, f), (gn, g) in itertools.product(unary.items(), repeat=2):
        for x in (true, false):
            ok = equal_beta_eta_c(App(g, App(f, x)), true, check_types=False) and equal_beta_eta_c(
                App(f, App(g, x)), false, check_types=False
            )
            if ok:
                break
        pairs.append((fn, gn, ok))
    return PlainSeparatorReport(depth_bound, len(cands), witnesses, sep.term, sep_ok, pairs)
