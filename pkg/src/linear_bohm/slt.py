"""Second-order linear terms and their two-valued model.

An SLT term is either a first-order variable ``x`` or an application
``G(t1, ..., tk)`` of a second-order variable of arity ``k``.  Closed
implicational linear terms of order below four are exactly such terms
wrapped in a header of binders (see :func:`term_to_slt`).

The model interprets first-order variables as bits and second-order
variables as constant functions or projections.  :func:`separate` searches
every such interpretation for one that tells two distinct terms apart; the
inner search runs in a compiled kernel when it is available.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

from .syntax import App, Term, Var, lams, spine, strip_lams
from .types import Lolli, TVar, Type, uncurry

PURE_ENV = "LINEAR_BOHM_PURE_PYTHON"


def _load_kernel():
    if os.environ.get(PURE_ENV, "") not in ("", "0"):
        from . import _slt_kernel_py as k
        return k
    try:
        from . import _slt_kernel as k  # type: ignore[attr-defined]
    except ImportError:
        from . import _slt_kernel_py as k
    return k


_kernel = _load_kernel()
KERNEL: str = _kernel.NAME


class SltError(ValueError):
    """Malformed SLT input, or a request the model cannot satisfy."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class FirstVar:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class SecondApp:
    name: str
    args: tuple["SltTerm", ...] = ()

    def __str__(self) -> str:
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


SltTerm = Union[FirstVar, SecondApp]


def first_order_vars(t: SltTerm) -> list[str]:
    """First-order variables in left-to-right order (with repeats)."""
    out: list[str] = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, FirstVar):
            out.append(u.name)
        else:
            stack.extend(reversed(u.args))
    return out


def second_order_vars(t: SltTerm) -> list[tuple[str, int]]:
    """``(name, arity)`` of each second-order occurrence, pre-order."""
    out: list[tuple[str, int]] = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, SecondApp):
            out.append((u.name, len(u.args)))
            stack.extend(reversed(u.args))
    return out


def well_formedness_problems(t: SltTerm) -> list[str]:
    problems = []
    firsts = first_order_vars(t)
    for name in sorted(set(firsts)):
        if firsts.count(name) > 1:
            problems.append(f"first-order variable {name} occurs {firsts.count(name)} times")
    seconds = [n for n, _ in second_order_vars(t)]
    for name in sorted(set(seconds)):
        if seconds.count(name) > 1:
            problems.append(f"second-order variable {name} occurs {seconds.count(name)} times")
    if set(firsts) & set(seconds):
        problems.append("a name is used both as first- and second-order variable")
    return problems


def is_well_formed(t: SltTerm) -> bool:
    return not well_formedness_problems(t)


def check_well_formed(t: SltTerm) -> None:
    problems = well_formedness_problems(t)
    if problems:
        raise SltError(f"ill-formed SLT term {t}: " + "; ".join(problems))


def slt_size(t: SltTerm) -> int:
    return len(first_order_vars(t)) + len(second_order_vars(t))


_SLT_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(.))")


def parse_slt(text: str) -> SltTerm:
    """Parse the textual form, e.g. ``G2(x1, G1(x2))``.

    ``G()`` denotes a nullary second-order application; a bare identifier
    is a first-order variable.
    """
    tokens = [(m.group(1), m.group(2)) for m in _SLT_TOKEN.finditer(text) if m.group(1) or m.group(2)]
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def term() -> SltTerm:
        nonlocal pos
        ident, sym = peek()
        if ident is None:
            raise SltError(f"expected an identifier in {text!r}, found {sym!r}")
        pos += 1
        if peek()[1] != "(":
            return FirstVar(ident)
        pos += 1
        args: list[SltTerm] = []
        if peek()[1] == ")":
            pos += 1
            return SecondApp(ident, ())
        while True:
            args.append(term())
            _, sym = peek()
            pos += 1
            if sym == ")":
                return SecondApp(ident, tuple(args))
            if sym != ",":
                raise SltError(f"expected ',' or ')' in {text!r}")

    result = term()
    if pos != len(tokens):
        raise SltError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------------------
# Assignments and evaluation


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise SltError(f"constant must be 0 or 1, got {self.value}")

    def __str__(self) -> str:
        return f"C{self.value}"


@dataclass(frozen=True)
class Proj:
    index: int  # 1-based

    def __post_init__(self) -> None:
        if self.index < 1:
            raise SltError(f"projection index must be positive, got {self.index}")

    def __str__(self) -> str:
        return f"P{self.index}"


CPFunction = Union[Const, Proj]


def cp_options(arity: int) -> list[CPFunction]:
    """Interpretations of a second-order variable, in search order."""
    return [Const(0), Const(1)] + [Proj(i) for i in range(1, arity + 1)]


def apply_cp(f: CPFunction, values: Sequence[int]) -> int:
    if isinstance(f, Const):
        return f.value
    if f.index > len(values):
        raise SltError(f"projection P{f.index} applied to {len(values)} arguments")
    return values[f.index - 1]


@dataclass(frozen=True)
class Assignment:
    """Bits for first-order variables and CP functions for second-order ones.

    Both parts are tuples of pairs so that the printed order is stable.
    """

    rho1: tuple[tuple[str, int], ...] = ()
    rho2: tuple[tuple[str, CPFunction], ...] = ()

    @classmethod
    def of(cls, rho1: Mapping[str, int] | None = None, rho2: Mapping[str, CPFunction] | None = None) -> "Assignment":
        return cls(tuple((rho1 or {}).items()), tuple((rho2 or {}).items()))

    def first(self, name: str) -> int:
        for n, v in self.rho1:
            if n == name:
                return v
        raise SltError(f"assignment does not cover first-order variable {name}")

    def second(self, name: str) -> CPFunction:
        for n, f in self.rho2:
            if n == name:
                return f
        raise SltError(f"assignment does not cover second-order variable {name}")

    def dual(self) -> "Assignment":
        """Swap 0 and 1 everywhere; every term's value flips."""
        rho2 = tuple((n, Const(1 - f.value) if isinstance(f, Const) else f) for n, f in self.rho2)
        return Assignment(tuple((n, 1 - v) for n, v in self.rho1), rho2)

    def __str__(self) -> str:
        left = " ".join(f"{n}={v}" for n, v in self.rho1)
        right = " ".join(f"{n}={f}" for n, f in self.rho2)
        return f"{left} ; {right}".strip()


def eval_slt(t: SltTerm, a: Assignment) -> int:
    """Value of ``t`` in the two-point model under ``a``."""
    if isinstance(t, FirstVar):
        return a.first(t.name)
    f = a.second(t.name)
    if isinstance(f, Proj) and f.index > len(t.args):
        raise SltError(f"{t.name} has arity {len(t.args)} but is interpreted as {f}")
    if isinstance(f, Const):
        # arguments are still checked for coverage
        for arg in t.args:
            eval_slt(arg, a)
        return f.value
    return eval_slt(t.args[f.index - 1], a)


# ---------------------------------------------------------------------------
# Separation


def _natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


def vocabulary(*terms: SltTerm) -> tuple[list[str], list[tuple[str, int]]]:
    """Sorted first-order names and ``(name, arity)`` second-order entries."""
    firsts: set[str] = set()
    seconds: dict[str, int] = {}
    for t in terms:
        firsts.update(first_order_vars(t))
        for name, k in second_order_vars(t):
            if seconds.setdefault(name, k) != k:
                raise SltError(f"second-order variable {name} used with arities {seconds[name]} and {k}")
    return sorted(firsts, key=_natural_key), sorted(seconds.items(), key=lambda p: _natural_key(p[0]))


def compile_program(t: SltTerm, first_index: Mapping[str, int], second_index: Mapping[str, int]) -> list[int]:
    """Postfix encoding understood by the kernels."""
    out: list[int] = []

    def go(u: SltTerm) -> None:
        if isinstance(u, FirstVar):
            out.append(first_index[u.name])
        else:
            for arg in u.args:
                go(arg)
            out.append(-(second_index[u.name] + 1))

    go(t)
    return out


def assignment_from_search(firsts: Sequence[str], seconds: Sequence[tuple[str, int]], choice: Sequence[int], row: int) -> Assignment:
    n = len(firsts)
    rho1 = tuple((x, (row >> (n - 1 - i)) & 1) for i, x in enumerate(firsts))
    rho2 = tuple((g, cp_options(k)[c]) for (g, k), c in zip(seconds, choice))
    return Assignment(rho1, rho2)


def separate(s1: SltTerm, s2: SltTerm, *, kernel=None) -> Assignment:
    """Least assignment (in the fixed search order) with different values.

    Second-order interpretations form the outer loop, ordered C0, C1, P1,
    ..., Pk per variable with the first variable most significant; the
    first-order bits form the inner loop in binary counting order.
    """
    check_well_formed(s1)
    check_well_formed(s2)
    if s1 == s2:
        raise SltError(f"cannot separate a term from itself: {s1}")
    firsts, seconds = vocabulary(s1, s2)
    fi = {x: i for i, x in enumerate(firsts)}
    si = {g: i for i, (g, _) in enumerate(seconds)}
    k = kernel or _kernel
    hit = k.search(compile_program(s1, fi, si), compile_program(s2, fi, si), len(firsts), [a for _, a in seconds])
    if hit is None:
        raise AssertionError(f"separation search exhausted for distinct well-formed terms {s1} and {s2}")
    a = assignment_from_search(firsts, seconds, *hit)
    if eval_slt(s1, a) == eval_slt(s2, a):
        raise AssertionError(f"kernel returned a non-separating assignment {a} for {s1} / {s2}")
    return a


def separate_naive(s1: SltTerm, s2: SltTerm) -> Assignment | None:
    """Reference search by direct evaluation; same order as :func:`separate`."""
    from itertools import product

    firsts, seconds = vocabulary(s1, s2)
    for fs in product(*[cp_options(k) for _, k in seconds]):
        for bits in product((0, 1), repeat=len(firsts)):
            a = Assignment(tuple(zip(firsts, bits)), tuple((g, f) for (g, _), f in zip(seconds, fs)))
            if eval_slt(s1, a) != eval_slt(s2, a):
                return a
    return None


def enumerate_slt(first_names: Sequence[str], seconds: Mapping[str, int]) -> Iterator[SltTerm]:
    """Every well-formed term over the given variables.

    ``seconds`` maps second-order names to their arities.  Each variable is
    used at most once; not all of them need to be used.  Intended for
    exhaustive checks at small scale.
    """

    def build(fs: frozenset[str], ss: frozenset[str]):
        for x in sorted(fs):
            yield FirstVar(x), fs - {x}, ss
        for g in sorted(ss):
            yield from args(g, seconds[g], [], fs, ss - {g})

    def args(g, k, acc, fs, ss):
        if len(acc) == k:
            yield SecondApp(g, tuple(acc)), fs, ss
            return
        for a, fs2, ss2 in build(fs, ss):
            yield from args(g, k, acc + [a], fs2, ss2)

    for t, _, _ in build(frozenset(first_names), frozenset(seconds)):
        yield t


# ---------------------------------------------------------------------------
# Bridge to lambda-terms


@dataclass(frozen=True)
class SltSkeleton:
    """A header of binders ``(name, arity)`` plus an SLT body.

    Arity 0 marks a first-order binder.  The header order is the order of
    the lambdas in the corresponding term.
    """

    header: tuple[tuple[str, int], ...]
    body: SltTerm

    @property
    def first_order(self) -> list[str]:
        return [n for n, k in self.header if k == 0]

    @property
    def second_order(self) -> list[tuple[str, int]]:
        return [(n, k) for n, k in self.header if k > 0]

    def check(self) -> None:
        check_well_formed(self.body)
        names = [n for n, _ in self.header]
        if len(set(names)) != len(names):
            raise SltError(f"duplicate binder in header {names}")
        used = {n: k for n, k in second_order_vars(self.body)}
        used.update({x: 0 for x in first_order_vars(self.body)})
        declared = dict(self.header)
        if set(used) != set(declared):
            raise SltError(f"body variables {sorted(used)} differ from header {names}")
        for n, k in used.items():
            if declared[n] != k:
                raise SltError(f"{n} declared with arity {declared[n]} but used with {k}")

    def __str__(self) -> str:
        fo = ", ".join(self.first_order) or "-"
        so = ", ".join(f"{n}/{k}" for n, k in self.second_order) or "-"
        return f"({fo}; {so}; body {self.body})"


def header_from_type(a: Type) -> tuple[int, ...]:
    """Binder arities of the canonical shape for an implicational type.

    Each argument type must be a type variable (arity 0) or a function from
    type variables to a type variable (its arity).
    """
    domains, _ = uncurry(a)
    out = []
    for d in domains:
        if isinstance(d, TVar):
            out.append(0)
            continue
        ds, cod = uncurry(d)
        if not isinstance(cod, TVar) or not all(isinstance(x, TVar) for x in ds):
            raise SltError("argument type is not first- or second-order over type variables")
        out.append(len(ds))
    return tuple(out)


def _body_to_slt(t: Term, arity: dict[str, int]) -> SltTerm:
    head, args = spine(t)
    if not isinstance(head, Var):
        raise SltError(f"head of {t} is not a variable; term is not in canonical shape")
    if head.name not in arity:
        raise SltError(f"free variable {head.name} in body")
    expected = arity[head.name]
    if expected is None:
        arity[head.name] = expected = len(args)
    if expected != len(args):
        raise SltError(f"{head.name} expects {expected} arguments but receives {len(args)}")
    if not args:
        return FirstVar(head.name)
    return SecondApp(head.name, tuple(_body_to_slt(a, arity) for a in args))


def term_to_slt(t: Term, header: Sequence[int] | None = None, *, canonical: bool = False) -> SltSkeleton:
    """Read a closed implicational normal term as a skeleton.

    ``header`` gives the expected binder arities (from
    :func:`header_from_type`); with it, an eta-short term is padded by
    extra binders applied to the head.  With ``canonical=True`` binders are
    renamed ``x1..`` (first-order) and ``G1..`` (second-order) by position,
    so that two images of the same header share a vocabulary.
    """
    binders, body = strip_lams(t)
    if header is not None and len(binders) < len(header):
        from .syntax import all_names, app, fresh_name

        avoid = set(all_names(t))
        extra = []
        for _ in range(len(header) - len(binders)):
            name = fresh_name("z", avoid)
            avoid.add(name)
            extra.append(name)
        binders = binders + extra
        body = app(body, *[Var(n) for n in extra])
    if header is not None and len(binders) != len(header):
        raise SltError(f"term has {len(binders)} binders but the header has {len(header)}")
    if len(set(binders)) != len(binders):
        raise SltError("repeated binder name")
    arity: dict[str, int | None] = {b: (header[i] if header is not None else None) for i, b in enumerate(binders)}
    sk_body = _body_to_slt(body, arity)  # type: ignore[arg-type]
    unused = [b for b in binders if arity[b] is None]
    if unused:
        raise SltError(f"binders {unused} are never used")
    hdr = tuple((b, arity[b]) for b in binders)
    sk = SltSkeleton(hdr, sk_body)  # type: ignore[arg-type]
    sk.check()
    if canonical:
        sk = rename_skeleton(sk)
    return sk


def rename_skeleton(sk: SltSkeleton) -> SltSkeleton:
    mapping: dict[str, str] = {}
    nf = ns = 0
    for n, k in sk.header:
        if k == 0:
            nf += 1
            mapping[n] = f"x{nf}"
        else:
            ns += 1
            mapping[n] = f"G{ns}"
    return SltSkeleton(tuple((mapping[n], k) for n, k in sk.header), rename_slt(sk.body, mapping))


def rename_slt(t: SltTerm, mapping: Mapping[str, str]) -> SltTerm:
    if isinstance(t, FirstVar):
        return FirstVar(mapping.get(t.name, t.name))
    return SecondApp(mapping.get(t.name, t.name), tuple(rename_slt(a, mapping) for a in t.args))


def slt_body_to_term(t: SltTerm) -> Term:
    if isinstance(t, FirstVar):
        return Var(t.name)
    out: Term = Var(t.name)
    for a in t.args:
        out = App(out, slt_body_to_term(a))
    return out


def slt_to_term(sk: SltSkeleton) -> Term:
    sk.check()
    return lams([n for n, _ in sk.header], slt_body_to_term(sk.body))


def skeleton_type(sk: SltSkeleton) -> Type:
    """The simple type that the skeleton's term receives with a single base.

    Every first-order binder and every argument gets the base ``'a``; this
    is an instance of the term's principal type and has order at most 3.
    """
    base = TVar("a")
    domains = []
    for _, k in sk.header:
        d: Type = base
        for _ in range(k):
            d = Lolli(base, d)
        domains.append(d)
    out: Type = base
    for d in reversed(domains):
        out = Lolli(d, out)
    return out


__all__ = [
    "Assignment",
    "CPFunction",
    "Const",
    "FirstVar",
    "KERNEL",
    "Proj",
    "SecondApp",
    "SltError",
    "SltSkeleton",
    "SltTerm",
    "eval_slt",
    "header_from_type",
    "parse_slt",
    "separate",
    "slt_to_term",
    "term_to_slt",
]
