"""Abstract and surface syntax of linear lambda-terms.

Terms are immutable dataclasses.  Every node may carry a :class:`SourceSpan`
recording the byte range it was parsed from; spans never take part in
equality, so two structurally identical terms compare equal regardless of
where they came from.

The surface notation is ML-flavoured::

    fn x=>t                      abstraction (body extends to the right)
    t s                          application (left associative)
    (t, s)                       pair
    let val (x,y)=s in t end     pair elimination (``end`` optional)
    fun f x1 ... xn = t;         declaration sugar for f = fn x1=>...=>fn xn=>t

Identifiers match ``[A-Za-z_][A-Za-z0-9_']*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


# ---------------------------------------------------------------------------
# Data types


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Half-open byte range ``[start, end)`` into the parsed source."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"span start {self.start} exceeds end {self.end}")

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Lam:
    binder: str
    body: "Term"
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Pair:
    left: "Term"
    right: "Term"
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, slots=True)
class LetPair:
    binder1: str
    binder2: str
    scrutinee: "Term"
    body: "Term"
    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.binder1 == self.binder2:
            raise ValueError(f"let-pair binds {self.binder1!r} twice")

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True, slots=True)
class Hole:
    """The hole ``[]`` of a one-hole context.  Never appears in real terms."""

    span: SourceSpan | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return "[]"


Term = Union[Var, Lam, App, Pair, LetPair, Hole]


@dataclass(frozen=True)
class Declaration:
    """One ``fun``/``val`` declaration.

    ``body`` is the term as written (it may mention earlier declarations by
    name); ``term`` is the elaborated closed term with every reference
    inlined.
    """

    name: str
    params: tuple[str, ...]
    body: Term
    term: Term
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Program:
    declarations: tuple[Declaration, ...]

    def names(self) -> list[str]:
        return [d.name for d in self.declarations]

    def __contains__(self, name: object) -> bool:
        return any(d.name == name for d in self.declarations)

    def __getitem__(self, name: str) -> Term:
        for d in self.declarations:
            if d.name == name:
                return d.term
        raise KeyError(name)

    def get(self, name: str, default: Term | None = None) -> Term | None:
        try:
            return self[name]
        except KeyError:
            return default

    def environment(self) -> dict[str, Term]:
        return {d.name: d.term for d in self.declarations}


class SyntaxErrorWithSpan(ValueError):
    """Raised for malformed input; ``span`` locates the offending text."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.span = span
        where = f" at {span}" if span is not None else ""
        super().__init__(f"{message}{where}")


class ProgramError(ValueError):
    """Raised when declarations cannot be elaborated."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.span = span
        where = f" at {span}" if span is not None else ""
        super().__init__(f"{message}{where}")


class SubstitutionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lexer

KEYWORDS = frozenset({"fn", "let", "val", "in", "end", "fun"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\(\*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<arrow>=>)
  | (?P<sym>[(),=;\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "ident", "kw", "sym", "eof"
    text: str
    start: int
    end: int


class _Offsets:
    """Converts character offsets to UTF-8 byte offsets."""

    def __init__(self, text: str):
        self._ascii = text.isascii()
        if not self._ascii:
            table = [0]
            total = 0
            for ch in text:
                total += len(ch.encode("utf-8"))
                table.append(total)
            self._table = table

    def __call__(self, i: int) -> int:
        return i if self._ascii else self._table[i]


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; ``(* ... *)`` comments nest and are skipped."""
    offs = _Offsets(text)
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SyntaxErrorWithSpan(
                f"unexpected character {text[pos]!r}", SourceSpan(offs(pos), offs(pos + 1))
            )
        kind = m.lastgroup
        if kind == "comment":
            depth, i = 1, m.end()
            while depth and i < n:
                if text.startswith("(*", i):
                    depth, i = depth + 1, i + 2
                elif text.startswith("*)", i):
                    depth, i = depth - 1, i + 2
                else:
                    i += 1
            if depth:
                raise SyntaxErrorWithSpan("unterminated comment", SourceSpan(offs(pos), offs(n)))
            pos = i
            continue
        if kind != "ws":
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "kw"
            elif kind == "arrow":
                kind = "sym"
            tokens.append(Token(kind, word, offs(m.start()), offs(m.end())))
        pos = m.end()
    tokens.append(Token("eof", "", offs(n), offs(n)))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers -------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.kind in ("kw", "sym") and tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail("expected an identifier")
        return self.advance()

    def fail(self, message: str) -> None:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise SyntaxErrorWithSpan(f"{message}, found {found}", SourceSpan(tok.start, tok.end))

    # grammar -------------------------------------------------------------
    def term(self) -> Term:
        if self.at("fn"):
            return self.lam()
        if self.at("let"):
            return self.let()
        return self.application()

    def lam(self) -> Term:
        start = self.expect("fn").start
        name = self.expect_ident().text
        self.expect("=>")
        body = self.term()
        return Lam(name, body, SourceSpan(start, _end(body, start)))

    def let(self) -> Term:
        start = self.expect("let").start
        self.expect("val")
        self.expect("(")
        names = [self.expect_ident()]
        while self.at(","):
            self.advance()
            names.append(self.expect_ident())
        close = self.expect(")")
        if len(names) < 2:
            raise SyntaxErrorWithSpan(
                "let pattern needs at least two names", SourceSpan(start, close.end)
            )
        seen: dict[str, Token] = {}
        for tok in names:
            if tok.text in seen:
                raise SyntaxErrorWithSpan(
                    f"duplicate let binder {tok.text!r}", SourceSpan(tok.start, tok.end)
                )
            seen[tok.text] = tok
        self.expect("=")
        scrutinee = self.term()
        self.expect("in")
        body = self.term()
        end = _end(body, start)
        if self.at("end"):
            end = self.advance().end
        span = SourceSpan(start, end)
        return self._nest_let([t.text for t in names], scrutinee, body, span)

    def _nest_let(self, names: list[str], scrutinee: Term, body: Term, span: SourceSpan) -> Term:
        # (x1, x2, ..., xn) abbreviates (x1, (x2, ... xn)).
        if len(names) == 2:
            return LetPair(names[0], names[1], scrutinee, body, span)
        avoid = set(names) | free_vars(body) | free_vars(scrutinee)
        rest = fresh_name("rest", avoid)
        inner = self._nest_let(names[1:], Var(rest), body, span)
        return LetPair(names[0], rest, scrutinee, inner, span)

    def application(self) -> Term:
        head = self.atom()
        start = _start(head, self.tok.start)
        while True:
            if self._at_atom_start():
                arg = self.atom()
            elif self.at("fn") or self.at("let"):
                arg = self.term()  # extends maximally, so it is the last argument
            else:
                return head
            head = App(head, arg, SourceSpan(start, _end(arg, start)))

    def _at_atom_start(self) -> bool:
        return self.tok.kind == "ident" or self.at("(")

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            return Var(tok.text, SourceSpan(tok.start, tok.end))
        if self.at("("):
            start = self.advance().start
            items = [self.term()]
            while self.at(","):
                self.advance()
                items.append(self.term())
            end = self.expect(")").end
            span = SourceSpan(start, end)
            if len(items) == 1:
                return _reposition(items[0], span)
            result = items[-1]
            for item in reversed(items[:-1]):
                result = Pair(item, result, span)
            return result
        self.fail("expected a term")
        raise AssertionError  # unreachable

    def declarations(self) -> list[tuple[str, tuple[str, ...], Term, SourceSpan, Token]]:
        out = []
        while self.tok.kind != "eof":
            if self.at("-"):
                self.advance()  # interactive prompt marker in pasted transcripts
                continue
            if self.at(";"):
                self.advance()
                continue
            start = self.tok.start
            if self.at("fun"):
                self.advance()
                name_tok = self.expect_ident()
                params: list[str] = []
                while self.tok.kind == "ident":
                    params.append(self.advance().text)
            elif self.at("val"):
                self.advance()
                name_tok = self.expect_ident()
                params = []
            else:
                self.fail("expected 'fun' or 'val'")
            if len(set(params)) != len(params):
                raise SyntaxErrorWithSpan(
                    f"repeated parameter in declaration of {name_tok.text!r}",
                    SourceSpan(name_tok.start, name_tok.end),
                )
            self.expect("=")
            body = self.term()
            end = self.expect(";").end
            out.append((name_tok.text, tuple(params), body, SourceSpan(start, end), name_tok))
        return out


def _start(t: Term, default: int) -> int:
    return t.span.start if t.span is not None else default


def _end(t: Term, default: int) -> int:
    return t.span.end if t.span is not None else default


def _reposition(t: Term, span: SourceSpan) -> Term:
    """Widen the outer span of a parenthesised term to include the parens."""
    if isinstance(t, Var):
        return Var(t.name, span)
    if isinstance(t, Lam):
        return Lam(t.binder, t.body, span)
    if isinstance(t, App):
        return App(t.fun, t.arg, span)
    if isinstance(t, Pair):
        return Pair(t.left, t.right, span)
    if isinstance(t, LetPair):
        return LetPair(t.binder1, t.binder2, t.scrutinee, t.body, span)
    return t


def parse_term(text: str) -> Term:
    """Parse a single term."""
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return t


def parse_program(text: str, environment: dict[str, Term] | None = None) -> Program:
    """Parse and elaborate a sequence of declarations.

    Each declaration may refer to the ones before it (and to names in
    ``environment``); references are replaced by freshly renamed copies of
    the referenced closed term.
    """
    p = _Parser(text)
    raw = p.declarations()
    env: dict[str, Term] = dict(environment or {})
    defined: set[str] = set()
    decls: list[Declaration] = []
    for name, params, body, span, name_tok in raw:
        if name in defined:
            raise ProgramError(f"redefinition of {name!r}", SourceSpan(name_tok.start, name_tok.end))
        term = body
        for param in reversed(params):
            term = Lam(param, term, span)
        missing = [v for v in _free_occurrences(term) if v.name not in env]
        if missing:
            v = missing[0]
            raise ProgramError(f"reference to undefined name {v.name!r} in {name!r}", v.span)
        term = freshen(inline(term, env))
        report = linearity_check(term)
        if not report.ok:
            raise ProgramError(f"declaration {name!r} is not linear: {report}", span)
        env[name] = term
        defined.add(name)
        decls.append(Declaration(name, params, body, term, span))
    return Program(tuple(decls))


def inline(t: Term, env: dict[str, Term]) -> Term:
    """Replace each free occurrence of a name in ``env`` by its definition."""
    if not env:
        return t

    def go(t: Term, bound: frozenset[str]) -> Term:
        if isinstance(t, Var):
            if t.name not in bound and t.name in env:
                return env[t.name]
            return t
        if isinstance(t, Lam):
            return Lam(t.binder, go(t.body, bound | {t.binder}), t.span)
        if isinstance(t, App):
            return App(go(t.fun, bound), go(t.arg, bound), t.span)
        if isinstance(t, Pair):
            return Pair(go(t.left, bound), go(t.right, bound), t.span)
        if isinstance(t, LetPair):
            return LetPair(
                t.binder1,
                t.binder2,
                go(t.scrutinee, bound),
                go(t.body, bound | {t.binder1, t.binder2}),
                t.span,
            )
        return t

    return go(t, frozenset())


# ---------------------------------------------------------------------------
# Pretty printing

_PREC_TERM, _PREC_APP, _PREC_ATOM = 0, 1, 2


def pretty(t: Term) -> str:
    """Render ``t`` in the surface syntax; the output re-parses to ``t``."""
    out: list[str] = []
    _pp(t, _PREC_TERM, out)
    return "".join(out)


def _pp(t: Term, prec: int, out: list[str]) -> None:
    # Iterative spine handling keeps deep application chains off the stack.
    if isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Hole):
        out.append("[]")
    elif isinstance(t, Pair):
        out.append("(")
        _pp(t.left, _PREC_TERM, out)
        out.append(",")
        _pp(t.right, _PREC_TERM, out)
        out.append(")")
    elif isinstance(t, App):
        if prec > _PREC_APP:
            out.append("(")
        spine = []
        head: Term = t
        while isinstance(head, App):
            spine.append(head.arg)
            head = head.fun
        _pp(head, _PREC_ATOM, out)
        for arg in reversed(spine):
            out.append(" ")
            _pp(arg, _PREC_ATOM, out)
        if prec > _PREC_APP:
            out.append(")")
    elif isinstance(t, Lam):
        if prec > _PREC_TERM:
            out.append("(")
        out.append(f"fn {t.binder}=>")
        _pp(t.body, _PREC_TERM, out)
        if prec > _PREC_TERM:
            out.append(")")
    elif isinstance(t, LetPair):
        if prec > _PREC_TERM:
            out.append("(")
        out.append(f"let val ({t.binder1},{t.binder2})=")
        _pp(t.scrutinee, _PREC_TERM, out)
        out.append(" in ")
        _pp(t.body, _PREC_TERM, out)
        out.append(" end")
        if prec > _PREC_TERM:
            out.append(")")
    else:  # pragma: no cover
        raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Variables


def _free_occurrences(t: Term) -> list[Var]:
    """Free variable occurrences of ``t`` in left-to-right order."""
    out: list[Var] = []

    def go(t: Term, bound: frozenset[str]) -> None:
        if isinstance(t, Var):
            if t.name not in bound:
                out.append(t)
        elif isinstance(t, Lam):
            go(t.body, bound | {t.binder})
        elif isinstance(t, App):
            go(t.fun, bound)
            go(t.arg, bound)
        elif isinstance(t, Pair):
            go(t.left, bound)
            go(t.right, bound)
        elif isinstance(t, LetPair):
            go(t.scrutinee, bound)
            go(t.body, bound | {t.binder1, t.binder2})

    go(t, frozenset())
    return out


def free_vars(t: Term) -> set[str]:
    """FV(t).  For a context, the free variables of its non-hole part."""
    return {v.name for v in _free_occurrences(t)}


def free_var_order(t: Term) -> list[str]:
    """Free variables in order of first occurrence."""
    seen: dict[str, None] = {}
    for v in _free_occurrences(t):
        seen.setdefault(v.name)
    return list(seen)


def bound_vars(t: Term) -> set[str]:
    """BV(t): every name bound by a ``fn`` or a ``let`` somewhere in ``t``."""
    out: set[str] = set()
    for node in subterms(t):
        if isinstance(node, Lam):
            out.add(node.binder)
        elif isinstance(node, LetPair):
            out.update((node.binder1, node.binder2))
    return out


def all_names(t: Term) -> set[str]:
    out: set[str] = set()
    for node in subterms(t):
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, Lam):
            out.add(node.binder)
        elif isinstance(node, LetPair):
            out.update((node.binder1, node.binder2))
    return out


def captured_vars(ctx: Term) -> set[str]:
    """CV(C[]): the binders whose scope contains the hole of ``ctx``.

    A let-pair captures its two names only when the hole sits in its body;
    a hole inside the scrutinee is not in their scope.
    """
    path = hole_path(ctx)
    if path is None:
        raise ValueError("context has no hole")
    out: set[str] = set()
    node = ctx
    for step in path:
        if isinstance(node, Lam):
            out.add(node.binder)
        elif isinstance(node, LetPair) and step == 1:
            out.update((node.binder1, node.binder2))
        node = child(node, step)
    return out


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order traversal without recursion."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Lam):
            stack.append(node.body)
        elif isinstance(node, App):
            stack.append(node.arg)
            stack.append(node.fun)
        elif isinstance(node, Pair):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, LetPair):
            stack.append(node.body)
            stack.append(node.scrutinee)


def size(t: Term) -> int:
    """Number of nodes."""
    return sum(1 for _ in subterms(t))


def is_closed(t: Term) -> bool:
    return not _free_occurrences(t)


# ---------------------------------------------------------------------------
# Positions: a path is a tuple of child indices.
#   Lam: body=0; App: fun=0, arg=1; Pair: left=0, right=1;
#   LetPair: scrutinee=0, body=1.

Path = tuple[int, ...]


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, LetPair):
        return (t.scrutinee, t.body)
    return ()


def child(t: Term, i: int) -> Term:
    kids = children(t)
    if not 0 <= i < len(kids):
        raise IndexError(f"no child {i} in {type(t).__name__}")
    return kids[i]


def with_child(t: Term, i: int, new: Term) -> Term:
    if isinstance(t, Lam) and i == 0:
        return Lam(t.binder, new, t.span)
    if isinstance(t, App):
        return App(new, t.arg, t.span) if i == 0 else App(t.fun, new, t.span)
    if isinstance(t, Pair):
        return Pair(new, t.right, t.span) if i == 0 else Pair(t.left, new, t.span)
    if isinstance(t, LetPair):
        if i == 0:
            return LetPair(t.binder1, t.binder2, new, t.body, t.span)
        return LetPair(t.binder1, t.binder2, t.scrutinee, new, t.span)
    raise IndexError(f"no child {i} in {type(t).__name__}")


def subterm_at(t: Term, path: Path) -> Term:
    for i in path:
        t = child(t, i)
    return t


def replace_at(t: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    return with_child(t, path[0], replace_at(child(t, path[0]), path[1:], new))


def positions(t: Term) -> Iterator[tuple[Path, Term]]:
    """All (path, subterm) pairs in pre-order, leftmost first."""
    stack: list[tuple[Path, Term]] = [((), t)]
    while stack:
        path, node = stack.pop()
        yield path, node
        kids = children(node)
        for i in range(len(kids) - 1, -1, -1):
            stack.append((path + (i,), kids[i]))


def hole_path(ctx: Term) -> Path | None:
    for path, node in positions(ctx):
        if isinstance(node, Hole):
            return path
    return None


def plug(ctx: Term, t: Term) -> Term:
    path = hole_path(ctx)
    if path is None:
        raise ValueError("context has no hole")
    return replace_at(ctx, path, t)


def format_path(path: Path) -> str:
    return ".".join(map(str, path)) if path else "root"


def parse_path(text: str) -> Path:
    return () if text in ("", "root") else tuple(int(p) for p in text.split("."))


# ---------------------------------------------------------------------------
# Linearity


@dataclass(frozen=True)
class Violation:
    name: str
    kind: str  # "unused" | "used more than once" | "free variable repeated"
    occurrences: int
    spans: tuple[SourceSpan | None, ...]

    def __str__(self) -> str:
        where = ", ".join(str(s) for s in self.spans if s is not None)
        tail = f" ({where})" if where else ""
        if self.kind == "unused":
            return f"{self.name} unused{tail}"
        return f"{self.name} {self.kind}: {self.occurrences} occurrences{tail}"


@dataclass(frozen=True)
class LinearityReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(map(str, self.violations))


def linearity_check(t: Term) -> LinearityReport:
    """Check that every binder is used exactly once and free names occur once.

    Binders are resolved by scope, so re-using a name in disjoint scopes
    (``(fn x=>x) (fn x=>x)``) is fine.
    """
    violations: list[Violation] = []
    free: dict[str, list[Var]] = {}

    def report(name: str, binder_span: SourceSpan | None, uses: list[Var]) -> None:
        if not uses:
            violations.append(Violation(name, "unused", 0, (binder_span,)))
        elif len(uses) > 1:
            violations.append(
                Violation(name, "used more than once", len(uses), tuple(u.span for u in uses))
            )

    def go(t: Term, scope: dict[str, list[Var]]) -> None:
        if isinstance(t, Var):
            if t.name in scope:
                scope[t.name].append(t)
            else:
                free.setdefault(t.name, []).append(t)
        elif isinstance(t, Lam):
            uses: list[Var] = []
            go(t.body, {**scope, t.binder: uses})
            report(t.binder, t.span, uses)
        elif isinstance(t, App):
            go(t.fun, scope)
            go(t.arg, scope)
        elif isinstance(t, Pair):
            go(t.left, scope)
            go(t.right, scope)
        elif isinstance(t, LetPair):
            go(t.scrutinee, scope)
            u1: list[Var] = []
            u2: list[Var] = []
            go(t.body, {**scope, t.binder1: u1, t.binder2: u2})
            report(t.binder1, t.span, u1)
            report(t.binder2, t.span, u2)

    go(t, {})
    for name, uses in free.items():
        if len(uses) > 1:
            violations.append(
                Violation(name, "free variable repeated", len(uses), tuple(u.span for u in uses))
            )
    return LinearityReport(tuple(violations))


def is_linear(t: Term) -> bool:
    return linearity_check(t).ok


# ---------------------------------------------------------------------------
# Alpha equivalence


def alpha_eq(t1: Term, t2: Term) -> bool:
    """Equality up to consistent renaming of bound variables."""

    def go(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int], depth: int) -> bool:
        while True:
            if isinstance(a, Var) and isinstance(b, Var):
                ia, ib = env_a.get(a.name), env_b.get(b.name)
                if ia is None and ib is None:
                    return a.name == b.name
                return ia == ib
            if isinstance(a, Lam) and isinstance(b, Lam):
                env_a = {**env_a, a.binder: depth}
                env_b = {**env_b, b.binder: depth}
                a, b, depth = a.body, b.body, depth + 1
                continue
            if isinstance(a, App) and isinstance(b, App):
                if not go(a.fun, b.fun, env_a, env_b, depth):
                    return False
                a, b = a.arg, b.arg
                continue
            if isinstance(a, Pair) and isinstance(b, Pair):
                if not go(a.left, b.left, env_a, env_b, depth):
                    return False
                a, b = a.right, b.right
                continue
            if isinstance(a, LetPair) and isinstance(b, LetPair):
                if not go(a.scrutinee, b.scrutinee, env_a, env_b, depth):
                    return False
                env_a = {**env_a, a.binder1: depth, a.binder2: depth + 1}
                env_b = {**env_b, b.binder1: depth, b.binder2: depth + 1}
                a, b, depth = a.body, b.body, depth + 2
                continue
            if isinstance(a, Hole) and isinstance(b, Hole):
                return True
            return False

    return go(t1, t2, {}, {}, 0)


# ---------------------------------------------------------------------------
# Fresh names, renaming, substitution

_SUFFIX_RE = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """``base`` if unused, else ``base`` with the smallest free numeric suffix.

    A trailing numeral of ``base`` is dropped first so that renaming ``x1``
    yields ``x2`` rather than ``x11``.
    """
    if base not in avoid:
        return base
    stem = _SUFFIX_RE.match(base).group(1) or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def rename_free(t: Term, mapping: dict[str, str]) -> Term:
    """Rename free variables (assumes no capture, i.e. targets not bound in t)."""
    return substitute_many(t, {k: Var(v) for k, v in mapping.items()})


def freshen(t: Term, avoid: Iterable[str] = ()) -> Term:
    """Rename binders so that all binders are distinct and differ from free names.

    Binders are kept when already unique; renamed ones get the smallest
    unused numeric suffix, so the result does not depend on any global state.
    """
    used: set[str] = set(free_vars(t)) | set(avoid)
    # Names bound exactly once and not clashing elsewhere can stay; collect
    # every name first so that a renamed binder never collides with a later one.
    used |= all_names(t)
    taken: set[str] = set(free_vars(t)) | set(avoid)

    def pick(name: str) -> str:
        if name not in taken:
            taken.add(name)
            return name
        new = fresh_name(name, used | taken)
        taken.add(new)
        used.add(new)
        return new

    def go(t: Term, env: dict[str, str]) -> Term:
        if isinstance(t, Var):
            new = env.get(t.name)
            return t if new is None or new == t.name else Var(new, t.span)
        if isinstance(t, Lam):
            b = pick(t.binder)
            body = go(t.body, {**env, t.binder: b})
            if b == t.binder and body is t.body:
                return t
            return Lam(b, body, t.span)
        if isinstance(t, App):
            f, a = go(t.fun, env), go(t.arg, env)
            return t if f is t.fun and a is t.arg else App(f, a, t.span)
        if isinstance(t, Pair):
            l, r = go(t.left, env), go(t.right, env)
            return t if l is t.left and r is t.right else Pair(l, r, t.span)
        if isinstance(t, LetPair):
            s = go(t.scrutinee, env)
            b1, b2 = pick(t.binder1), pick(t.binder2)
            body = go(t.body, {**env, t.binder1: b1, t.binder2: b2})
            return LetPair(b1, b2, s, body, t.span)
        return t

    return go(t, {})


def substitute(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding ``t[s/x]``; ``x`` must occur free in ``t``."""
    if x not in free_vars(t):
        raise SubstitutionError(f"{x} is not free in {pretty(t)}")
    return substitute_many(t, {x: s})


def substitute_many(t: Term, mapping: dict[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of free variables."""
    if not mapping:
        return t
    danger: set[str] = set()
    for s in mapping.values():
        danger |= free_vars(s)
    avoid = danger | all_names(t) | set(mapping)

    def go(t: Term, env: dict[str, Term | None]) -> Term:
        # env maps a name to its replacement, or None when shadowed.
        if isinstance(t, Var):
            if t.name in env:
                rep = env[t.name]
                return t if rep is None else rep
            return t
        if isinstance(t, Lam):
            b = t.binder
            inner = dict(env)
            if b in danger:
                nb = fresh_name(b, avoid)
                avoid.add(nb)
                inner[b] = Var(nb)
                b = nb
            else:
                inner[b] = None
            return Lam(b, go(t.body, inner), t.span)
        if isinstance(t, App):
            return App(go(t.fun, env), go(t.arg, env), t.span)
        if isinstance(t, Pair):
            return Pair(go(t.left, env), go(t.right, env), t.span)
        if isinstance(t, LetPair):
            s = go(t.scrutinee, env)
            inner = dict(env)
            names = []
            for b in (t.binder1, t.binder2):
                if b in danger:
                    nb = fresh_name(b, avoid)
                    avoid.add(nb)
                    inner[b] = Var(nb)
                    names.append(nb)
                else:
                    inner[b] = None
                    names.append(b)
            return LetPair(names[0], names[1], s, go(t.body, inner), t.span)
        return t

    env: dict[str, Term | None] = dict(mapping)
    return go(t, env)


# ---------------------------------------------------------------------------
# Small constructors


def app(f: Term, *args: Term) -> Term:
    """Left-nested application ``f a1 ... an``."""
    for a in args:
        f = App(f, a)
    return f


def lams(names: Iterable[str], body: Term) -> Term:
    names = list(names)
    for n in reversed(names):
        body = Lam(n, body)
    return body


def tuple_term(items: list[Term]) -> Term:
    """Right-nested tuple ``(a1, (a2, ... an))``; a single item is returned as is."""
    if not items:
        raise ValueError("empty tuple")
    out = items[-1]
    for item in reversed(items[:-1]):
        out = Pair(item, out)
    return out


def let_tuple(names: list[str], scrutinee: Term, body: Term) -> Term:
    """``let val (x1,...,xn) = s in body`` using nested let-pairs."""
    if len(names) < 2:
        raise ValueError("need at least two names")
    if len(names) == 2:
        return LetPair(names[0], names[1], scrutinee, body)
    avoid = set(names) | all_names(body) | free_vars(scrutinee)
    rest = fresh_name("rest", avoid)
    return LetPair(names[0], rest, scrutinee, let_tuple(names[1:], Var(rest), body))


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])``."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def strip_lams(t: Term) -> tuple[list[str], Term]:
    names: list[str] = []
    while isinstance(t, Lam):
        names.append(t.binder)
        t = t.body
    return names, t
