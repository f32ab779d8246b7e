"""Command-line interface.

Terms on the command line are resolved in this order: a name from the
built-in corpus, a path to a file, then inline source text.  Inline text
and files may refer to corpus names, which are expanded before use.  A file
holding declarations denotes its last declaration.

Exit codes: 0 success, 1 domain error (untypable, unsupported, premise
violated, verification failed), 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence, TextIO

from . import bohm, boolfc, proofnet, slt
from .corpus import named_terms
from .rewrite import BudgetExceeded, TypeMismatchError, equal_beta_eta_c, format_trace, normalize, normalize_trace
from .syntax import (
    ProgramError,
    SyntaxErrorWithSpan,
    Term,
    inline,
    is_closed,
    linearity_check,
    parse_program,
    parse_term,
    pretty,
)
from .types import (
    PolyTypingError,
    TypeSyntaxError,
    TypingError,
    check_poly_typable,
    check_typing,
    infer_principal_type,
    parse_type,
    pretty_type,
)


class UsageError(Exception):
    pass


class Reporter:
    """Human output prints values (with labels for secondary lines); machine
    output prints ``key<TAB>value`` for every line."""

    def __init__(self, machine: bool, out: TextIO):
        self.machine = machine
        self.out = out

    def emit(self, key: str, value: object, primary: bool = False) -> None:
        text = str(value)
        if self.machine:
            for line in text.splitlines() or [""]:
                self.out.write(f"{key}\t{line}\n")
        elif primary:
            self.out.write(text + "\n")
        else:
            self.out.write(f"{key}: {text}\n")

    def block(self, key: str, lines: Sequence[str]) -> None:
        """Transcript lines that are already ``label<TAB>value`` pairs."""
        for line in lines:
            label, _, value = line.partition("\t")
            self.emit(f"{key}.{label}" if self.machine else label, value)


def resolve_term(text: str) -> Term:
    named = named_terms()
    if text in named:
        return named[text]
    source = text
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            source = fh.read()
    stripped = source.lstrip()
    if stripped.startswith("fun") or stripped.startswith("- fun"):
        prog = parse_program(source, environment=dict(named))
        names = prog.names()
        if not names:
            raise UsageError(f"no declarations in {text}")
        return prog[names[-1]]
    return inline(parse_term(source), named)


def resolve_type(text: str):
    source = text
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            source = fh.read().strip()
    return parse_type(source)


def _closed(t: Term, what: str) -> Term:
    if not is_closed(t):
        raise bohm.BohmError(f"{what} must be closed")
    return t


# ---------------------------------------------------------------------------
# Subcommands


def cmd_check(args, rep: Reporter) -> int:
    t = resolve_term(args.term)
    report = linearity_check(t)
    if not report.ok:
        rep.emit("linearity", report)
        return 1
    if args.type:
        a = resolve_type(args.type)
        ok = check_typing((), t, a)
        rep.emit("typing", "ok" if ok else "rejected", primary=True)
        return 0 if ok else 1
    ctx, a = infer_principal_type(t)
    rep.emit("type", pretty_type(a), primary=True)
    return 0


def cmd_infer(args, rep: Reporter) -> int:
    t = resolve_term(args.term)
    ctx, a = infer_principal_type(t)
    if len(ctx):
        rep.emit("context", ctx)
    rep.emit("type", pretty_type(a), primary=True)
    return 0


def cmd_normalize(args, rep: Reporter) -> int:
    t = resolve_term(args.term)
    if args.trace:
        nf, trace = normalize_trace(t, args.budget)
        if trace:
            rep.emit("trace", format_trace(trace))
        rep.emit("steps", len(trace))
        rep.emit("normal", pretty(normalize(nf, args.budget)), primary=True)
    else:
        rep.emit("normal", pretty(normalize(t, args.budget)), primary=True)
    return 0


def cmd_equal(args, rep: Reporter) -> int:
    t1, t2 = resolve_term(args.left), resolve_term(args.right)
    same = equal_beta_eta_c(t1, t2, cross_check=args.cross_check)
    rep.emit("result", "equal" if same else "different", primary=True)
    return 0 if same else 1


def cmd_poly_check(args, rep: Reporter) -> int:
    t = resolve_term(args.term)
    a = resolve_type(args.type)
    terms = [resolve_term(x) for x in args.args]
    try:
        cert = check_poly_typable(t, a, terms)
    except PolyTypingError as exc:
        rep.emit("poly-typing", f"rejected: {exc}", primary=True)
        return 1
    rep.emit("poly-typing", "certified", primary=True)
    rep.emit("certificate", cert.describe())
    if args.plain:
        ok = check_typing((), t, a)
        rep.emit("plain-typing", "ok" if ok else "rejected")
    return 0


def cmd_slt_separate(args, rep: Reporter) -> int:
    s1, s2 = slt.parse_slt(args.s1), slt.parse_slt(args.s2)
    for s in (s1, s2):
        slt.check_well_formed(s)
    if s1 == s2:
        rep.emit("result", "identical terms; no separating assignment")
        return 1
    rho = slt.separate(s1, s2)
    rep.emit("assignment", rho, primary=True)
    rep.emit("value s1", slt.eval_slt(s1, rho))
    rep.emit("value s2", slt.eval_slt(s2, rho))
    rep.emit("kernel", slt.KERNEL)
    return 0


def cmd_separate(args, rep: Reporter) -> int:
    a = resolve_type(args.type)
    b = resolve_type(args.btype) if args.btype else a
    spec = bohm.SeparatorSpec(
        a,
        _closed(resolve_term(args.s1), "s1"),
        _closed(resolve_term(args.s2), "s2"),
        b,
        _closed(resolve_term(args.u1), "u1"),
        _closed(resolve_term(args.u2), "u2"),
    )
    sep = bohm.separator(spec)
    rep.emit("term", pretty(sep.term), primary=True)
    rep.block("transcript", sep.transcript)
    return 0


def cmd_copy(args, rep: Reporter) -> int:
    a = resolve_type(args.type)
    sep = bohm.copy_separation(a, resolve_term(args.s1), resolve_term(args.s2), args.n)
    rep.emit("term", pretty(sep.term), primary=True)
    rep.block("transcript", sep.transcript)
    return 0


def _coding(name: str) -> boolfc.BooleanCoding:
    if name == "HMxHM":
        return boolfc.pair_coding()
    try:
        return boolfc.CODINGS[name]
    except KeyError:
        raise UsageError(f"unknown coding {name!r}; choose from {', '.join(boolfc.CODINGS)} or HMxHM") from None


def cmd_compile_bool(args, rep: Reporter) -> int:
    if args.table is not None:
        with open(args.table, encoding="utf-8") as fh:
            table = boolfc.TruthTable.parse(fh.read())
    elif args.outputs is not None:
        bits = args.outputs.strip()
        n = max(len(bits).bit_length() - 1, 0)
        if any(ch not in "01" for ch in bits):
            raise UsageError("--outputs takes a string of 0/1 characters")
        table = boolfc.TruthTable(n, tuple(int(ch) for ch in bits))
    else:
        raise UsageError("give a truth-table file or --outputs")
    c = _coding(args.coding)
    result = boolfc.compile_table(c, table)
    rep.emit("term", pretty(result.term), primary=True)
    rep.emit("expression", result.expression)
    rep.emit("coding", c.name)
    for row in result.report.rows:
        label = "".join(map(str, row.inputs))
        rep.emit(f"row {label}", f"{row.expected} {'ok' if row.ok else 'FAIL'}")
    rep.emit("poly-typing", "certified")
    return 0 if result.report.all_pass else 1


def cmd_to_proofnet(args, rep: Reporter) -> int:
    t = resolve_term(args.term)
    net = proofnet.translate(t)
    if args.normal:
        net = proofnet.reduce_net(net)
    if args.dot:
        rep.out.write(proofnet.to_dot(net) + "\n")
    else:
        rep.emit("net", proofnet.describe(net), primary=True)
    return 0


def cmd_corpus_test(args, rep: Reporter) -> int:
    corpus = boolfc.corpus()
    failures = 0
    for gate in corpus.gates:
        ok = gate.check()
        failures += not ok
        rep.emit(gate.spec.name, "ok" if ok else "FAIL")
    # principal types of the two HM coding terms and the poly-typed negation
    from .corpus import lookup

    for name in ("True", "False"):
        rep.emit(f"type {name}", pretty_type(infer_principal_type(lookup(name))[1]))
    not_poly = lookup("Not_POLY")
    poly_ok = True
    for arg in ("True", "False"):
        try:
            check_poly_typable(not_poly, parse_type("B_HM -> B_HM"), [lookup(arg)])
        except PolyTypingError:
            poly_ok = False
    plain_rejected = not check_typing((), not_poly, parse_type("B_HM -> B_HM"))
    rep.emit("Not_POLY poly-typing", "ok" if poly_ok else "FAIL")
    rep.emit("Not_POLY plain typing", "rejected" if plain_rejected else "accepted (unexpected)")
    failures += (not poly_ok) + (not plain_rejected)
    rep.emit("result", "all passed" if failures == 0 else f"{failures} failed", primary=True)
    return 0 if failures == 0 else 1


def cmd_appendix_b(args, rep: Reporter) -> int:
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    report = boolfc.appendix_b_check(args.depth)
    rep.block("appendix-b", report.format().splitlines())
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # report through run() so the exit code stays 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linear-bohm", description="Typed linear lambda calculus workbench")
    p.add_argument("--machine", action="store_true", help="print key<TAB>value lines")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("check", help="linearity and principal type (or check against --type)")
    s.add_argument("term")
    s.add_argument("--type")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("infer", help="principal typing, with context for open terms")
    s.add_argument("term")
    s.set_defaults(func=cmd_infer)

    s = sub.add_parser("normalize", help="beta-eta normal form")
    s.add_argument("term")
    s.add_argument("--trace", action="store_true", help="print every rewrite step")
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("equal", help="decide equality modulo beta, eta and commuting conversions")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--cross-check", action="store_true", help="also compare proof nets")
    s.set_defaults(func=cmd_equal)

    s = sub.add_parser("poly-check", help="certify poly-typability with respect to arguments")
    s.add_argument("term")
    s.add_argument("--type", required=True)
    s.add_argument("args", nargs="+")
    s.add_argument("--plain", action="store_true", help="also report plain typability")
    s.set_defaults(func=cmd_poly_check)

    s = sub.add_parser("slt-separate", help="separating assignment for two SLT terms")
    s.add_argument("s1")
    s.add_argument("s2")
    s.set_defaults(func=cmd_slt_separate)

    s = sub.add_parser("separate", help="t with t s1 = u1 and t s2 = u2")
    s.add_argument("--type", required=True)
    s.add_argument("--btype", help="type of u1, u2 (defaults to --type)")
    for name in ("s1", "s2", "u1", "u2"):
        s.add_argument(f"--{name}", required=True)
    s.set_defaults(func=cmd_separate)

    s = sub.add_parser("copy", help="duplicator for two closed terms")
    s.add_argument("--type", required=True)
    s.add_argument("--s1", required=True)
    s.add_argument("--s2", required=True)
    s.add_argument("-n", type=int, default=2)
    s.set_defaults(func=cmd_copy)

    s = sub.add_parser("compile-bool", help="compile a truth table to a term")
    s.add_argument("table", nargs="?")
    s.add_argument("--outputs", help="outputs as a bit string in row order, e.g. 0110")
    s.add_argument("--coding", default="HM")
    s.set_defaults(func=cmd_compile_bool)

    s = sub.add_parser("to-proofnet", help="translate a term into a proof net")
    s.add_argument("term")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--normal", action="store_true", help="reduce the net first")
    s.set_defaults(func=cmd_to_proofnet)

    s = sub.add_parser("corpus-test", help="check the built-in gates and examples")
    s.set_defaults(func=cmd_corpus_test)

    s = sub.add_parser("appendix-b-check", help="bounded search for a plainly typed separator")
    s.add_argument("--depth", type=int, default=6)
    s.set_defaults(func=cmd_appendix_b)
    return p


DOMAIN_ERRORS = (
    TypingError,
    TypeMismatchError,
    PolyTypingError,
    bohm.BohmError,
    boolfc.BoolError,
    slt.SltError,
    BudgetExceeded,
)

SYNTAX_ERRORS = (SyntaxErrorWithSpan, ProgramError, TypeSyntaxError)


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    rep = Reporter(args.machine, out)
    try:
        return args.func(args, rep)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except SYNTAX_ERRORS as exc:
        err.write(f"syntax error: {exc}\n")
        return 1
    except DOMAIN_ERRORS as exc:
        err.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
