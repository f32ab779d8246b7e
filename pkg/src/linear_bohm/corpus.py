"""Reference programs: the Boolean gates over B_HM and B_Seq.

The sources below are kept in the module syntax exactly as written in the
literature they come from, so they double as parser fixtures.  Expected
truth tables use 0 for the first coding term and 1 for the second.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import Program, Term, parse_program

HM_SOURCE = """\
fun True x y z = z x y;
fun False x y z = z y x;
fun I x = x;
fun u_2 x1 x2 = x1 (x2 I);
fun u_3 x1 x2 x3 = x1 (x2 (x3 I));
fun proj_1 x1 x2 = x2 I I u_2 x1;
fun Not_HM x = x False True proj_1;
fun LDTr_Pair p x y f z w h l
           = let val (u,v) = p in l (u x y f) (v z w h) end;
fun proj_Pair_1 x1 x2  = LDTr_Pair x2 I I u_2 I I u_2 u_2 x1;
fun Copy_HM x = x (True,True) (False,False) proj_Pair_1;
fun const_F x = x I I (u_2) False;
fun And_HM x y = let val (u,v) = Copy_HM y in
                                 x (I u) (const_F v) proj_1 end;
"""

SEQ_SOURCE = """\
fun I x = x;
fun TrSeq x f g = g (f x);
fun FlSeq x f g = f (g x);
fun NotSeq h x f g = h x g f;
fun constTr h x f g = g (f (h x I I));
fun conv h z = let val (f,g) = h in let val (x,y) = z
     in (f x,g y) end end;
fun CopySeq x =
    x (TrSeq,TrSeq) (conv (NotSeq,NotSeq)) (conv (constTr,constTr));
fun constFlFun h k x f g = f (g (k (h FlSeq x I I) I I));
fun idFun h k x f g = k (h TrSeq x I I) f g;
fun AndSeq x = x I constFlFun idFun;
"""

POLY_SOURCE = """\
- fun True x y z = z x y;
- fun False x y z = z y x;
- fun I x = x;
- fun erase_3 p = p I I I;
- fun Not_POLY p = p False True (fn f=>fn g=>(erase_3 g) f);
"""


@dataclass(frozen=True)
class GateSpec:
    """A corpus gate with its coding and the expected outputs.

    ``outputs`` has one entry per input row in lexicographic order.  Each
    entry is a tuple of bits: one bit for a Boolean result, two bits for
    the pair produced by a duplicator.
    """

    name: str
    coding: str
    arity: int
    outputs: tuple[tuple[int, ...], ...]


GATES: tuple[GateSpec, ...] = (
    GateSpec("Not_HM", "HM", 1, ((1,), (0,))),
    GateSpec("Copy_HM", "HM", 1, ((0, 0), (1, 1))),
    GateSpec("And_HM", "HM", 2, ((0,), (0,), (0,), (1,))),
    GateSpec("NotSeq", "Seq", 1, ((1,), (0,))),
    GateSpec("CopySeq", "Seq", 1, ((0, 0), (1, 1))),
    GateSpec("AndSeq", "Seq", 2, ((0,), (0,), (0,), (1,))),
)

# names of the coding terms: index 0 codes the bit 0
CODING_TERMS = {"HM": ("False", "True"), "Seq": ("FlSeq", "TrSeq")}


@lru_cache(maxsize=None)
def hm_program() -> Program:
    return parse_program(HM_SOURCE)


@lru_cache(maxsize=None)
def seq_program() -> Program:
    return parse_program(SEQ_SOURCE)


@lru_cache(maxsize=None)
def poly_program() -> Program:
    return parse_program(POLY_SOURCE)


def program_for(coding: str) -> Program:
    return {"HM": hm_program, "Seq": seq_program}[coding]()


@lru_cache(maxsize=None)
def named_terms() -> dict[str, Term]:
    """Every corpus declaration by name; later programs do not override."""
    out: dict[str, Term] = {}
    for prog in (hm_program(), seq_program(), poly_program()):
        for name in prog.names():
            out.setdefault(name, prog[name])
    return out


def lookup(name: str) -> Term:
    try:
        return named_terms()[name]
    except KeyError:
        raise KeyError(f"no corpus term named {name!r}") from None
