"""Pure-Python separation kernel (fallback for the compiled extension).

Programs are postfix integer sequences: ``i >= 0`` pushes first-order
variable ``i``; ``-(j + 1)`` applies second-order variable ``j`` to the top
``arities[j]`` values.  A value is the truth table of a term over every
first-order assignment, stored as a bit mask: bit ``b`` is the value under
assignment number ``b``, where variable ``i`` of ``n`` takes the bit
``(b >> (n - 1 - i)) & 1`` (binary counting with the first variable most
significant).

For each choice of interpretations, option 0 is the constant 0, option 1 the
constant 1, and option ``1 + p`` the projection onto argument ``p``.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

NAME = "python"


def variable_tables(nvars: int) -> list[int]:
    rows = 1 << nvars
    tables = []
    for i in range(nvars):
        shift = nvars - 1 - i
        mask = 0
        for b in range(rows):
            if (b >> shift) & 1:
                mask |= 1 << b
        tables.append(mask)
    return tables


def evaluate(program: Sequence[int], choice: Sequence[int], arities: Sequence[int], tables: Sequence[int], full: int) -> int:
    stack: list[int] = []
    for op in program:
        if op >= 0:
            stack.append(tables[op])
            continue
        j = -op - 1
        k = arities[j]
        c = choice[j]
        if c == 0:
            value = 0
        elif c == 1:
            value = full
        else:
            value = stack[len(stack) - k + (c - 2)]
        if k:
            del stack[len(stack) - k:]
        stack.append(value)
    return stack[-1]


def search(prog1: Sequence[int], prog2: Sequence[int], nvars: int, arities: Sequence[int]):
    """First ``(choice, row)`` on which the two programs differ, or None."""
    tables = variable_tables(nvars)
    full = (1 << (1 << nvars)) - 1
    for choice in product(*[range(k + 2) for k in arities]):
        diff = evaluate(prog1, choice, arities, tables, full) ^ evaluate(prog2, choice, arities, tables, full)
        if diff:
            return tuple(choice), (diff & -diff).bit_length() - 1
    return None
