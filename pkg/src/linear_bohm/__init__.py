"""Typed linear lambda calculus: types, rewriting, separation and Boolean completeness."""

import sys

# normalization and type traversal recurse on term depth; compiled gates nest deeply
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"
