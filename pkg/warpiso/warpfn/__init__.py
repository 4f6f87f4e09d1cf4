"""Warping-function expressions.

The public import surface is `warpiso.warpfn` so callers can import the parser,
the jet type and `WarpingFunction` from a single module.
"""

from __future__ import annotations

from warpiso.warpfn.ast import Node, unparse
from warpiso.warpfn.function import WarpingFunction, density_warping, evaluate, parse
from warpiso.warpfn.jet import Jet
from warpiso.warpfn.parser import parse_expression

__all__ = [
    "Jet",
    "Node",
    "WarpingFunction",
    "density_warping",
    "evaluate",
    "parse",
    "parse_expression",
    "unparse",
]
