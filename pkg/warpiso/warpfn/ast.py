"""Expression tree for warping functions and its pretty-printer."""

from __future__ import annotations

from dataclasses import dataclass

FUNCTIONS: tuple[str, ...] = ("exp", "log", "sin", "cos", "sinh", "cosh")


@dataclass(frozen=True, slots=True)
class Num:
    value: float


@dataclass(frozen=True, slots=True)
class Var:
    """The height variable `t`."""


@dataclass(frozen=True, slots=True)
class Neg:
    operand: Node


@dataclass(frozen=True, slots=True)
class Add:
    left: Node
    right: Node


@dataclass(frozen=True, slots=True)
class Sub:
    left: Node
    right: Node


@dataclass(frozen=True, slots=True)
class Mul:
    left: Node
    right: Node


@dataclass(frozen=True, slots=True)
class Div:
    left: Node
    right: Node


@dataclass(frozen=True, slots=True)
class Pow:
    base: Node
    exponent: Node


@dataclass(frozen=True, slots=True)
class Call:
    func: str
    arg: Node


type Node = Num | Var | Neg | Add | Sub | Mul | Div | Pow | Call

_BINARY_SYMBOLS: dict[type, str] = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def unparse(node: Node) -> str:
    """Render a tree as source text that parses back to the same tree.

    Every composite node is parenthesized, so the output of `unparse` is always
    an atom of the grammar and can appear on either side of `^`.
    """

    match node:
        case Num(value):
            text = repr(float(value))
            return f"({text})" if value < 0 else text
        case Var():
            return "t"
        case Neg(operand):
            return f"(-{unparse(operand)})"
        case Add(left, right) | Sub(left, right) | Mul(left, right) | Div(left, right):
            symbol = _BINARY_SYMBOLS[type(node)]
            return f"({unparse(left)} {symbol} {unparse(right)})"
        case Pow(base, exponent):
            return f"({unparse(base)}^{unparse(exponent)})"
        case Call(func, arg):
            return f"{func}({unparse(arg)})"
    raise TypeError(f"Unknown node type: {type(node).__name__}")


def is_constant(node: Node) -> bool:
    """Return True if the subtree does not depend on `t`."""

    match node:
        case Num():
            return True
        case Var():
            return False
        case Neg(operand) | Call(_, operand):
            return is_constant(operand)
        case Add(left, right) | Sub(left, right) | Mul(left, right) | Div(left, right):
            return is_constant(left) and is_constant(right)
        case Pow(base, exponent):
            return is_constant(base) and is_constant(exponent)
    raise TypeError(f"Unknown node type: {type(node).__name__}")
