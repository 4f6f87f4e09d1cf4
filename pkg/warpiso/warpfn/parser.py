"""Recursive-descent parser for warping-function expressions.

Grammar (whitespace insignificant)::

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := ('-' | '+') factor | power
    power    := atom ('^' exponent)?
    exponent := ('-' | '+') exponent | atom
    atom     := number | 't' | func '(' expr ')' | '(' expr ')'
    func     := 'exp' | 'log' | 'sin' | 'cos' | 'sinh' | 'cosh'

`^` binds tighter than unary minus (``-t^2`` is ``-(t^2)``) and is not
associative: ``t^2^3`` leaves an unparsed remainder. Offsets reported in
errors are byte offsets into the UTF-8 encoded source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from warpiso.errors import ArityError, ExpressionSyntaxError, UnknownIdentifierError
from warpiso.warpfn.ast import (
    FUNCTIONS,
    Add,
    Call,
    Div,
    Mul,
    Neg,
    Node,
    Num,
    Pow,
    Sub,
    Var,
)


class TokenKind(str, Enum):
    NUMBER = "number"
    IDENT = "identifier"
    OP = "operator"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    END = "end of input"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^])
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
    """,
    re.VERBOSE,
)

_GROUP_KINDS: dict[str, TokenKind] = {
    "number": TokenKind.NUMBER,
    "ident": TokenKind.IDENT,
    "op": TokenKind.OP,
    "lparen": TokenKind.LPAREN,
    "rparen": TokenKind.RPAREN,
    "comma": TokenKind.COMMA,
}


def tokenize(source: str) -> list[Token]:
    """Split source text into tokens carrying byte offsets.

    Raises:
        ExpressionSyntaxError: On a character that starts no token.
    """

    tokens: list[Token] = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        offset = len(source[:pos].encode("utf-8"))
        if match is None:
            raise ExpressionSyntaxError(f"Unexpected character {source[pos]!r}", offset)
        group = match.lastgroup
        if group is not None and group != "ws":
            tokens.append(Token(_GROUP_KINDS[group], match.group(), offset))
        pos = match.end()
    tokens.append(Token(TokenKind.END, "", len(source.encode("utf-8"))))
    return tokens


class Parser:
    """Single-use recursive-descent parser over a token list."""

    def __init__(self, source: str) -> None:
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.END:
            self.pos += 1
        return token

    def _at_op(self, *symbols: str) -> bool:
        return self.current.kind is TokenKind.OP and self.current.text in symbols

    def _expect(self, kind: TokenKind) -> Token:
        token = self.current
        if token.kind is not kind:
            found = token.text or token.kind.value
            raise ExpressionSyntaxError(
                f"Expected {kind.value!r} but found {found!r}", token.offset
            )
        return self._advance()

    def parse(self) -> Node:
        """Parse the whole source; any unparsed remainder is an error."""

        if self.current.kind is TokenKind.END:
            raise ExpressionSyntaxError("Empty expression", 0)
        node = self.expr()
        if self.current.kind is not TokenKind.END:
            raise ExpressionSyntaxError(
                f"Unparsed remainder starting with {self.current.text!r}",
                self.current.offset,
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._at_op("+", "-"):
            symbol = self._advance().text
            right = self.term()
            node = Add(node, right) if symbol == "+" else Sub(node, right)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self._at_op("*", "/"):
            symbol = self._advance().text
            right = self.factor()
            node = Mul(node, right) if symbol == "*" else Div(node, right)
        return node

    def factor(self) -> Node:
        if self._at_op("-", "+"):
            symbol = self._advance().text
            operand = self.factor()
            return Neg(operand) if symbol == "-" else operand
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self._at_op("^"):
            self._advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> Node:
        if self._at_op("-", "+"):
            symbol = self._advance().text
            operand = self.exponent()
            return Neg(operand) if symbol == "-" else operand
        return self.atom()

    def atom(self) -> Node:
        token = self.current
        match token.kind:
            case TokenKind.NUMBER:
                self._advance()
                return Num(float(token.text))
            case TokenKind.LPAREN:
                self._advance()
                node = self.expr()
                self._expect(TokenKind.RPAREN)
                return node
            case TokenKind.IDENT:
                return self._identifier()
        found = token.text or token.kind.value
        raise ExpressionSyntaxError(f"Unexpected {found!r}", token.offset)

    def _identifier(self) -> Node:
        token = self._advance()
        name = token.text
        if name == "t":
            return Var()
        if name not in FUNCTIONS:
            raise UnknownIdentifierError(f"Unknown identifier {name!r}", token.offset)
        if self.current.kind is not TokenKind.LPAREN:
            raise ArityError(f"Function {name!r} must be called with one argument", token.offset)
        self._advance()
        if self.current.kind is TokenKind.RPAREN:
            raise ArityError(f"Function {name!r} takes 1 argument, got 0", token.offset)
        args = [self.expr()]
        while self.current.kind is TokenKind.COMMA:
            self._advance()
            args.append(self.expr())
        if len(args) != 1:
            raise ArityError(
                f"Function {name!r} takes 1 argument, got {len(args)}", token.offset
            )
        self._expect(TokenKind.RPAREN)
        return Call(name, args[0])


def parse_expression(source: str) -> Node:
    """Parse an expression string into a tree.

    Args:
        source: Expression text in the documented grammar.

    Returns:
        The expression tree.

    Raises:
        ExpressionSyntaxError: Malformed input or unparsed remainder.
        UnknownIdentifierError: Identifier other than `t` or a supported function.
        ArityError: Function called with a number of arguments other than one.
    """

    return Parser(source).parse()
