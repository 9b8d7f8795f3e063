"""Modal-propositional formulas: AST nodes, a parser, and a printer.

Surface syntax accepted by :func:`parse_formula`:

    p            atom (letters, digits, underscore)
    !f           negation
    []f          necessity   (true at a world iff f holds at every successor)
    <>f          possibility (true iff f holds at some successor)
    f & g        conjunction
    f | g        disjunction
    f -> g       implication (right-associative)
    ( f )        grouping

Precedence, tightest first:  ! [] <>  then  &  then  |  then  ->.
Parse failures report the exact character offset of the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormulaParseError


class Formula:
    """Base class for formula AST nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    __slots__ = ("name",)
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom names must be non-empty")


@dataclass(frozen=True)
class Not(Formula):
    __slots__ = ("operand",)
    operand: Formula


@dataclass(frozen=True)
class Box(Formula):
    __slots__ = ("operand",)
    operand: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    __slots__ = ("operand",)
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    __slots__ = ("left", "right")
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    __slots__ = ("left", "right")
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    __slots__ = ("left", "right")
    left: Formula
    right: Formula


def atoms_of(formula: Formula) -> frozenset[str]:
    """All atom names occurring in the formula."""
    out: set[str] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.add(node.name)
        elif isinstance(node, (Not, Box, Diamond)):
            stack.append(node.operand)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(out)


# --- printing ----------------------------------------------------------------

_UNARY = {Not: "!", Box: "[]", Diamond: "<>"}
# binding strength used to decide where parentheses are needed
_LEVEL = {Implies: 0, Or: 1, And: 2}


def format_formula(formula: Formula) -> str:
    """Render a formula in the surface syntax; parses back to an equal AST."""
    return _fmt(formula, 0)


def _fmt(node: Formula, level: int) -> str:
    if isinstance(node, Atom):
        return node.name
    op = _UNARY.get(type(node))
    if op is not None:
        return op + _fmt(node.operand, 3)
    own = _LEVEL[type(node)]
    if isinstance(node, Implies):
        # right-associative: parenthesize a left child that is itself an implication
        text = f"{_fmt(node.left, own + 1)} -> {_fmt(node.right, own)}"
    else:
        sym = "&" if isinstance(node, And) else "|"
        text = f"{_fmt(node.left, own)} {sym} {_fmt(node.right, own + 1)}"
    return f"({text})" if own < level else text


# --- parsing -----------------------------------------------------------------

_TOKEN_ATOM = "atom"


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        text, i, n = self.text, 0, len(self.text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c.isalnum() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append((text[i:j], i))
                i = j
                continue
            two = text[i:i + 2]
            if two in ("[]", "<>", "->"):
                self.tokens.append((two, i))
                i += 2
                continue
            if c in "!&|()":
                self.tokens.append((c, i))
                i += 1
                continue
            raise FormulaParseError(f"unexpected character {c!r}", i)

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self) -> tuple[str, int] | None:
        tok = self.peek()
        if tok is not None:
            self.index += 1
        return tok

    @property
    def end_offset(self) -> int:
        return len(self.text)


def parse_formula(text: str) -> Formula:
    """Parse surface syntax into a Formula; raises FormulaParseError with offsets."""
    lexer = _Lexer(text)
    node = _parse_implies(lexer)
    trailing = lexer.peek()
    if trailing is not None:
        raise FormulaParseError(f"unexpected {trailing[0]!r} after formula", trailing[1])
    return node


def _parse_implies(lx: _Lexer) -> Formula:
    left = _parse_or(lx)
    tok = lx.peek()
    if tok is not None and tok[0] == "->":
        lx.take()
        return Implies(left, _parse_implies(lx))
    return left


def _parse_or(lx: _Lexer) -> Formula:
    node = _parse_and(lx)
    while True:
        tok = lx.peek()
        if tok is None or tok[0] != "|":
            return node
        lx.take()
        node = Or(node, _parse_and(lx))


def _parse_and(lx: _Lexer) -> Formula:
    node = _parse_unary(lx)
    while True:
        tok = lx.peek()
        if tok is None or tok[0] != "&":
            return node
        lx.take()
        node = And(node, _parse_unary(lx))


def _parse_unary(lx: _Lexer) -> Formula:
    tok = lx.peek()
    if tok is None:
        raise FormulaParseError("unexpected end of formula", lx.end_offset)
    text, offset = tok
    if text == "!":
        lx.take()
        return Not(_parse_unary(lx))
    if text == "[]":
        lx.take()
        return Box(_parse_unary(lx))
    if text == "<>":
        lx.take()
        return Diamond(_parse_unary(lx))
    if text == "(":
        lx.take()
        node = _parse_implies(lx)
        closing = lx.peek()
        if closing is None:
            raise FormulaParseError("unclosed '('", lx.end_offset)
        if closing[0] != ")":
            raise FormulaParseError(f"expected ')', found {closing[0]!r}", closing[1])
        lx.take()
        return node
    if text[0].isalnum() or text[0] == "_":
        lx.take()
        return Atom(text)
    raise FormulaParseError(f"expected a formula, found {text!r}", offset)
