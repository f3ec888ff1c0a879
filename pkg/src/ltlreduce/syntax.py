"""LTL formula trees, concrete syntax, negation normal form and tree utilities.

Grammar (loosest to tightest)::

    or     := and ('|' and)*          left-associative
    and    := binary ('&' binary)*    left-associative
    binary := unary (('U' | 'R') binary)?   right-associative
    unary  := ('!' | 'X' | 'F' | 'G') unary | atom | constant | '(' or ')'

Atoms match ``[a-z][a-z0-9_]*``; ``true``/``false`` (aliases ``tt``/``ff``)
are constants and cannot be used as atom names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "Formula", "TrueConst", "FalseConst", "Atom", "Not", "And", "Or",
    "Next", "Until", "Release", "Finally", "Globally",
    "ParseError", "parse", "format_formula", "nnf", "is_nnf", "size",
    "depth", "props", "children", "subformula_at", "replace_at",
    "iter_subformulas",
]

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
KEYWORDS = {"true", "false", "tt", "ff"}


class Formula:
    """Base class of the formula tree. Instances are immutable."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not ATOM_RE.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Finally(Formula):
    child: Formula


@dataclass(frozen=True)
class Globally(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


UNARY = (Not, Next, Finally, Globally)
BINARY = (And, Or, Until, Release)
LEAVES = (TrueConst, FalseConst, Atom)


# ---------------------------------------------------------------------------
# tree utilities
# ---------------------------------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.child,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def with_children(f: Formula, kids: Sequence[Formula]) -> Formula:
    """Rebuild ``f`` with the same node kind over new children."""
    if isinstance(f, UNARY):
        (c,) = kids
        return type(f)(c)
    if isinstance(f, BINARY):
        left, right = kids
        return type(f)(left, right)
    return f


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def depth(f: Formula) -> int:
    return 1 + max((depth(c) for c in children(f)), default=0)


def props(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    out: set[str] = set()
    for c in children(f):
        out |= props(c)
    return out


def iter_subformulas(f: Formula, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Formula]]:
    """Yield ``(path, subformula)`` pairs in post-order, children left to right."""
    for i, c in enumerate(children(f)):
        yield from iter_subformulas(c, path + (i,))
    yield path, f


def subformula_at(f: Formula, path: Sequence[int]) -> Formula:
    node = f
    for step in path:
        kids = children(node)
        if not 0 <= step < len(kids):
            raise IndexError(f"path {tuple(path)} does not exist in {format_formula(f)}")
        node = kids[step]
    return node


def replace_at(f: Formula, path: Sequence[int], new: Formula) -> Formula:
    if not path:
        return new
    kids = list(children(f))
    head, rest = path[0], path[1:]
    if not 0 <= head < len(kids):
        raise IndexError(f"path component {head} out of range at {format_formula(f)}")
    kids[head] = replace_at(kids[head], rest, new)
    return with_children(f, kids)


# ---------------------------------------------------------------------------
# negation normal form
# ---------------------------------------------------------------------------

def is_nnf(f: Formula) -> bool:
    if isinstance(f, Not):
        return isinstance(f.child, Atom)
    return all(is_nnf(c) for c in children(f))


def nnf(f: Formula) -> Formula:
    """Push negations down to atoms using the LTL dualities."""
    if isinstance(f, Not):
        return _negate(f.child)
    if isinstance(f, LEAVES):
        return f
    return with_children(f, [nnf(c) for c in children(f)])


def _negate(f: Formula) -> Formula:
    # nnf(Not(f))
    if isinstance(f, TrueConst):
        return FalseConst()
    if isinstance(f, FalseConst):
        return TrueConst()
    if isinstance(f, Atom):
        return Not(f)
    if isinstance(f, Not):
        return nnf(f.child)
    if isinstance(f, And):
        return Or(_negate(f.left), _negate(f.right))
    if isinstance(f, Or):
        return And(_negate(f.left), _negate(f.right))
    if isinstance(f, Next):
        return Next(_negate(f.child))
    if isinstance(f, Finally):
        return Globally(_negate(f.child))
    if isinstance(f, Globally):
        return Finally(_negate(f.child))
    if isinstance(f, Until):
        return Release(_negate(f.left), _negate(f.right))
    if isinstance(f, Release):
        return Until(_negate(f.left), _negate(f.right))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_UNARY_SYMBOL = {Not: "!", Next: "X", Finally: "F", Globally: "G"}
_BINARY_SYMBOL = {And: "&", Or: "|", Until: "U", Release: "R"}


def _is_literal(f: Formula) -> bool:
    return isinstance(f, LEAVES) or (isinstance(f, Not) and isinstance(f.child, Atom))


def format_formula(f: Formula) -> str:
    """Render ``f`` in the concrete syntax accepted by :func:`parse`.

    Propositional operators get parentheses only where precedence demands.
    Operands of ``U`` and ``R`` are parenthesized unless they are literals,
    so ``Until(Finally(b), c)`` prints as ``(F b) U c``.
    """
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = format_formula(f.child)
        return "!" + (inner if _is_literal(f.child) or isinstance(f.child, UNARY) else f"({inner})")
    if isinstance(f, UNARY):
        inner = format_formula(f.child)
        if not (_is_literal(f.child) or isinstance(f.child, UNARY)):
            inner = f"({inner})"
        return f"{_UNARY_SYMBOL[type(f)]} {inner}"
    if isinstance(f, (Until, Release)):
        left, right = (format_formula(c) if _is_literal(c) else f"({format_formula(c)})"
                       for c in (f.left, f.right))
        return f"{left} {_BINARY_SYMBOL[type(f)]} {right}"
    if isinstance(f, (And, Or)):
        sym = _BINARY_SYMBOL[type(f)]
        # & binds tighter than |; both left-associative
        left_ok = (Until, Release, *UNARY, *LEAVES, And) if isinstance(f, And) else (Formula,)
        right_ok = (Until, Release, *UNARY, *LEAVES) if isinstance(f, And) else \
            (Until, Release, *UNARY, *LEAVES, And)
        left = format_formula(f.left)
        right = format_formula(f.right)
        if not isinstance(f.left, left_ok):
            left = f"({left})"
        if not isinstance(f.right, right_ok):
            right = f"({right})"
        return f"{left} {sym} {right}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error; ``pos`` is a 0-based character offset into the input."""

    def __init__(self, message: str, text: str, pos: int, expected: str | None = None):
        self.text = text
        self.pos = pos
        self.expected = expected
        detail = f"{message} at position {pos}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


_TOKEN_RE = re.compile(r"\s*(?:(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[!&|()])|(?P<bad>\S))")
_TEMPORAL_LETTERS = set("XFGUR")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group("word") is not None:
            word, start = m.group("word"), m.start("word")
            if word in KEYWORDS:
                tokens.append(("const", word, start))
            elif ATOM_RE.match(word):
                tokens.append(("atom", word, start))
            elif set(word) <= set("XFG"):
                # run-together prefix operators such as GF or XX
                tokens.extend(("op", ch, start + k) for k, ch in enumerate(word))
            elif word in _TEMPORAL_LETTERS:
                tokens.append(("op", word, start))
            else:
                raise ParseError(f"unknown operator {word!r}", text, start)
        elif m.group("sym") is not None:
            tokens.append(("op", m.group("sym"), m.start("sym")))
        else:
            raise ParseError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    def error(self, message: str, expected: str) -> ParseError:
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        return ParseError(message, self.text, pos, expected)

    def parse(self) -> Formula:
        if not self.tokens:
            raise self.error("empty formula", "a formula")
        f = self.parse_or()
        tok = self.peek()
        if tok is not None:
            if tok[1] == ")":
                raise ParseError("unbalanced parentheses: unmatched ')'", self.text, tok[2])
            raise self.error(f"unexpected token {tok[1]!r}", "end of input or a binary operator")
        return f

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_binary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.parse_binary())
        return f

    def parse_binary(self) -> Formula:
        left = self.parse_unary()
        if self.at("U"):
            self.i += 1
            return Until(left, self.parse_binary())
        if self.at("R"):
            self.i += 1
            return Release(left, self.parse_binary())
        return left

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input", "an atom, constant, unary operator or '('")
        kind, value, pos = tok
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if kind == "const":
            self.i += 1
            return TrueConst() if value in ("true", "tt") else FalseConst()
        if value in ("!", "X", "F", "G"):
            self.i += 1
            child = self.parse_unary()
            return {"!": Not, "X": Next, "F": Finally, "G": Globally}[value](child)
        if value == "(":
            self.i += 1
            f = self.parse_or()
            if not self.at(")"):
                if self.peek() is None:
                    raise ParseError("unbalanced parentheses: missing ')'", self.text, len(self.text), "')'")
                raise self.error("unexpected token", "')'")
            self.i += 1
            return f
        raise self.error(f"unexpected token {value!r}", "an atom, constant, unary operator or '('")


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula tree; raises :class:`ParseError`."""
    return _Parser(text).parse()
