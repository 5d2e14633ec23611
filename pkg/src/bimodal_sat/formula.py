"""Bimodal formulas: AST, parser, canonical printer and subformula table.

Primitive connectives are ``~`` (negation), ``&`` (conjunction), ``[]`` (box)
and ``K`` (knowledge).  The parser also accepts the usual abbreviations
``|``, ``->``, ``<->``, ``<>`` and ``L`` and expands them into primitives.
Variables are written ``x`` followed by a binary numeral without leading
zeros (``x0``, ``x1``, ``x10``, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

__all__ = [
    "Var",
    "Neg",
    "And",
    "Box",
    "K",
    "Formula",
    "ParseError",
    "parse",
    "render",
    "SubformulaTable",
    "subformulas",
    "lengths",
    "variables",
    "disj",
    "impl",
    "iff",
    "diamond",
    "possible",
]


@dataclass(frozen=True)
class Var:
    id: int

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Neg:
    child: "Formula"

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Box:
    child: "Formula"

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class K:
    child: "Formula"

    def __str__(self) -> str:
        return render(self)


Formula = Union[Var, Neg, And, Box, K]


# Abbreviations, expanded literally (no double-negation cleanup).

def disj(a: Formula, b: Formula) -> Formula:
    return Neg(And(Neg(a), Neg(b)))


def impl(a: Formula, b: Formula) -> Formula:
    return disj(Neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(disj(Neg(a), b), disj(Neg(b), a))


def diamond(a: Formula) -> Formula:
    return Neg(Box(Neg(a)))


def possible(a: Formula) -> Formula:
    """The dual of ``K``, written ``L``."""
    return Neg(K(Neg(a)))


# --------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


_BINARY_OPS = {"&": And, "|": disj, "->": impl, "<->": iff}
_UNARY_OPS = {"~": Neg, "[]": Box, "K": K, "<>": diamond, "L": possible}
# Longest tokens first so "<->" wins over "<>".
_PUNCT = ("<->", "->", "<>", "[]", "~", "&", "|", "K", "L", "(", ")")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "x":
            j = i + 1
            while j < len(text) and text[j] in "01":
                j += 1
            digits = text[i + 1:j]
            if not digits:
                raise ParseError("variable without binary index", i)
            if len(digits) > 1 and digits[0] == "0":
                raise ParseError(f"variable x{digits} has a leading zero", i)
            tokens.append(("x" + digits, i))
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append((p, i))
                i += len(p)
                break
        else:
            raise ParseError(f"unknown token {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expect(self, tok: str) -> None:
        t = self.peek()
        if t is None:
            raise ParseError(f"expected {tok!r}, found end of input", len(self.text))
        if t[0] != tok:
            raise ParseError(f"expected {tok!r}, found {t[0]!r}", t[1])
        self.pos += 1

    def formula(self) -> Formula:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", len(self.text))
        tok, at = t
        if tok in _UNARY_OPS:
            self.pos += 1
            return _UNARY_OPS[tok](self.formula())
        if tok.startswith("x"):
            self.pos += 1
            return Var(int(tok[1:], 2))
        if tok == "(":
            self.pos += 1
            left = self.formula()
            nxt = self.peek()
            if nxt is not None and nxt[0] == ")":
                # redundant grouping parentheses
                self.pos += 1
                return left
            if nxt is None or nxt[0] not in _BINARY_OPS:
                where = len(self.text) if nxt is None else nxt[1]
                found = "end of input" if nxt is None else repr(nxt[0])
                raise ParseError(f"expected binary operator, found {found}", where)
            self.pos += 1
            right = self.formula()
            self.expect(")")
            return _BINARY_OPS[nxt[0]](left, right)
        raise ParseError(f"unexpected token {tok!r}", at)


def parse(text: str) -> Formula:
    """Parse ``text`` into a primitive-only formula.

    Raises :class:`ParseError` on malformed input, including empty input and
    variables with leading zeros such as ``x01``.
    """
    p = _Parser(text)
    if not p.tokens:
        raise ParseError("empty input", 0)
    f = p.formula()
    rest = p.peek()
    if rest is not None:
        raise ParseError(f"trailing input {rest[0]!r}", rest[1])
    return f


# --------------------------------------------------------------------------
# Printing and measuring


def render(f: Formula) -> str:
    """Canonical, fully parenthesised, primitive-only text of ``f``."""
    out: list[str] = []
    _render(f, out)
    return "".join(out)


def _render(f: Formula, out: list[str]) -> None:
    # iterative over unary chains keeps deep [][][]... formulas cheap
    while True:
        if isinstance(f, Var):
            out.append("x" + format(f.id, "b"))
            return
        if isinstance(f, And):
            out.append("(")
            _render(f.left, out)
            out.append(" & ")
            _render(f.right, out)
            out.append(")")
            return
        out.append("~" if isinstance(f, Neg) else "[]" if isinstance(f, Box) else "K")
        f = f.child


def lengths(f: Formula) -> tuple[int, int]:
    """Return ``(n, ell)``.

    ``n`` counts symbols over the alphabet ``( ) ~ & [] K x 0 1`` (each
    operator is one symbol); ``ell`` counts only the symbols other than the
    binary digits, so every variable contributes one.
    """
    if isinstance(f, Var):
        return 1 + f.id.bit_length() + (f.id == 0), 1
    if isinstance(f, And):
        n1, l1 = lengths(f.left)
        n2, l2 = lengths(f.right)
        return n1 + n2 + 3, l1 + l2 + 3
    n, ell = lengths(f.child)
    return n + 1, ell + 1


def variables(f: Formula) -> set[int]:
    if isinstance(f, Var):
        return {f.id}
    if isinstance(f, And):
        return variables(f.left) | variables(f.right)
    return variables(f.child)


# --------------------------------------------------------------------------
# Subformula table

VAR, NEG, AND, BOX, KNOW = "var", "neg", "and", "box", "K"

_KIND = {Var: VAR, Neg: NEG, And: AND, Box: BOX, K: KNOW}


@dataclass(frozen=True)
class SubformulaTable:
    """The subformulas of a formula, indexed in post-order.

    Index ``i`` owns bit ``1 << (a - 1 - i)`` of every subset bitset, so the
    integer value of a bitset is the binary string ``s_1 ... s_a`` read with
    ``s_1`` most significant; ascending integers are alphabetical strings.
    """

    root: Formula
    formulas: tuple[Formula, ...]
    kinds: tuple[str, ...]
    children: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False, compare=False)

    @property
    def a(self) -> int:
        return len(self.formulas)

    def bit(self, i: int) -> int:
        return 1 << (self.a - 1 - i)

    @cached_property
    def _by_kind(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {VAR: [], NEG: [], AND: [], BOX: [], KNOW: []}
        for i, k in enumerate(self.kinds):
            out[k].append(i)
        return out

    def indices(self, kind: str) -> list[int]:
        return self._by_kind[kind]

    def mask(self, kind: str) -> int:
        m = 0
        for i in self.indices(kind):
            m |= self.bit(i)
        return m

    @cached_property
    def box_mask(self) -> int:
        return self.mask(BOX)

    @cached_property
    def k_mask(self) -> int:
        return self.mask(KNOW)

    @cached_property
    def atom_mask(self) -> int:
        return self.mask(VAR)

    @property
    def root_index(self) -> int:
        return self.a - 1

    def members(self, bits: int) -> list[int]:
        return [i for i in range(self.a) if bits & self.bit(i)]

    def to_bits(self, subset) -> int:
        """Bitset of an iterable of subformulas (Formula objects)."""
        bits = 0
        for g in subset:
            bits |= self.bit(self.index[g])
        return bits

    def to_formulas(self, bits: int) -> list[Formula]:
        return [self.formulas[i] for i in self.members(bits)]

    def describe(self, bits: int) -> str:
        return "{" + ", ".join(render(g) for g in self.to_formulas(bits)) + "}"


def subformulas(f: Formula) -> SubformulaTable:
    """Post-order subformula closure with first-occurrence deduplication."""
    formulas: list[Formula] = []
    index: dict = {}

    def visit(g: Formula) -> int:
        if g in index:
            return index[g]
        if isinstance(g, And):
            visit(g.left)
            visit(g.right)
        elif not isinstance(g, Var):
            visit(g.child)
        index[g] = len(formulas)
        formulas.append(g)
        return index[g]

    visit(f)
    kinds = tuple(_KIND[type(g)] for g in formulas)
    children = []
    for g in formulas:
        if isinstance(g, Var):
            children.append(())
        elif isinstance(g, And):
            children.append((index[g.left], index[g.right]))
        else:
            children.append((index[g.child],))
    return SubformulaTable(f, tuple(formulas), kinds, tuple(children), index)
