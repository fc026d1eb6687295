"""Braid words and their right action on matrix tuples.

Words in the braid group on r strands are flat sequences of nonzero letters
in {-(r-1), ..., -1, 1, ..., r-1}; letter i stands for the i-th standard
generator and -i for its inverse.  The surface syntax (powers, conjugation
exponents) parses to a small expression tree which expands to flat words.
Conjugation is x^y = y^(-1) * x * y.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import ParseError, ShapeMismatch, StrandOutOfRange
from .linalg import Matrix

__all__ = [
    "BraidWord",
    "Generator",
    "Product",
    "Power",
    "Conjugate",
    "BraidExpr",
    "parse_braid",
    "expand",
    "free_reduce",
    "inverse_letters",
    "act_on_tuple",
    "braid_text",
]


@dataclass(frozen=True)
class BraidWord:
    """A flat word in the braid group on `strands` strands."""

    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise StrandOutOfRange(f"strand count must be >= 1, got {self.strands}")
        for letter in self.letters:
            if letter == 0 or abs(letter) > self.strands - 1:
                raise StrandOutOfRange(
                    f"letter {letter} outside the generators of B_{self.strands}"
                )

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, inverse_letters(self.letters))

    def __len__(self):
        return len(self.letters)


@dataclass(frozen=True)
class Generator:
    index: int


@dataclass(frozen=True)
class Product:
    factors: tuple["BraidExpr", ...]


@dataclass(frozen=True)
class Power:
    base: "BraidExpr"
    exponent: int


@dataclass(frozen=True)
class Conjugate:
    base: "BraidExpr"
    by: "BraidExpr"


BraidExpr = Union[Generator, Product, Power, Conjugate]


def inverse_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


def expand(expr: BraidExpr, strands: int) -> BraidWord:
    """Flatten an expression tree into a word of B_strands."""
    return BraidWord(strands, _expand_letters(expr))


def _expand_letters(expr: BraidExpr) -> tuple[int, ...]:
    if isinstance(expr, Generator):
        return (expr.index,)
    if isinstance(expr, Product):
        out: list[int] = []
        for f in expr.factors:
            out.extend(_expand_letters(f))
        return tuple(out)
    if isinstance(expr, Power):
        base = _expand_letters(expr.base)
        if expr.exponent < 0:
            base = inverse_letters(base)
        return base * abs(expr.exponent)
    if isinstance(expr, Conjugate):
        by = _expand_letters(expr.by)
        return inverse_letters(by) + _expand_letters(expr.base) + by
    raise TypeError(f"not a braid expression: {expr!r}")


def free_reduce(word: BraidWord) -> BraidWord:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for letter in word.letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return BraidWord(word.strands, tuple(stack))


def act_on_tuple(g: Sequence[Matrix], word: BraidWord | Sequence[int]) -> tuple[Matrix, ...]:
    """Right action of a braid word on an r-tuple of invertible matrices.

    Letter i sends (..., g_i, g_{i+1}, ...) to (..., g_{i+1},
    g_{i+1}^-1 g_i g_{i+1}, ...); letter -i applies the inverse move.
    """
    letters = word.letters if isinstance(word, BraidWord) else tuple(word)
    r = len(g)
    if isinstance(word, BraidWord) and word.strands != r:
        raise ShapeMismatch(f"word on {word.strands} strands acting on an {r}-tuple")
    gs = list(g)
    for letter in letters:
        a = abs(letter)
        if a == 0 or a > r - 1:
            raise StrandOutOfRange(f"letter {letter} outside the generators of B_{r}")
        i = a - 1
        if letter > 0:
            gi, gi1 = gs[i], gs[i + 1]
            gs[i] = gi1
            gs[i + 1] = gi1.inverse() * gi * gi1
        else:
            gi, gi1 = gs[i], gs[i + 1]
            gs[i] = gi * gi1 * gi.inverse()
            gs[i + 1] = gi
    return tuple(gs)


# -- parser ---------------------------------------------------------------------

# Word   := Factor+
# Factor := Atom ['^' Exp]
# Atom   := 'b' INT | '(' Word ')'
# Exp    := signed INT | Atom | '(' Word ')'


class _BraidScanner:
    def __init__(self, text: str, strands: int):
        self.text = text
        self.pos = 0
        self.strands = strands

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def signed_integer(self) -> int:
        self.skip_ws()
        sign = 1
        if self.peek() in ("+", "-"):
            if self.text[self.pos] == "-":
                sign = -1
            self.pos += 1
        return sign * self.integer()

    def generator(self) -> Generator:
        pos = self.pos
        self.pos += 1  # consume 'b'
        index = self.integer()
        if index < 1 or index > self.strands - 1:
            raise StrandOutOfRange(
                f"b{index} is not a generator of B_{self.strands} (position {pos})"
            )
        return Generator(index)

    def atom(self) -> BraidExpr:
        ch = self.peek()
        if ch == "b":
            return self.generator()
        if ch == "(":
            self.pos += 1
            word = self.word()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return word
        raise ParseError(f"expected a braid atom, got {ch!r}", self.pos)

    def factor(self) -> BraidExpr:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.pos += 1
        ch = self.peek()
        if ch is None:
            raise ParseError("dangling '^'", self.pos)
        if ch in "+-" or ch.isdigit():
            return Power(base, self.signed_integer())
        if ch in "b(":
            return Conjugate(base, self.atom())
        raise ParseError(f"bad exponent {ch!r}", self.pos)

    def word(self) -> BraidExpr:
        factors = [self.factor()]
        while self.peek() in ("b", "("):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))


def parse_braid(text: str, strands: int) -> BraidExpr:
    """Parse braid notation like "b1^2", "(b2^2)^b1" or "b3^-1 (b1 b2 b1)^2 b3"."""
    sc = _BraidScanner(text, strands)
    if sc.peek() is None:
        raise ParseError("empty braid expression", 0)
    expr = sc.word()
    if sc.peek() is not None:
        raise ParseError(f"unexpected character {sc.peek()!r}", sc.pos)
    return expr


def braid_text(expr: BraidExpr) -> str:
    """Normalized text form in the grammar accepted by parse_braid."""
    if isinstance(expr, Generator):
        return f"b{expr.index}"
    if isinstance(expr, Product):
        return " ".join(_factor_text(f) for f in expr.factors)
    if isinstance(expr, Power):
        return f"{_atom_text(expr.base)}^{expr.exponent}"
    if isinstance(expr, Conjugate):
        by = expr.by
        by_text = braid_text(by) if isinstance(by, Generator) else f"({braid_text(by)})"
        return f"{_atom_text(expr.base)}^{by_text}"
    raise TypeError(f"not a braid expression: {expr!r}")


def _factor_text(expr: BraidExpr) -> str:
    if isinstance(expr, (Generator, Power, Conjugate)):
        return braid_text(expr)
    return f"({braid_text(expr)})"


def _atom_text(expr: BraidExpr) -> str:
    if isinstance(expr, Generator):
        return braid_text(expr)
    return f"({braid_text(expr)})"


def word_from_letters(letters: Sequence[int], strands: int) -> tuple[BraidExpr, BraidWord]:
    """Wrap a flat letter array as an expression plus its word."""
    factors: list[BraidExpr] = []
    for letter in letters:
        if letter >= 1:
            factors.append(Generator(letter))
        else:
            factors.append(Power(Generator(-letter), -1))
    if len(factors) == 1:
        expr: BraidExpr = factors[0]
    else:
        expr = Product(tuple(factors))
    return expr, BraidWord(strands, tuple(int(x) for x in letters))
