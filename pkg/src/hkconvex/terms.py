"""Convex-semilattice terms over generator labels.

Signature: a binary oplus and a family of binary p+ operations with
probability annotations strictly between 0 and 1. Terms denote convex
sets of distributions via `normalize`; `nu` picks the canonical term of
a convex set, and the two are mutually inverse up to the theory.

Concrete syntax is s-expressions: "(oplus a b)", "(p+ 1/2 a b)".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .convex import ConvexSet, monad_unit, oplus, plus_p
from .core import Dist, FiniteMetricSpace, format_fraction
from .errors import BadProbability, ParseError
from .lifting import hk_distance

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, slots=True)
class Gen:
    label: str


@dataclass(frozen=True, slots=True)
class Oplus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class PlusP:
    p: Fraction
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if not (ZERO < self.p < ONE):
            raise BadProbability(self.p)


Term = Gen | Oplus | PlusP


def print_term(term: Term) -> str:
    if isinstance(term, Gen):
        return term.label
    if isinstance(term, Oplus):
        return f"(oplus {print_term(term.left)} {print_term(term.right)})"
    return f"(p+ {format_fraction(term.p)} {print_term(term.left)} {print_term(term.right)})"


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def _parse_fraction(token: str, position: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational, got {token!r}", position) from None


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.end = len(text)

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok, at = self.take()
        if tok != text:
            raise ParseError(f"expected {text!r}, got {tok!r}", at)

    def term(self) -> Term:
        tok, at = self.take()
        if tok == ")":
            raise ParseError("unexpected ')'", at)
        if tok != "(":
            return Gen(tok)
        head, head_at = self.take()
        if head == "oplus":
            left = self.term()
            right = self.term()
            self.expect(")")
            return Oplus(left, right)
        if head == "p+":
            ptok, pat = self.take()
            p = _parse_fraction(ptok, pat)
            left = self.term()
            right = self.term()
            self.expect(")")
            return PlusP(p, left, right)
        raise ParseError(f"expected 'oplus' or 'p+', got {head!r}", head_at)


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    term = parser.term()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(f"trailing input {trailing[0]!r}", trailing[1])
    return term


def term_labels(term: Term) -> set[str]:
    if isinstance(term, Gen):
        return {term.label}
    return term_labels(term.left) | term_labels(term.right)


def substitute(term: Term, mapping: dict[str, Term]) -> Term:
    """Replace generator leaves by terms; leaves not mapped stay put."""
    if isinstance(term, Gen):
        return mapping.get(term.label, term)
    if isinstance(term, Oplus):
        return Oplus(substitute(term.left, mapping), substitute(term.right, mapping))
    return PlusP(term.p, substitute(term.left, mapping), substitute(term.right, mapping))


def normalize(space: FiniteMetricSpace, term: Term) -> ConvexSet:
    """Interpret a term in the free algebra of convex sets."""
    if isinstance(term, Gen):
        return monad_unit(space, term.label)
    if isinstance(term, Oplus):
        return oplus(normalize(space, term.left), normalize(space, term.right))
    return plus_p(term.p, normalize(space, term.left), normalize(space, term.right))


def dist_term(dist: Dist) -> Term:
    """Left-fold of p+ over the support in canonical order.

    At each step the attached probability is one minus the trailing
    weight, and the prefix is renormalized exactly.
    """
    items = list(dist.items())
    return _fold_items(items)


def _fold_items(items: list[tuple[str, Fraction]]) -> Term:
    if len(items) == 1:
        return Gen(items[0][0])
    label, trailing = items[-1]
    keep = ONE - trailing
    prefix = [(x, w / keep) for x, w in items[:-1]]
    return PlusP(keep, _fold_items(prefix), Gen(label))


def nu(space: FiniteMetricSpace, s: ConvexSet) -> Term:
    """Canonical term of a convex set: left-fold of oplus over the base."""
    parts = [dist_term(d) for d in s.base]
    term = parts[0]
    for part in parts[1:]:
        term = Oplus(term, part)
    return term


def term_distance(space: FiniteMetricSpace, left: Term, right: Term) -> Fraction:
    return hk_distance(space, normalize(space, left), normalize(space, right))


def term_equal_mod_theory(space: FiniteMetricSpace, left: Term, right: Term) -> bool:
    return normalize(space, left) == normalize(space, right)
