"""
Terms, canonical normal forms, and the distance between terms
=============================================================

The term language has generators, a binary join t (+) s, and binary
convex mixtures t +_p s written (p+ p t s). Every term over a finite
metric space denotes a finitely generated convex set of distributions;
normalize computes that set, nu reads a canonical term back off a set,
and term_distance measures terms through their denotations.
"""

from fractions import Fraction

from hkconvex import (
    FiniteMetricSpace,
    normalize,
    nu,
    parse_term,
    print_term,
    substitute,
    term_distance,
    term_equal_mod_theory,
)

space = FiniteMetricSpace(
    ["a", "b", "c"],
    {
        ("a", "b"): Fraction(1, 2),
        ("b", "c"): Fraction(1, 2),
        ("a", "c"): Fraction(1),
    },
)

# parse and print round-trip
t = parse_term("(oplus (p+ 1/2 a b) c)")
print("parsed:", print_term(t))

# the denotation is a convex set with a unique base
s = normalize(space, t)
print("normalize:", s)

# nu produces the canonical term of a set: a left fold of joins over
# base distributions, each written as a right-leaning mixture comb
print("nu:", print_term(nu(space, s)))
assert normalize(space, nu(space, s)) == s

# equality modulo the axioms is decided by comparing denotations
lhs = parse_term("(oplus a (oplus b a))")
rhs = parse_term("(oplus (oplus a b) a)")
print("associativity instance equal:", term_equal_mod_theory(space, lhs, rhs))

# idempotence collapses a join of equal terms
print("a (+) a normalizes to:", normalize(space, parse_term("(oplus a a)")))

# substitution plugs terms in for generator names
pattern = parse_term("(p+ 1/2 x y)")
inst = substitute(pattern, {"x": parse_term("(oplus a b)"), "y": parse_term("c")})
print("substituted:", print_term(inst))

# the distance between two terms is the lifted distance between their
# denotations; equal-mod-theory terms are at distance zero
print("d(a, b) as terms:", term_distance(space, parse_term("a"), parse_term("b")))
print(
    "d((oplus a b), (p+ 1/2 a b)):",
    term_distance(space, parse_term("(oplus a b)"), parse_term("(p+ 1/2 a b)")),
)
print("d(lhs, rhs):", term_distance(space, lhs, rhs))
