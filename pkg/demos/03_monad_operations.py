"""Convex sets of distributions as a monad.

Shows the unit, the functorial action, the algebraic operations (join,
mixture, weighted Minkowski sum), and the multiplication that flattens a
convex set of distributions over convex sets. Laws are then spot-checked
on random towers.
"""

from fractions import Fraction

from hkconvex import (
    ConvexSet,
    Dist,
    FiniteMetricSpace,
    check_monad_laws,
    convex_combine,
    dirac,
    functor_map,
    monad_mult,
    monad_unit,
    oplus,
    plus_p,
    wms,
)

space = FiniteMetricSpace(
    ["a", "b", "c"],
    {
        ("a", "b"): Fraction(1, 2),
        ("b", "c"): Fraction(1, 2),
        ("a", "c"): Fraction(1),
    },
)

# unit: a point becomes the singleton set of its dirac
ua = monad_unit(space, "a")
ub = monad_unit(space, "b")
print("unit(a) =", ua)

# join is union followed by convex closure; interior points are dropped
# from the base automatically
s = oplus(ua, ub)
print("a (+) b =", s)
mid = Dist(space, {"a": "1/2", "b": "1/2"})
assert ConvexSet(space, list(s.base) + [mid]) == s  # absorbed

# mixture scales every generator pairwise
t = plus_p(Fraction(1, 3), s, monad_unit(space, "c"))
print("s +_1/3 c =", t)

# weighted Minkowski sum of a distribution over sets
phi = Dist(space, {s: "1/3", monad_unit(space, "c"): "2/3"})
print("WMS(phi) =", wms(phi))
assert wms(phi) == plus_p(Fraction(1, 3), s, monad_unit(space, "c"))

# relabelling points through the functor
swap = {"a": "b", "b": "a", "c": "c"}
print("map(swap, s) =", functor_map(lambda x: swap[x], s))

# multiplication flattens one level of nesting
nested = ConvexSet(space, [Dist(space, {s: "1/2", t: "1/2"}), Dist(space, {t: "1"})])
print("mu(nested) =", monad_mult(nested))

# unit and associativity laws, checked on random three-level towers
report = check_monad_laws(seed=1, trials=200)
print("monad laws on 200 random instances:", "ok" if report.ok else report.failures[:3])

# convex_combine is the underlying exact mixture of distributions
print("2/3 mid + 1/3 dirac(c) =", convex_combine([(Fraction(2, 3), mid), (Fraction(1, 3), dirac(space, "c"))]))
