"""
Finite metric spaces and exact optimal transport
================================================

Distances and probabilities are fractions.Fraction throughout, so every
value printed here is exact, not a float approximation.
"""

from fractions import Fraction

from hkconvex import (
    Dist,
    FiniteMetricSpace,
    dirac,
    kantorovich,
    kantorovich_bruteforce,
    transport_cost,
)

# a three point path: a -- b -- c with the long leg a -- c; the
# constructor already validates symmetry, identity, and the triangle
# inequality and rejects distances outside [0, 1]
space = FiniteMetricSpace(
    ["a", "b", "c"],
    {
        ("a", "b"): Fraction(1, 2),
        ("b", "c"): Fraction(1, 2),
        ("a", "c"): Fraction(1),
    },
)
print("points:", space.points)
print("d(a,c) =", space.d("a", "c"))

# distributions accept strings, ints, or Fractions as weights
left = Dist(space, {"a": "1/2", "b": "1/2"})
right = dirac(space, "c")
print("left =", left)
print("right =", right)

# the Kantorovich distance comes with an optimal coupling as witness
res = kantorovich(space, left, right)
print("K(left, right) =", res.value)
for (x, y), w in sorted(res.witness.items()):
    print(f"  move {w} from {x} to {y}")

# the witness really costs what the value says
assert transport_cost(space, res.witness) == res.value

# and the simplex solution matches brute-force enumeration over vertices
assert res.value == kantorovich_bruteforce(space, left, right)
print("witness cost and brute-force oracle agree:", res.value)

# everything serializes to JSON-friendly dicts with fraction strings
print("dist as json:", left.to_json_dict())
print("space as json:", space.to_json_dict())
