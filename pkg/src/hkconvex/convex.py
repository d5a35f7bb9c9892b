"""Finitely generated convex sets of distributions and their monad.

A ConvexSet stores only its unique base: the minimal generating set,
equal to the extreme points of the generated polytope of distributions.
Bases are kept in a canonical order, so structural equality of ConvexSets
is exactly equality of the generated convex sets.

Because Dist supports ConvexSet-valued items, the same two classes give
distributions over sets, convex sets of those, and so on; the monad
multiplication walks one level down this tower. `check_monad_laws`
exercises unit and associativity on pseudo-random instances.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import linprog
from .core import (
    Dist,
    FiniteMetricSpace,
    convex_combine,
    dirac,
    pushforward,
)
from .errors import BadProbability, EmptyInput, SpaceMismatch

ZERO = Fraction(0)
ONE = Fraction(1)


def _coordinates(dists: Sequence[Dist]) -> list:
    items: list = []
    seen = set()
    for d in dists:
        for item in d.support:
            if item not in seen:
                seen.add(item)
                items.append(item)
    return items


def in_hull(target: Dist, generators: Sequence[Dist]):
    """Exact membership of `target` in the convex hull of `generators`.

    Returns (True, weights) with an explicit convex combination, or
    (False, None). Solved as a phase-1 feasibility system over the joint
    support coordinates plus one normalization row.
    """
    if not generators:
        return False, None
    for g in generators:
        if g.space != target.space:
            raise SpaceMismatch()
    coords = _coordinates([target, *generators])
    rows = []
    rhs = []
    for item in coords:
        rows.append([g.weight(item) for g in generators])
        rhs.append(target.weight(item))
    rows.append([ONE] * len(generators))
    rhs.append(ONE)
    solution = linprog.feasible_point(rows, rhs)
    if solution is None:
        return False, None
    return True, tuple(solution)


def unique_base(generators: Sequence[Dist]) -> tuple[Dist, ...]:
    """Minimal generating set: distinct generators extreme in the hull."""
    distinct: list[Dist] = []
    for g in generators:
        if g not in distinct:
            distinct.append(g)
    if len(distinct) == 1:
        return (distinct[0],)
    kept = []
    for i, g in enumerate(distinct):
        others = distinct[:i] + distinct[i + 1 :]
        inside, _ = in_hull(g, others)
        if not inside:
            kept.append(g)
    # A point inside the hull of the others is a combination of extreme
    # points only, so the independent removals leave exactly the extremes.
    kept.sort(key=Dist.sort_key)
    return tuple(kept)


class ConvexSet:
    """A nonempty finitely generated convex set, stored by unique base."""

    __slots__ = ("space", "base", "_hash", "_key")

    def __init__(self, space: FiniteMetricSpace, generators: Iterable[Dist]):
        gens = list(generators)
        if not gens:
            raise EmptyInput("a convex set needs at least one generator")
        for g in gens:
            if not isinstance(g, Dist):
                raise TypeError("generators must be Dist values")
            if g.space != space:
                raise SpaceMismatch()
        grounds = {g.is_ground() for g in gens}
        if len(grounds) > 1:
            raise SpaceMismatch("generators mix label and set support")
        self.space = space
        self.base = unique_base(gens)
        self._hash = None
        self._key = None

    def is_ground(self) -> bool:
        return self.base[0].is_ground()

    def sort_key(self):
        if self._key is None:
            self._key = tuple(g.sort_key() for g in self.base)
        return self._key

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConvexSet)
            and self.space == other.space
            and self.base == other.base
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.base)
        return self._hash

    def __repr__(self) -> str:
        return f"ConvexSet({list(self.base)!r})"

    def __contains__(self, dist) -> bool:
        if not isinstance(dist, Dist) or dist.space != self.space:
            return False
        inside, _ = in_hull(dist, self.base)
        return inside

    def to_json_dict(self) -> dict:
        return {"generators": [g.to_json_dict() for g in self.base]}

    @classmethod
    def from_json_dict(cls, space: FiniteMetricSpace, data) -> "ConvexSet":
        gens = [Dist.from_json_dict(space, entry) for entry in data["generators"]]
        return cls(space, gens)


def monad_unit(space: FiniteMetricSpace, item) -> ConvexSet:
    """eta(x) = the singleton convex set containing the point mass at x."""
    return ConvexSet(space, [dirac(space, item)])


def oplus(left: ConvexSet, right: ConvexSet) -> ConvexSet:
    """Convex union: the convex closure of the union of the two sets."""
    if left.space != right.space:
        raise SpaceMismatch()
    return ConvexSet(left.space, list(left.base) + list(right.base))


def plus_p(p, left: ConvexSet, right: ConvexSet) -> ConvexSet:
    """Pointwise mixture { p*d + (1-p)*e : d in left, e in right }."""
    p = Fraction(p)
    if not 0 < p < 1:
        raise BadProbability(p)
    if left.space != right.space:
        raise SpaceMismatch()
    gens = [
        convex_combine([(p, d), (ONE - p, e)])
        for d in left.base
        for e in right.base
    ]
    return ConvexSet(left.space, gens)


def _wms_mixtures(phi: Dist) -> list[Dist]:
    sets = list(phi.support)
    for item in sets:
        if not isinstance(item, ConvexSet):
            raise SpaceMismatch("weighted Minkowski sum needs set-valued support")
    choices: list[list[Dist]] = [[]]
    for s in sets:
        choices = [chosen + [g] for chosen in choices for g in s.base]
    return [
        convex_combine([(phi.weight(s), g) for s, g in zip(sets, chosen)])
        for chosen in choices
    ]


def wms(phi: Dist) -> ConvexSet:
    """Weighted Minkowski sum of a distribution over convex sets."""
    return ConvexSet(phi.space, _wms_mixtures(phi))


def functor_map(
    f: Callable, s: ConvexSet, target: FiniteMetricSpace | None = None
) -> ConvexSet:
    """Image of a convex set along an item map, re-based on the target."""
    space = target if target is not None else s.space
    return ConvexSet(space, [pushforward(f, g, target) for g in s.base])


def monad_mult(s: ConvexSet) -> ConvexSet:
    """One level of flattening: union of weighted Minkowski sums.

    For each base distribution-over-sets, every choice of base elements
    from its support sets yields one generator of the flattened set.
    """
    gens: list[Dist] = []
    for phi in s.base:
        gens.extend(_wms_mixtures(phi))
    return ConvexSet(s.space, gens)


def nearest_point(space: FiniteMetricSpace, target: Dist, s: ConvexSet, metric=None):
    """Exact projection: the Kantorovich distance from `target` to the set.

    Minimizes transport cost jointly over a plan and a convex combination
    of the base, as one rational LP. Returns (value, nearest mixture,
    base weights).
    """
    if metric is None:
        metric = space.d
    base = list(s.base)
    xs = list(target.support)
    ys = _coordinates(base)
    nx, ny, nb = len(xs), len(ys), len(base)
    nvars = nx * ny + nb

    def wvar(i: int, j: int) -> int:
        return i * ny + j

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, x in enumerate(xs):
        row = [ZERO] * nvars
        for j in range(ny):
            row[wvar(i, j)] = ONE
        rows.append(row)
        rhs.append(target.weight(x))
    for j, y in enumerate(ys):
        row = [ZERO] * nvars
        for i in range(nx):
            row[wvar(i, j)] = ONE
        for k, g in enumerate(base):
            row[nx * ny + k] = -g.weight(y)
        rows.append(row)
        rhs.append(ZERO)
    row = [ZERO] * nvars
    for k in range(nb):
        row[nx * ny + k] = ONE
    rows.append(row)
    rhs.append(ONE)
    objective = [ZERO] * nvars
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            objective[wvar(i, j)] = metric(x, y)
    result = linprog.solve_lp(objective, rows, rhs)
    assert result.status == linprog.OPTIMAL, "projection LP is always feasible"
    lambdas = tuple(result.solution[nx * ny + k] for k in range(nb))
    mixture = convex_combine(list(zip(lambdas, base)))
    return result.value, mixture, lambdas


class LawReport:
    """Outcome of randomized monad-law checking."""

    __slots__ = ("trials", "failures")

    def __init__(self, trials: int, failures: list[str]):
        self.trials = trials
        self.failures = failures

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {"trials": self.trials, "failures": self.failures, "ok": self.ok}


def check_monad_laws(seed: int, trials: int) -> LawReport:
    """Left/right unit and associativity on pseudo-random towers."""
    import random

    from . import sampling

    rng = random.Random(seed)
    failures: list[str] = []
    for t in range(trials):
        space = sampling.rand_space(rng, max_points=4)
        s = sampling.rand_convex_set(rng, space, max_base=3, max_support=3)
        unit_outer = monad_unit(space, s)
        if monad_mult(unit_outer) != s:
            failures.append(f"trial {t}: mult after outer unit")
        via_inner = functor_map(lambda x: monad_unit(space, x), s)
        if monad_mult(via_inner) != s:
            failures.append(f"trial {t}: mult after mapped unit")
        u = sampling.rand_set_of_sets_of_sets(rng, space)
        flat_inner = monad_mult(functor_map(monad_mult, u))
        flat_outer = monad_mult(monad_mult(u))
        if flat_inner != flat_outer:
            failures.append(f"trial {t}: associativity")
    return LawReport(trials, failures)
