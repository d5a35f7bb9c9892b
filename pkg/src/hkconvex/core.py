"""Finite metric spaces, finitely supported distributions, and couplings.

All scalars are exact `fractions.Fraction` values; nothing in this module
(or anywhere else in the library) touches floating point. Distances are
restricted to [0, 1] so that they compose with probabilities and with the
capped triangle rule of the deduction calculus.

Distributions are immutable and hashable. Support items are either point
labels of the ambient space or ConvexSet objects over the same space; the
latter makes distributions-over-sets (and sets of those, and so on) reuse
this single class, which is what the monad tower needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    AxiomViolation,
    DuplicateLabel,
    MarginalMismatch,
    OutOfRange,
    SpaceMismatch,
    UnknownPoint,
    WeightsNotNormalized,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '2/3', and Fractions; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    return str(value)


class FiniteMetricSpace:
    """A finite metric space with rational distances in [0, 1].

    Point order is the order given at construction; it is the canonical
    order used everywhere (serialization, distribution supports, term
    folds). The distance table is validated exactly: identity, symmetry,
    and every triangle inequality.
    """

    __slots__ = ("points", "_index", "_d", "_key")

    def __init__(self, points: Sequence[str], dist: Mapping):
        pts = tuple(points)
        seen = set()
        for p in pts:
            if not isinstance(p, str) or not p:
                raise UnknownPoint(p)
            if p in seen:
                raise DuplicateLabel(p)
            seen.add(p)
        self.points = pts
        self._index = {p: i for i, p in enumerate(pts)}
        table: dict[tuple[str, str], Fraction] = {}
        for raw_key, raw_value in dist.items():
            x, y = raw_key
            if x not in seen:
                raise UnknownPoint(x)
            if y not in seen:
                raise UnknownPoint(y)
            v = as_fraction(raw_value)
            if v < 0 or v > 1:
                raise OutOfRange(f"distance d({x},{y})", v)
            for key in ((x, y), (y, x)):
                if key in table and table[key] != v:
                    raise AxiomViolation("symmetry", x, y)
                table[key] = v
        for p in pts:
            if table.setdefault((p, p), ZERO) != 0:
                raise AxiomViolation("identity", p, p)
        for i, x in enumerate(pts):
            for y in pts[i + 1 :]:
                if (x, y) not in table:
                    raise AxiomViolation("missing distance", x, y)
                if table[(x, y)] == 0:
                    raise AxiomViolation("identity", x, y)
        for x in pts:
            for y in pts:
                for z in pts:
                    if table[(x, y)] > table[(x, z)] + table[(z, y)]:
                        raise AxiomViolation("triangle", x, y, z)
        self._d = table
        self._key = (pts, tuple(sorted(table.items())))

    def d(self, x: str, y: str) -> Fraction:
        try:
            return self._d[(x, y)]
        except KeyError:
            missing = x if x not in self._index else y
            raise UnknownPoint(missing) from None

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownPoint(label) from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteMetricSpace) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace({list(self.points)!r})"

    def to_json_dict(self) -> dict:
        pairs = []
        for i, x in enumerate(self.points):
            for y in self.points[i + 1 :]:
                pairs.append([x, y, format_fraction(self._d[(x, y)])])
        return {"points": list(self.points), "dist": pairs}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FiniteMetricSpace":
        points = data["points"]
        dist = {(x, y): v for x, y, v in data["dist"]}
        return cls(points, dist)


def validate_space(points: Sequence[str], dist: Mapping) -> FiniteMetricSpace:
    """Build a space, raising the first violated axiom with its witnesses."""
    return FiniteMetricSpace(points, dist)


def _item_space(item):
    # Support items are labels or set-like objects carrying .space.
    return None if isinstance(item, str) else getattr(item, "space", None)


def item_sort_key(space: FiniteMetricSpace, item):
    """Total order on support items; labels sort by canonical space order."""
    if isinstance(item, str):
        return (0, space.index(item))
    return (1, item.sort_key())


class Dist:
    """A finitely supported probability distribution with positive weights.

    Weights sum to exactly 1 and zero entries are never stored. Items are
    labels of `space` or ConvexSets over `space` (never a mixture of the
    two kinds).
    """

    __slots__ = ("space", "_w", "_support", "_hash", "_sort_key")

    def __init__(self, space: FiniteMetricSpace, weights: Mapping):
        self.space = space
        w: dict = {}
        total = ZERO
        kinds = set()
        for item, raw in weights.items():
            v = as_fraction(raw)
            if v == 0:
                continue
            if v < 0:
                raise OutOfRange(f"weight of {item!r}", v)
            if isinstance(item, str):
                if item not in space:
                    raise UnknownPoint(item)
                kinds.add("label")
            else:
                if _item_space(item) != space:
                    raise SpaceMismatch("support item over a different space")
                kinds.add("set")
            if item in w:
                raise DuplicateLabel(str(item))
            w[item] = v
            total += v
        if total != 1:
            raise WeightsNotNormalized(total)
        if len(kinds) > 1:
            raise SpaceMismatch("mixed label and set support items")
        self._w = w
        self._support = tuple(sorted(w, key=lambda it: item_sort_key(space, it)))
        self._hash = None
        self._sort_key = None

    @property
    def support(self) -> tuple:
        return self._support

    def weight(self, item) -> Fraction:
        return self._w.get(item, ZERO)

    def __getitem__(self, item) -> Fraction:
        return self._w.get(item, ZERO)

    def items(self):
        """Support/weight pairs in canonical support order."""
        return tuple((item, self._w[item]) for item in self._support)

    def is_ground(self) -> bool:
        return all(isinstance(item, str) for item in self._support)

    def sort_key(self):
        if self._sort_key is None:
            self._sort_key = tuple(
                (item_sort_key(self.space, item), self._w[item])
                for item in self._support
            )
        return self._sort_key

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Dist)
            and self.space == other.space
            and self._w == other._w
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._w.items()))
        return self._hash

    def __repr__(self) -> str:
        inside = ", ".join(f"{item!r}: {v}" for item, v in self.items())
        return "Dist({" + inside + "})"

    def to_json_dict(self) -> dict:
        if not self.is_ground():
            raise SpaceMismatch("only label-supported distributions serialize here")
        return {item: format_fraction(v) for item, v in self.items()}

    @classmethod
    def from_json_dict(cls, space: FiniteMetricSpace, data: Mapping) -> "Dist":
        return cls(space, dict(data))


def dirac(space: FiniteMetricSpace, item) -> Dist:
    """The point mass at a label (or at a set-valued item) of the space."""
    return Dist(space, {item: ONE})


def convex_combine(pairs: Sequence[tuple]) -> Dist:
    """Mix distributions: sum of p_i * D_i for positive p_i summing to 1."""
    if not pairs:
        raise WeightsNotNormalized(ZERO)
    space = None
    total = ZERO
    acc: dict = {}
    for raw_p, dist in pairs:
        p = as_fraction(raw_p)
        if p < 0:
            raise OutOfRange("mixing weight", p)
        total += p
        if p == 0:
            continue
        if not isinstance(dist, Dist):
            raise TypeError("convex_combine mixes Dist values")
        if space is None:
            space = dist.space
        elif dist.space != space:
            raise SpaceMismatch()
        for item, v in dist.items():
            acc[item] = acc.get(item, ZERO) + p * v
    if total != 1:
        raise WeightsNotNormalized(total)
    return Dist(space, acc)


def pushforward(f: Callable, dist: Dist, target: FiniteMetricSpace | None = None) -> Dist:
    """Image distribution along an item map; weights of merged items add."""
    target_space = target if target is not None else dist.space
    acc: dict = {}
    for item, v in dist.items():
        image = f(item)
        acc[image] = acc.get(image, ZERO) + v
    return Dist(target_space, acc)


class Coupling:
    """A joint distribution over pairs with prescribed exact marginals."""

    __slots__ = ("left", "right", "_w", "_support")

    def __init__(self, joint: Mapping, left: Dist, right: Dist):
        if left.space != right.space:
            raise SpaceMismatch()
        self.left = left
        self.right = right
        w: dict = {}
        for (x, y), raw in joint.items():
            v = as_fraction(raw)
            if v == 0:
                continue
            if v < 0:
                raise OutOfRange(f"coupling weight at ({x!r},{y!r})", v)
            w[(x, y)] = v
        left_marginal: dict = {}
        right_marginal: dict = {}
        for (x, y), v in w.items():
            left_marginal[x] = left_marginal.get(x, ZERO) + v
            right_marginal[y] = right_marginal.get(y, ZERO) + v
        for x in set(left_marginal) | set(left.support):
            if left_marginal.get(x, ZERO) != left.weight(x):
                raise MarginalMismatch("left", x)
        for y in set(right_marginal) | set(right.support):
            if right_marginal.get(y, ZERO) != right.weight(y):
                raise MarginalMismatch("right", y)
        self._w = w
        space = left.space
        self._support = tuple(
            sorted(
                w,
                key=lambda xy: (
                    item_sort_key(space, xy[0]),
                    item_sort_key(space, xy[1]),
                ),
            )
        )

    @property
    def support(self) -> tuple:
        return self._support

    def weight(self, x, y) -> Fraction:
        return self._w.get((x, y), ZERO)

    def items(self):
        return tuple(((x, y), self._w[(x, y)]) for (x, y) in self._support)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coupling)
            and self.left == other.left
            and self.right == other.right
            and self._w == other._w
        )

    def __repr__(self) -> str:
        inside = ", ".join(f"({x!r},{y!r}): {v}" for (x, y), v in self.items())
        return "Coupling({" + inside + "})"

    def to_json_list(self) -> list:
        return [[x, y, format_fraction(v)] for (x, y), v in self.items()]


def make_coupling(joint: Mapping, left: Dist, right: Dist) -> Coupling:
    """Validate a joint table against both marginals."""
    return Coupling(joint, left, right)


def product_coupling(left: Dist, right: Dist) -> Coupling:
    """The independent coupling; always feasible."""
    joint = {}
    for x, vx in left.items():
        for y, vy in right.items():
            joint[(x, y)] = vx * vy
    return Coupling(joint, left, right)
