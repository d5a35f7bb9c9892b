"""Exact optimal transport between finitely supported distributions.

The solver is a primal transportation simplex over rationals: north-west
corner start, Bland's smallest-index rule for entering and leaving cells
(so degenerate bases cannot cycle), and exact potentials. It is generic
over the ground cost: any callable producing Fractions works, which lets
the same solver compute Kantorovich distances over points, over convex
sets (with a Hausdorff-Kantorovich ground cost), and so on.

`kantorovich_bruteforce` is an independent oracle: every vertex of the
transportation polytope is the basic solution of a spanning tree of the
support-by-support bipartite graph, so enumerating spanning trees and
keeping the feasible solutions finds the exact optimum.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from .core import Coupling, Dist, FiniteMetricSpace
from .errors import SpaceMismatch, TooLarge

ZERO = Fraction(0)

BRUTEFORCE_SUPPORT_CAP = 8


class TransportResult:
    __slots__ = ("value", "witness")

    def __init__(self, value: Fraction, witness: Coupling):
        self.value = value
        self.witness = witness

    def __repr__(self) -> str:
        return f"TransportResult(value={self.value})"


def _northwest_corner(supply: list[Fraction], demand: list[Fraction]):
    m, n = len(supply), len(demand)
    rs, rt = supply[:], demand[:]
    x: dict[tuple[int, int], Fraction] = {}
    basis: list[tuple[int, int]] = []
    i = j = 0
    while True:
        q = min(rs[i], rt[j])
        x[(i, j)] = q
        basis.append((i, j))
        rs[i] -= q
        rt[j] -= q
        if i == m - 1 and j == n - 1:
            break
        if rs[i] == 0 and i < m - 1:
            i += 1
        else:
            j += 1
    return x, basis


def _potentials(basis: Sequence[tuple[int, int]], cost, m: int, n: int):
    u: list[Fraction | None] = [None] * m
    v: list[Fraction | None] = [None] * n
    u[0] = ZERO
    by_row: dict[int, list[int]] = {}
    by_col: dict[int, list[int]] = {}
    for (i, j) in basis:
        by_row.setdefault(i, []).append(j)
        by_col.setdefault(j, []).append(i)
    stack = [("r", 0)]
    while stack:
        kind, k = stack.pop()
        if kind == "r":
            for j in by_row.get(k, ()):
                if v[j] is None:
                    v[j] = cost[k][j] - u[k]
                    stack.append(("c", j))
        else:
            for i in by_col.get(k, ()):
                if u[i] is None:
                    u[i] = cost[i][k] - v[k]
                    stack.append(("r", i))
    return u, v


def _cycle(basis: Sequence[tuple[int, int]], enter: tuple[int, int]):
    # Unique alternating cycle created by adding `enter` to the basis tree:
    # path from the entering cell's row node to its column node.
    adj: dict[tuple[str, int], list[tuple[tuple[str, int], tuple[int, int]]]] = {}
    for (i, j) in basis:
        adj.setdefault(("r", i), []).append((("c", j), (i, j)))
        adj.setdefault(("c", j), []).append((("r", i), (i, j)))
    start, goal = ("r", enter[0]), ("c", enter[1])
    prev: dict = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        if node == goal:
            break
        for nxt, cell in adj.get(node, ()):
            if nxt not in prev:
                prev[nxt] = (node, cell)
                queue.append(nxt)
    path_cells = []
    node = goal
    while prev[node] is not None:
        node, cell = prev[node]
        path_cells.append(cell)
    path_cells.reverse()
    return [enter] + path_cells


def solve_transport(
    supply: Sequence[Fraction],
    demand: Sequence[Fraction],
    cost: Sequence[Sequence[Fraction]],
):
    """Minimize sum x[i][j]*cost[i][j] over exact transportation plans."""
    m, n = len(supply), len(demand)
    assert sum(supply, ZERO) == sum(demand, ZERO), "unbalanced transport"
    x, basis = _northwest_corner(list(supply), list(demand))
    basis_set = set(basis)
    while True:
        u, v = _potentials(basis, cost, m, n)
        enter = None
        for i in range(m):
            for j in range(n):
                if (i, j) not in basis_set and cost[i][j] - u[i] - v[j] < 0:
                    enter = (i, j)
                    break
            if enter:
                break
        if enter is None:
            break
        cycle = _cycle(basis, enter)
        minus = cycle[1::2]
        theta = min(x[c] for c in minus)
        leave = min(c for c in minus if x[c] == theta)
        x[enter] = ZERO
        for c in cycle[0::2]:
            x[c] += theta
        for c in cycle[1::2]:
            x[c] -= theta
        basis_set.remove(leave)
        basis_set.add(enter)
        del x[leave]
        basis = sorted(basis_set)
    value = sum((q * cost[i][j] for (i, j), q in x.items()), ZERO)
    plan = {cell: q for cell, q in x.items() if q > 0}
    return value, plan


def optimal_transport(left: Dist, right: Dist, metric: Callable):
    """Exact Kantorovich value and plan for an arbitrary item metric."""
    xs = list(left.support)
    ys = list(right.support)
    supply = [left.weight(x) for x in xs]
    demand = [right.weight(y) for y in ys]
    cost = [[metric(x, y) for y in ys] for x in xs]
    value, plan = solve_transport(supply, demand, cost)
    joint = {(xs[i], ys[j]): q for (i, j), q in plan.items()}
    return value, joint


def kantorovich_metric(metric: Callable) -> Callable:
    """Lift an item metric to distributions via optimal transport."""

    def lifted(left: Dist, right: Dist) -> Fraction:
        value, _ = optimal_transport(left, right, metric)
        return value

    return lifted


def kantorovich(space: FiniteMetricSpace, left: Dist, right: Dist) -> TransportResult:
    """Kantorovich distance over the space metric, with an optimal coupling."""
    if left.space != space or right.space != space:
        raise SpaceMismatch()
    if not (left.is_ground() and right.is_ground()):
        raise SpaceMismatch("kantorovich over a space needs label-supported inputs")
    value, joint = optimal_transport(left, right, space.d)
    return TransportResult(value, Coupling(joint, left, right))


def transport_cost(space: FiniteMetricSpace, coupling: Coupling) -> Fraction:
    """The exact cost of a coupling under the space metric."""
    if coupling.left.space != space:
        raise SpaceMismatch()
    return sum((q * space.d(x, y) for (x, y), q in coupling.items()), ZERO)


def _spanning_tree_solution(
    cells: Sequence[tuple[int, int]],
    supply: Sequence[Fraction],
    demand: Sequence[Fraction],
):
    # Solve the marginal equations on a candidate tree by leaf stripping;
    # returns None when some basic value turns negative.
    m, n = len(supply), len(demand)
    need = {("r", i): supply[i] for i in range(m)}
    need.update({("c", j): demand[j] for j in range(n)})
    incident: dict[tuple[str, int], set[tuple[int, int]]] = {}
    for cell in cells:
        incident.setdefault(("r", cell[0]), set()).add(cell)
        incident.setdefault(("c", cell[1]), set()).add(cell)
    if len(incident) < m + n:
        return None
    values: dict[tuple[int, int], Fraction] = {}
    leaves = [node for node, cs in incident.items() if len(cs) == 1]
    alive = {cell: True for cell in cells}
    while leaves:
        node = leaves.pop()
        live = [c for c in incident[node] if alive[c]]
        if not live:
            continue
        cell = live[0]
        q = need[node]
        if q < 0:
            return None
        values[cell] = q
        alive[cell] = False
        other = ("c", cell[1]) if node[0] == "r" else ("r", cell[0])
        need[other] -= q
        need[node] = ZERO
        remaining = [c for c in incident[other] if alive[c]]
        if len(remaining) == 1:
            leaves.append(other)
        elif len(remaining) == 0 and need[other] != 0:
            return None
    if any(alive.values()) or any(v < 0 for v in values.values()):
        return None
    if any(need[node] != 0 for node in need):
        return None
    return values


def _is_spanning_tree(cells: Sequence[tuple[int, int]], m: int, n: int) -> bool:
    parent = {("r", i): ("r", i) for i in range(m)}
    parent.update({("c", j): ("c", j) for j in range(n)})

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (i, j) in cells:
        ra, rb = find(("r", i)), find(("c", j))
        if ra == rb:
            return False
        parent[ra] = rb
    roots = {find(node) for node in parent}
    return len(roots) == 1


def kantorovich_bruteforce(
    space: FiniteMetricSpace, left: Dist, right: Dist
) -> Fraction:
    """Exact optimum by enumerating every spanning-tree basic solution."""
    if left.space != space or right.space != space:
        raise SpaceMismatch()
    xs = list(left.support)
    ys = list(right.support)
    m, n = len(xs), len(ys)
    if m + n > BRUTEFORCE_SUPPORT_CAP:
        raise TooLarge("combined support", m + n, BRUTEFORCE_SUPPORT_CAP)
    supply = [left.weight(x) for x in xs]
    demand = [right.weight(y) for y in ys]
    all_cells = [(i, j) for i in range(m) for j in range(n)]
    best = None
    for cells in combinations(all_cells, m + n - 1):
        if not _is_spanning_tree(cells, m, n):
            continue
        values = _spanning_tree_solution(cells, supply, demand)
        if values is None:
            continue
        cost = sum(
            (q * space.d(xs[i], ys[j]) for (i, j), q in values.items()), ZERO
        )
        if best is None or cost < best:
            best = cost
    assert best is not None, "a balanced transport problem is always feasible"
    return best
