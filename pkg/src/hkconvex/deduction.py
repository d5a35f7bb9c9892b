"""Quantitative deduction over convex-semilattice terms.

A derivation is an immutable tree of rule applications concluding
quantitative equations t =_eps s. The checker validates every node's
side conditions exactly and reports the first failing node by its path
from the root.

Rules: Refl, Symm, Triang (eps sums, capped at 1), Max (non-strict
weakening), NExpOplus (eps = max), NExpPlusP (eps = p-weighted sum),
Subst (on hypothesis-free premises), Cut (with an explicit finite
intermediate set), Assum (cites a hypothesis verbatim), AxiomCS (theory
axioms at eps 0, either orientation).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FiniteMetricSpace, as_fraction, format_fraction
from .errors import OutOfRange, ParseError
from .terms import Gen, Oplus, PlusP, Term, parse_term, print_term, substitute

ZERO = Fraction(0)
ONE = Fraction(1)

RULES = (
    "Refl",
    "Symm",
    "Triang",
    "Max",
    "NExpOplus",
    "NExpPlusP",
    "Subst",
    "Cut",
    "Assum",
    "AxiomCS",
)

AXIOMS = ("A", "C", "I", "A_p", "C_p", "I_p", "D")


@dataclass(frozen=True, slots=True)
class QuantEquation:
    left: Term
    right: Term
    eps: Fraction

    def __post_init__(self):
        if not (ZERO <= self.eps <= ONE):
            raise OutOfRange("equation distance", self.eps)

    def flip(self) -> "QuantEquation":
        return QuantEquation(self.right, self.left, self.eps)

    def __str__(self) -> str:
        return (
            f"{print_term(self.left)} ={format_fraction(self.eps)} "
            f"{print_term(self.right)}"
        )


@dataclass(frozen=True, slots=True)
class Derivation:
    rule: str
    conclusion: QuantEquation
    premises: tuple["Derivation", ...] = ()
    axiom: str | None = None
    subst: tuple[tuple[str, Term], ...] | None = None
    theta: tuple[QuantEquation, ...] | None = None
    hypotheses: tuple[QuantEquation, ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


@dataclass(frozen=True, slots=True)
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""


def _fail(path: tuple[int, ...], reason: str) -> CheckResult:
    return CheckResult(False, path, reason)


def _match_axiom(name: str, left: Term, right: Term) -> bool:
    """Does left = right instantiate the named axiom at eps 0?"""
    if name == "A":
        return (
            isinstance(left, Oplus)
            and isinstance(left.left, Oplus)
            and isinstance(right, Oplus)
            and isinstance(right.right, Oplus)
            and left.left.left == right.left
            and left.left.right == right.right.left
            and left.right == right.right.right
        )
    if name == "C":
        return (
            isinstance(left, Oplus)
            and isinstance(right, Oplus)
            and left.left == right.right
            and left.right == right.left
        )
    if name == "I":
        return isinstance(left, Oplus) and left.left == left.right and left.left == right
    if name == "A_p":
        # (x +_q y) +_p z  =  x +_{pq} (y +_{p(1-q)/(1-pq)} z)
        if not (
            isinstance(left, PlusP)
            and isinstance(left.left, PlusP)
            and isinstance(right, PlusP)
            and isinstance(right.right, PlusP)
        ):
            return False
        p = left.p
        q = left.left.p
        return (
            right.p == p * q
            and right.right.p == p * (1 - q) / (1 - p * q)
            and left.left.left == right.left
            and left.left.right == right.right.left
            and left.right == right.right.right
        )
    if name == "C_p":
        return (
            isinstance(left, PlusP)
            and isinstance(right, PlusP)
            and right.p == 1 - left.p
            and left.left == right.right
            and left.right == right.left
        )
    if name == "I_p":
        return isinstance(left, PlusP) and left.left == left.right and left.left == right
    if name == "D":
        # x +_p (y oplus z)  =  (x +_p y) oplus (x +_p z)
        if not (
            isinstance(left, PlusP)
            and isinstance(left.right, Oplus)
            and isinstance(right, Oplus)
            and isinstance(right.left, PlusP)
            and isinstance(right.right, PlusP)
        ):
            return False
        return (
            right.left.p == left.p
            and right.right.p == left.p
            and right.left.left == left.left
            and right.right.left == left.left
            and right.left.right == left.right.left
            and right.right.right == left.right.right
        )
    return False


def _uses_assumption(d: Derivation) -> bool:
    if d.rule == "Assum":
        return True
    return any(_uses_assumption(p) for p in d.premises)


def _check_node(
    space: FiniteMetricSpace,
    gamma: frozenset[QuantEquation],
    d: Derivation,
    path: tuple[int, ...],
) -> CheckResult:
    rule = d.rule
    goal = d.conclusion
    if rule not in RULES:
        return _fail(path, f"unknown rule {rule!r}")

    def arity(n: int) -> CheckResult | None:
        if len(d.premises) != n:
            return _fail(path, f"{rule} expects {n} premise(s), got {len(d.premises)}")
        return None

    if rule == "Refl":
        if bad := arity(0):
            return bad
        if goal.left != goal.right:
            return _fail(path, "Refl needs syntactically equal sides")
        if goal.eps != ZERO:
            return _fail(path, "Refl needs eps 0")
    elif rule == "Symm":
        if bad := arity(1):
            return bad
        prem = d.premises[0].conclusion
        if goal != prem.flip():
            return _fail(path, "Symm conclusion must flip the premise")
    elif rule == "Triang":
        if bad := arity(2):
            return bad
        p1 = d.premises[0].conclusion
        p2 = d.premises[1].conclusion
        if p1.right != p2.left:
            return _fail(path, "Triang premises must share the middle term")
        if goal.left != p1.left or goal.right != p2.right:
            return _fail(path, "Triang conclusion endpoints do not match premises")
        if goal.eps != min(ONE, p1.eps + p2.eps):
            return _fail(path, "Triang eps must be the capped sum of premise eps")
    elif rule == "Max":
        if bad := arity(1):
            return bad
        prem = d.premises[0].conclusion
        if goal.left != prem.left or goal.right != prem.right:
            return _fail(path, "Max must keep both terms")
        if goal.eps < prem.eps:
            return _fail(path, "Max cannot decrease eps")
    elif rule == "NExpOplus":
        if bad := arity(2):
            return bad
        p1 = d.premises[0].conclusion
        p2 = d.premises[1].conclusion
        want_l = Oplus(p1.left, p2.left)
        want_r = Oplus(p1.right, p2.right)
        if goal.left != want_l or goal.right != want_r:
            return _fail(path, "NExpOplus conclusion must pair the premises under oplus")
        if goal.eps != max(p1.eps, p2.eps):
            return _fail(path, "NExpOplus eps must be the max of premise eps")
    elif rule == "NExpPlusP":
        if bad := arity(2):
            return bad
        if not (isinstance(goal.left, PlusP) and isinstance(goal.right, PlusP)):
            return _fail(path, "NExpPlusP conclusion sides must be p+ terms")
        p = goal.left.p
        if goal.right.p != p:
            return _fail(path, "NExpPlusP sides must share the probability")
        p1 = d.premises[0].conclusion
        p2 = d.premises[1].conclusion
        if goal.left != PlusP(p, p1.left, p2.left) or goal.right != PlusP(
            p, p1.right, p2.right
        ):
            return _fail(path, "NExpPlusP conclusion must pair the premises under p+")
        if goal.eps != p * p1.eps + (1 - p) * p2.eps:
            return _fail(path, "NExpPlusP eps must be the p-weighted sum")
    elif rule == "Subst":
        if bad := arity(1):
            return bad
        if d.subst is None:
            return _fail(path, "Subst needs a substitution")
        if _uses_assumption(d.premises[0]):
            return _fail(path, "Subst premise must not use hypotheses")
        mapping = dict(d.subst)
        prem = d.premises[0].conclusion
        if goal.left != substitute(prem.left, mapping) or goal.right != substitute(
            prem.right, mapping
        ):
            return _fail(path, "Subst conclusion must be the substituted premise")
        if goal.eps != prem.eps:
            return _fail(path, "Subst preserves eps")
    elif rule == "Cut":
        if d.theta is None or not d.theta:
            return _fail(path, "Cut needs a nonempty intermediate set")
        if len(d.premises) != len(d.theta) + 1:
            return _fail(
                path,
                "Cut expects one premise per intermediate equation plus the final one",
            )
        for i, eq in enumerate(d.theta):
            if d.premises[i].conclusion != eq:
                return _fail(path, f"Cut premise {i} does not conclude theta[{i}]")
        if d.premises[-1].conclusion != goal:
            return _fail(path, "Cut final premise must conclude the goal")
        for i, eq in enumerate(d.theta):
            sub = _check_node(space, gamma, d.premises[i], path + (i,))
            if not sub.ok:
                return sub
        return _check_node(
            space, frozenset(d.theta), d.premises[-1], path + (len(d.theta),)
        )
    elif rule == "Assum":
        if bad := arity(0):
            return bad
        if goal not in gamma:
            return _fail(path, "Assum cites an equation outside the hypotheses")
    elif rule == "AxiomCS":
        if bad := arity(0):
            return bad
        if d.axiom not in AXIOMS:
            return _fail(path, f"unknown axiom {d.axiom!r}")
        if goal.eps != ZERO:
            return _fail(path, "axiom instances have eps 0")
        if not (
            _match_axiom(d.axiom, goal.left, goal.right)
            or _match_axiom(d.axiom, goal.right, goal.left)
        ):
            return _fail(path, f"conclusion is not an instance of axiom {d.axiom}")

    for i, prem in enumerate(d.premises):
        sub = _check_node(space, gamma, prem, path + (i,))
        if not sub.ok:
            return sub
    return CheckResult(True)


def check_derivation(
    space: FiniteMetricSpace,
    gamma,
    d: Derivation,
) -> CheckResult:
    """Validate every node; on failure report the path from the root."""
    return _check_node(space, frozenset(gamma), d, ())


def metric_hypotheses(space: FiniteMetricSpace) -> tuple[QuantEquation, ...]:
    """The ground-distance equations x =_{d(x,y)} y, both orientations."""
    eqs = []
    for i, x in enumerate(space.points):
        for y in space.points[i + 1 :]:
            eqs.append(QuantEquation(Gen(x), Gen(y), space.d(x, y)))
            eqs.append(QuantEquation(Gen(y), Gen(x), space.d(x, y)))
    return tuple(eqs)


def equation_to_json_dict(eq: QuantEquation) -> dict:
    return {
        "l": print_term(eq.left),
        "r": print_term(eq.right),
        "eps": format_fraction(eq.eps),
    }


def equation_from_json_dict(obj: dict) -> QuantEquation:
    try:
        left = parse_term(obj["l"])
        right = parse_term(obj["r"])
        eps = as_fraction(obj["eps"])
    except KeyError as exc:
        raise ParseError(f"equation object missing field {exc}", 0) from None
    return QuantEquation(left, right, eps)


def derivation_to_json_dict(d: Derivation) -> dict:
    out: dict = {
        "rule": d.rule,
        "conclusion": equation_to_json_dict(d.conclusion),
    }
    if d.premises:
        out["premises"] = [derivation_to_json_dict(p) for p in d.premises]
    if d.axiom is not None:
        out["axiom"] = d.axiom
    if d.subst is not None:
        out["subst"] = {var: print_term(t) for var, t in d.subst}
    if d.theta is not None:
        out["theta"] = [equation_to_json_dict(eq) for eq in d.theta]
    if d.hypotheses:
        out["hypotheses"] = [equation_to_json_dict(eq) for eq in d.hypotheses]
    return out


def derivation_from_json_dict(obj: dict) -> Derivation:
    try:
        rule = obj["rule"]
        conclusion = equation_from_json_dict(obj["conclusion"])
    except KeyError as exc:
        raise ParseError(f"derivation object missing field {exc}", 0) from None
    premises = tuple(
        derivation_from_json_dict(p) for p in obj.get("premises", [])
    )
    subst = None
    if "subst" in obj:
        subst = tuple(
            sorted((var, parse_term(text)) for var, text in obj["subst"].items())
        )
    theta = None
    if "theta" in obj:
        theta = tuple(equation_from_json_dict(eq) for eq in obj["theta"])
    hypotheses = tuple(
        equation_from_json_dict(eq) for eq in obj.get("hypotheses", [])
    )
    return Derivation(
        rule=rule,
        conclusion=conclusion,
        premises=premises,
        axiom=obj.get("axiom"),
        subst=subst,
        theta=theta,
        hypotheses=hypotheses,
    )
