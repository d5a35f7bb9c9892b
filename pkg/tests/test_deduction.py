from fractions import Fraction

import pytest
from hypothesis import given, settings

import strategies as sts
from hkconvex import (
    AXIOMS,
    Derivation,
    OutOfRange,
    QuantEquation,
    check_derivation,
    derivation_from_json_dict,
    derivation_to_json_dict,
    equation_from_json_dict,
    equation_to_json_dict,
    metric_hypotheses,
    term_distance,
)
from hkconvex.terms import Gen, parse_term

F = Fraction


def eq(l, r, e):
    return QuantEquation(parse_term(l), parse_term(r), F(e))


def refl(term):
    t = parse_term(term)
    return Derivation("Refl", QuantEquation(t, t, F(0)))


def test_equation_validates_epsilon():
    with pytest.raises(OutOfRange):
        QuantEquation(Gen("a"), Gen("b"), F(3, 2))
    with pytest.raises(OutOfRange):
        QuantEquation(Gen("a"), Gen("b"), F(-1, 8))


def test_refl_valid(x3):
    assert check_derivation(x3, (), refl("(oplus a b)")).ok


def test_refl_rejects_distinct_sides(x3):
    bad = Derivation("Refl", eq("a", "b", 0))
    res = check_derivation(x3, (), bad)
    assert not res.ok and res.path == ()


def test_symm_flips(x3):
    gamma = (eq("a", "b", "1/2"),)
    d = Derivation("Symm", eq("b", "a", "1/2"), (Derivation("Assum", eq("a", "b", "1/2")),))
    assert check_derivation(x3, gamma, d).ok


def test_assum_requires_verbatim_membership(x3):
    gamma = (eq("a", "b", "1/2"),)
    assert check_derivation(x3, gamma, Derivation("Assum", eq("a", "b", "1/2"))).ok
    # same pair at a larger eps is not in gamma
    res = check_derivation(x3, gamma, Derivation("Assum", eq("a", "b", "3/4")))
    assert not res.ok


def test_triang_adds_and_caps(x3):
    gamma = (eq("a", "b", "3/4"), eq("b", "c", "3/4"))
    p1 = Derivation("Assum", eq("a", "b", "3/4"))
    p2 = Derivation("Assum", eq("b", "c", "3/4"))
    good = Derivation("Triang", eq("a", "c", "1"), (p1, p2))
    assert check_derivation(x3, gamma, good).ok
    # capped sum is exactly 1; claiming anything else is invalid
    under = Derivation("Triang", eq("a", "c", "7/8"), (p1, p2))
    assert not check_derivation(x3, gamma, under).ok


def test_triang_quarter_plus_quarter(x3):
    gamma = (eq("a", "b", "1/4"), eq("b", "c", "1/4"))
    d = Derivation(
        "Triang",
        eq("a", "c", "1/2"),
        (Derivation("Assum", eq("a", "b", "1/4")), Derivation("Assum", eq("b", "c", "1/4"))),
    )
    assert check_derivation(x3, gamma, d).ok


def test_max_weakens_non_strictly(x3):
    gamma = (eq("a", "b", "1/2"),)
    inner = Derivation("Assum", eq("a", "b", "1/2"))
    assert check_derivation(
        x3, gamma, Derivation("Max", eq("a", "b", "1/2"), (inner,))
    ).ok
    assert check_derivation(
        x3, gamma, Derivation("Max", eq("a", "b", "3/4"), (inner,))
    ).ok
    res = check_derivation(x3, gamma, Derivation("Max", eq("a", "b", "1/4"), (inner,)))
    assert not res.ok


def test_oplus_congruence_takes_max(x3):
    gamma = (eq("a", "b", "1/2"), eq("b", "c", "1/4"))
    d = Derivation(
        "NExpOplus",
        eq("(oplus a b)", "(oplus b c)", "1/2"),
        (Derivation("Assum", eq("a", "b", "1/2")), Derivation("Assum", eq("b", "c", "1/4"))),
    )
    assert check_derivation(x3, gamma, d).ok
    claim_sum = Derivation(
        "NExpOplus",
        eq("(oplus a b)", "(oplus b c)", "3/4"),
        tuple(d.premises),
    )
    assert not check_derivation(x3, gamma, claim_sum).ok


def test_plusp_congruence_weights_epsilons(x3):
    gamma = (eq("a", "b", "1/2"), eq("b", "c", "1/4"))
    d = Derivation(
        "NExpPlusP",
        eq("(p+ 1/2 a b)", "(p+ 1/2 b c)", "3/8"),
        (Derivation("Assum", eq("a", "b", "1/2")), Derivation("Assum", eq("b", "c", "1/4"))),
    )
    assert check_derivation(x3, gamma, d).ok
    mismatched_p = Derivation(
        "NExpPlusP",
        eq("(p+ 1/2 a b)", "(p+ 1/4 b c)", "3/8"),
        tuple(d.premises),
    )
    assert not check_derivation(x3, gamma, mismatched_p).ok


def test_axiom_instances_accepted(x3):
    cases = {
        "A": ("(oplus (oplus a b) c)", "(oplus a (oplus b c))"),
        "C": ("(oplus a b)", "(oplus b a)"),
        "I": ("(oplus a a)", "a"),
        "A_p": ("(p+ 1/3 (p+ 1/2 a b) c)", "(p+ 1/6 a (p+ 1/5 b c))"),
        "C_p": ("(p+ 1/3 a b)", "(p+ 2/3 b a)"),
        "I_p": ("(p+ 1/2 a a)", "a"),
        "D": ("(p+ 1/2 a (oplus b c))", "(oplus (p+ 1/2 a b) (p+ 1/2 a c))"),
    }
    assert set(cases) == set(AXIOMS)
    for name, (l, r) in cases.items():
        d = Derivation("AxiomCS", eq(l, r, 0), axiom=name)
        assert check_derivation(x3, (), d).ok, name
        # both orientations are instances
        flipped = Derivation("AxiomCS", eq(r, l, 0), axiom=name)
        assert check_derivation(x3, (), flipped).ok, name


def test_axiom_rejects_non_instance(x3):
    d = Derivation("AxiomCS", eq("(oplus a b)", "a", 0), axiom="I")
    assert not check_derivation(x3, (), d).ok
    wrong_eps = Derivation("AxiomCS", eq("(oplus a a)", "a", "1/8"), axiom="I")
    assert not check_derivation(x3, (), wrong_eps).ok


def test_a_p_side_condition_is_exact(x3):
    # p=1/3, q=1/2 forces pq=1/6 and p(1-q)/(1-pq)=1/5; any other pair fails
    bad = Derivation(
        "AxiomCS",
        eq("(p+ 1/3 (p+ 1/2 a b) c)", "(p+ 1/6 a (p+ 1/4 b c))", 0),
        axiom="A_p",
    )
    assert not check_derivation(x3, (), bad).ok


def test_subst_requires_hypothesis_free_premise(x3):
    inner = Derivation("AxiomCS", eq("(oplus x x)", "x", 0), axiom="I")
    d = Derivation(
        "Subst",
        eq("(oplus (p+ 1/2 a b) (p+ 1/2 a b))", "(p+ 1/2 a b)", 0),
        (inner,),
        subst=(("x", parse_term("(p+ 1/2 a b)")),),
    )
    assert check_derivation(x3, (), d).ok
    leaky = Derivation(
        "Subst",
        eq("a", "b", "1/2"),
        (Derivation("Assum", eq("a", "b", "1/2")),),
        subst=(),
    )
    gamma = (eq("a", "b", "1/2"),)
    assert not check_derivation(x3, gamma, leaky).ok


def test_cut_discharges_theta(x3):
    # theta = {a =_1/2 b} proved from gamma; conclusion reuses it
    gamma = metric_hypotheses(x3)
    theta = (eq("a", "b", "1/2"),)
    prove_theta = Derivation("Assum", eq("a", "b", "1/2"))
    under_theta = Derivation("Assum", eq("a", "b", "1/2"))
    d = Derivation("Cut", eq("a", "b", "1/2"), (prove_theta, under_theta), theta=theta)
    assert check_derivation(x3, gamma, d).ok


def test_cut_rejects_unproven_theta(x3):
    theta = (eq("a", "c", "1/8"),)
    prove_theta = Derivation("Assum", eq("a", "c", "1/8"))
    under_theta = Derivation("Assum", eq("a", "c", "1/8"))
    d = Derivation("Cut", eq("a", "c", "1/8"), (prove_theta, under_theta), theta=theta)
    res = check_derivation(x3, metric_hypotheses(x3), d)
    assert not res.ok


def test_invalid_node_path_points_into_tree(x3):
    gamma = (eq("a", "b", "1/2"),)
    bad_leaf = Derivation("Assum", eq("a", "b", "1/4"))
    d = Derivation(
        "Triang",
        eq("a", "a", "3/4"),
        (Derivation("Assum", eq("a", "b", "1/2")), Derivation("Symm", eq("b", "a", "1/4"), (bad_leaf,))),
    )
    res = check_derivation(x3, gamma, d)
    assert not res.ok
    assert res.path == (1, 0)


def test_metric_hypotheses_cover_both_orientations(x3):
    gamma = metric_hypotheses(x3)
    assert eq("a", "b", "1/2") in gamma
    assert eq("b", "a", "1/2") in gamma
    assert len(gamma) == 6


def test_equation_json_round_trip():
    e = eq("(p+ 1/2 a b)", "c", "1/3")
    assert equation_from_json_dict(equation_to_json_dict(e)) == e


def test_derivation_json_round_trip(x3):
    inner = Derivation("AxiomCS", eq("(oplus x x)", "x", 0), axiom="I")
    d = Derivation(
        "Subst",
        eq("(oplus a a)", "a", 0),
        (inner,),
        subst=(("x", Gen("a")),),
        hypotheses=(eq("a", "b", "1/2"),),
    )
    back = derivation_from_json_dict(derivation_to_json_dict(d))
    assert back == d
    assert check_derivation(x3, (), back).ok


def test_unknown_rule_rejected(x3):
    d = Derivation("Arch", eq("a", "a", 0))
    assert not check_derivation(x3, (), d).ok


@given(sts.space_with_terms(2))
@settings(max_examples=30)
def test_checker_soundness_on_assumption_chains(bundle):
    # any valid derivation from true hypotheses cannot beat the true distance
    space, t, s = bundle
    from hkconvex.proofs import tightest_derivable

    gamma = metric_hypotheses(space)
    value, deriv = tightest_derivable(space, None, t, s)
    res = check_derivation(space, gamma, deriv)
    assert res.ok
    assert value >= term_distance(space, t, s)
