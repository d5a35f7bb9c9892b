import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

import strategies as sts
from hkconvex import (
    ConvexSet,
    functor_map,
    EMAlgebra,
    FreeAlgebraCarrier,
    OutOfRange,
    SpaceCarrier,
    corrupt_alpha,
    dirac,
    eval_canonical,
    free_em_algebra,
    functor_F,
    functor_G,
    monad_mult,
    monad_unit,
    oplus,
    plus_p,
    roundtrip_FG,
    roundtrip_GF,
)
from hkconvex.presentation import check_homomorphism, rand_carrier_set

F = Fraction


def test_free_algebra_satisfies_em_laws(x3):
    em = free_em_algebra(x3)
    assert em.check_unit(seed=1, trials=20).ok
    assert em.check_mult(seed=2, trials=10).ok
    assert em.check_nonexpansive(seed=3, trials=10).ok


def test_functor_f_ops_on_free_algebra_are_union_and_mixture(x3):
    qa = functor_F(free_em_algebra(x3))
    rng = random.Random(5)
    for _ in range(8):
        x = qa.carrier.rand_point(rng)
        y = qa.carrier.rand_point(rng)
        assert qa.op_oplus(x, y) == oplus(x, y)
        assert qa.op_plusp(F(1, 3), x, y) == plus_p(F(1, 3), x, y)


def test_functor_f_ops_are_idempotent_at_a_point(x3):
    qa = functor_F(free_em_algebra(x3))
    x = monad_unit(x3, "b")
    assert qa.op_oplus(x, x) == x
    assert qa.op_plusp(F(1, 2), x, x) == x


def test_functor_f_output_satisfies_axioms_and_bounds(x3):
    qa = functor_F(free_em_algebra(x3))
    assert qa.check_axioms(seed=4, trials=25).ok
    assert qa.check_nonexpansive(seed=5, trials=25).ok


def test_functor_g_unit_and_join(x3):
    qa = functor_F(free_em_algebra(x3))
    em = functor_G(qa)
    x = monad_unit(x3, "a")
    y = monad_unit(x3, "c")
    assert em.alpha(ConvexSet(x3, [dirac(x3, x)])) == x
    assert em.alpha(ConvexSet(x3, [dirac(x3, x), dirac(x3, y)])) == qa.op_oplus(x, y)


def test_eval_canonical_matches_mult_on_free_instance(x3):
    em = free_em_algebra(x3)
    qa = functor_F(em)
    rng = random.Random(7)
    for _ in range(10):
        s = rand_carrier_set(rng, em.carrier)
        assert eval_canonical(qa, s) == monad_mult(s)


def test_roundtrips_clean_on_free_instance(x3):
    em = free_em_algebra(x3)
    gf = roundtrip_GF(em, 40, seed=11)
    fg = roundtrip_FG(functor_F(em), 40, seed=12)
    assert gf.ok and gf.trials == 40
    assert fg.ok and fg.trials == 40


def test_roundtrip_on_singleton_space_trivial():
    space = sts.FiniteMetricSpace(["a"], {})
    em = free_em_algebra(space)
    assert roundtrip_GF(em, 10, seed=1).ok
    assert roundtrip_FG(functor_F(em), 10, seed=1).ok


def test_corrupted_alpha_detected(x3):
    bad = corrupt_alpha(free_em_algebra(x3))
    report = roundtrip_GF(bad, 40, seed=8)
    assert not report.ok
    assert report.failures


def test_corrupt_alpha_needs_two_points():
    space = sts.FiniteMetricSpace(["a"], {})
    with pytest.raises(OutOfRange):
        corrupt_alpha(free_em_algebra(space))


def test_space_carrier_runs_checks(x3):
    carrier = SpaceCarrier(x3)
    assert carrier.points == ("a", "b", "c")
    assert carrier.metric("a", "b") == F(1, 2)
    # alpha that ignores set structure fails the unit law
    broken = EMAlgebra(carrier, lambda s: "a")
    report = broken.check_unit()
    assert not report.ok


def test_identity_is_a_homomorphism(x3):
    em = free_em_algebra(x3)
    assert check_homomorphism(lambda s: s, em, em, samples=10, seed=3).ok


def test_relabeling_is_a_homomorphism(x3):
    em = free_em_algebra(x3)
    swap = {"a": "b", "b": "a", "c": "c"}
    relabel = lambda s: functor_map(lambda x: swap[x], s)
    assert check_homomorphism(relabel, em, em, samples=20, seed=4).ok


def test_non_homomorphism_detected(x3):
    em = free_em_algebra(x3)
    # joining a fixed set after flattening differs from joining it inside
    graft = lambda s: oplus(s, monad_unit(x3, "a"))
    assert not check_homomorphism(graft, em, em, samples=20, seed=5).ok


@given(sts.spaces(max_points=3))
@settings(max_examples=8)
def test_free_roundtrips_on_generated_spaces(space):
    em = free_em_algebra(space)
    assert roundtrip_GF(em, 12, seed=21).ok
    assert roundtrip_FG(functor_F(em), 12, seed=22).ok


def test_free_algebra_carrier_hk(x3):
    carrier = FreeAlgebraCarrier(x3)
    s = monad_unit(x3, "a")
    t = monad_unit(x3, "b")
    assert carrier.metric(s, t) == F(1, 2)
