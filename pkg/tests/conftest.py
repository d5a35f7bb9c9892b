from fractions import Fraction

import pytest
from hypothesis import settings

from hkconvex import FiniteMetricSpace

settings.register_profile("exact", deadline=None, max_examples=60)
settings.load_profile("exact")


@pytest.fixture
def x3() -> FiniteMetricSpace:
    """Three points on a path: a -1/2- b -1/2- c, d(a,c) = 1."""
    return FiniteMetricSpace(
        ["a", "b", "c"],
        {
            ("a", "b"): Fraction(1, 2),
            ("b", "c"): Fraction(1, 2),
            ("a", "c"): Fraction(1),
        },
    )


@pytest.fixture
def x2() -> FiniteMetricSpace:
    return FiniteMetricSpace(["a", "b"], {("a", "b"): Fraction(1, 2)})
