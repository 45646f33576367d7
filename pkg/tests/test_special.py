import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from qtfa.special import EULER_GAMMA, digamma, gamma, lgamma

positive = st.floats(1e-3, 200.0, allow_nan=False)


@given(positive)
def test_digamma_matches_mpmath(x):
    ref = float(mpmath.digamma(x))
    assert digamma(x) == pytest.approx(ref, rel=1e-13, abs=1e-13)


@given(st.floats(-20.0, -1e-3).filter(lambda x: abs(x - round(x)) > 1e-3))
def test_digamma_reflection(x):
    ref = float(mpmath.digamma(x))
    assert digamma(x) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@given(positive)
def test_lgamma_matches_mpmath(x):
    ref = float(mpmath.loggamma(x))
    assert lgamma(x) == pytest.approx(ref, rel=1e-13, abs=1e-13)


@given(st.floats(0.05, 50.0))
def test_recurrences(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-12)
    assert lgamma(x + 1) - lgamma(x) == pytest.approx(math.log(x), rel=1e-10, abs=1e-12)


def test_known_values():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-15)
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-15)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert EULER_GAMMA == pytest.approx(float(mpmath.euler), abs=0)


def test_poles_and_domain():
    for x in (0.0, -1.0, -7.0):
        with pytest.raises(ValueError):
            digamma(x)
    with pytest.raises(ValueError):
        lgamma(-0.5)
    with pytest.raises(ValueError):
        digamma(float("nan"))
