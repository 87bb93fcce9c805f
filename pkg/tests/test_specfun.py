"""Special functions and quadrature against independently computed anchors.

Every frozen constant below was evaluated with 30-digit arbitrary-precision
arithmetic outside this package; tolerances are far looser than the digits
carried.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modehop.specfun import (
    ConvergenceError,
    QuadratureSpec,
    integrate_finite,
    integrate_semi_infinite,
    log_gamma,
    lower_incomplete_gamma,
    regularized_lower_gamma,
)

# (shape, argument) -> regularized lower incomplete gamma
REGULARIZED_ANCHORS = {
    (1.0, 0.3): 0.25918177931828213,
    (2.5, 7.0): 0.98439058389973309,
    (300.0, 300.0): 0.5076777888862635,
    (300.0, 260.0): 0.0081667162218190689,
}

LOWER_ANCHORS = {
    (0.5, 5.0): 1.7696792476451032,
    (2.0, 1.0): 0.26424111765711536,
}

LOG_GAMMA_ANCHORS = {
    0.5: 0.57236494292470009,
    5.0: 3.1780538303479456,
}


def test_regularized_anchors():
    for (a, b), expected in REGULARIZED_ANCHORS.items():
        assert regularized_lower_gamma(a, b) == pytest.approx(expected, abs=1e-12)


def test_regularized_limits():
    assert regularized_lower_gamma(3.0, 0.0) == 0.0
    assert regularized_lower_gamma(3.0, math.inf) == 1.0
    # far right tail saturates
    assert regularized_lower_gamma(2.0, 60.0) == pytest.approx(1.0, abs=1e-15)


def test_lower_incomplete_anchors():
    for (a, b), expected in LOWER_ANCHORS.items():
        assert lower_incomplete_gamma(a, b) == pytest.approx(expected, rel=1e-12)


def test_log_gamma_anchors():
    for a, expected in LOG_GAMMA_ANCHORS.items():
        assert log_gamma(a) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(ValueError):
        log_gamma(0.0)
    with pytest.raises(ValueError):
        log_gamma(-1.5)


@given(
    a=st.floats(min_value=0.1, max_value=50.0),
    b=st.floats(min_value=0.0, max_value=80.0),
)
@settings(max_examples=150, deadline=None)
def test_regularized_recurrence(a, b):
    # P(a+1, b) = P(a, b) - b^a e^{-b} / Gamma(a+1)
    lhs = regularized_lower_gamma(a + 1.0, b)
    step = 0.0
    if b > 0.0:
        step = math.exp(a * math.log(b) - b - log_gamma(a + 1.0))
    rhs = regularized_lower_gamma(a, b) - step
    assert lhs == pytest.approx(rhs, abs=5e-11)
    assert 0.0 <= lhs <= 1.0


@given(
    a=st.floats(min_value=0.5, max_value=8.0),
    b=st.floats(min_value=0.1, max_value=20.0),
)
@settings(max_examples=60, deadline=None)
def test_quadrature_matches_incomplete_gamma(a, b):
    direct = integrate_finite(lambda x: x ** (a - 1.0) * math.exp(-x), 0.0, b)
    assert direct == pytest.approx(lower_incomplete_gamma(a, b), rel=1e-8, abs=1e-12)


def test_finite_polynomials_exact():
    assert integrate_finite(lambda x: x**3, 0.0, 1.0) == pytest.approx(0.25, rel=1e-14)
    value = integrate_finite(lambda x: 3 * x**2 - 2 * x + 1, -1.0, 2.0)
    assert value == pytest.approx(9.0, rel=1e-14)


def test_finite_singular_endpoints():
    assert integrate_finite(lambda x: x**-0.5, 0.0, 1.0) == pytest.approx(2.0, rel=1e-10)
    value = integrate_finite(lambda x: x**-0.5 * math.exp(-x), 0.0, 5.0)
    assert value == pytest.approx(1.7696792476451032, rel=1e-10)
    # singular at both ends
    value = integrate_finite(lambda x: 1.0 / math.sqrt(x * (1.0 - x)), 0.0, 1.0)
    assert value == pytest.approx(math.pi, rel=1e-8)


def test_finite_degenerate_interval():
    assert integrate_finite(lambda x: x, 2.0, 2.0) == 0.0
    with pytest.raises(ValueError):
        integrate_finite(lambda x: x, 1.0, 0.0)


def test_finite_budget_exhaustion():
    tight = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=1)
    with pytest.raises(ConvergenceError):
        integrate_finite(lambda x: math.cos(50.0 * x), 0.0, 10.0, tight)


def test_semi_infinite_gamma_values():
    for a, expected in ((1.0, 1.0), (2.5, 1.329340388179137), (7.0, 720.0)):
        value = integrate_semi_infinite(
            lambda z, a=a: z ** (a - 1.0) * math.exp(-z), 0.0
        )
        assert value == pytest.approx(expected, rel=1e-9)


def test_semi_infinite_gaussian_and_offset():
    value = integrate_semi_infinite(lambda z: math.exp(-0.5 * z * z), 0.0)
    assert value == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-10)
    value = integrate_semi_infinite(lambda z: math.exp(-(z - 3.0)), 3.0)
    assert value == pytest.approx(1.0, rel=1e-10)


def test_semi_infinite_far_spike():
    # narrow mass near z = 100 must not be missed by the tail transform
    total = integrate_semi_infinite(
        lambda z: math.exp(99.0 * math.log(z) - z - log_gamma(100.0)), 0.0
    )
    assert total == pytest.approx(1.0, rel=1e-8)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0, rel_tol=1e-8, max_subdivisions=10)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=1e-10, rel_tol=1e-8, max_subdivisions=0)
