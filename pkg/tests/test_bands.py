from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msaekit.bands import BandPlan, constant_q_plan, constant_q_ratio, measured_q, uniform_plan
from msaekit.errors import DomainError


def exact_edges(B, q):
    """Band edges in rational arithmetic, independent of the float code path."""
    q = Fraction(q).limit_denominator(1000)
    rho = (2 * q + 1) / (2 * q - 1)
    return [Fraction(0)] + [rho ** (b - B) for b in range(1, B + 1)]


@pytest.mark.parametrize(
    "B, q, expected",
    [
        (3, 1.5, (0.0, 0.25, 0.5, 1.0)),
        (2, 2.0, (0.0, 0.6, 1.0)),
        (5, 1.5, (0.0, 1 / 16, 1 / 8, 1 / 4, 1 / 2, 1.0)),
    ],
)
def test_constant_q_examples(B, q, expected):
    assert constant_q_plan(B, q).edges == pytest.approx(expected, abs=1e-15)


def test_dyadic_edges_exact():
    for B in range(1, 9):
        assert constant_q_plan(B, 1.5).edges == tuple([0.0] + [2.0 ** (b - B) for b in range(1, B + 1)])


@pytest.mark.parametrize("B", [1, 2, 4, 7])
@pytest.mark.parametrize("q", [0.75, 1.0, 1.5, 2.0, 2.5, 4.0])
def test_edges_match_rational_oracle(B, q):
    plan = constant_q_plan(B, q)
    for got, want in zip(plan.edges, exact_edges(B, q)):
        assert got == pytest.approx(float(want), rel=1e-13, abs=0)


def test_uniform_plan():
    assert uniform_plan(4).edges == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert uniform_plan(1).edges == (0.0, 1.0)
    with pytest.raises(DomainError):
        uniform_plan(0)


@pytest.mark.parametrize("q", [0.5, 0.25, 0.0, -1.0])
def test_q_domain(q):
    with pytest.raises(DomainError):
        constant_q_plan(3, q)


def test_band_count_domain():
    with pytest.raises(DomainError):
        constant_q_plan(0, 2.0)


def test_measured_q_examples():
    plan = constant_q_plan(5, 2.0)
    for b in range(2, 6):
        assert abs(measured_q(plan, b) - 2.0) < 1e-12
    assert measured_q(uniform_plan(2), 1) == 0.5
    assert measured_q(constant_q_plan(5, 1.5), 5) == 1.5
    # lowest band touches DC, so its measured Q is 1/2 whatever the design Q
    assert measured_q(plan, 1) == 0.5
    with pytest.raises(DomainError):
        measured_q(plan, 0)
    with pytest.raises(DomainError):
        measured_q(plan, 6)


@given(st.integers(1, 12), st.floats(0.51, 20.0))
def test_plan_invariants(B, q):
    plan = constant_q_plan(B, q)
    assert plan.num_bands == B
    assert plan.edges[0] == 0.0 and plan.edges[-1] == 1.0
    assert all(b > a for a, b in zip(plan.edges, plan.edges[1:]))
    assert constant_q_ratio(q) > 1
    for b in range(2, B + 1):
        assert measured_q(plan, b) == pytest.approx(q, rel=1e-10)


def test_bad_explicit_edges():
    with pytest.raises(DomainError):
        BandPlan((0.0, 0.5, 0.5, 1.0))
    with pytest.raises(DomainError):
        BandPlan((0.1, 1.0))
    with pytest.raises(DomainError):
        BandPlan((0.0, 0.9))


def test_to_hz():
    assert constant_q_plan(3, 1.5).to_hz() == [0.0, 2000.0, 4000.0, 8000.0]
