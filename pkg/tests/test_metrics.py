import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqsdc.metrics import EfficiencyInput, comparison_table, eta1, eta2, protocol_counts


def test_eta1_examples():
    assert eta1(EfficiencyInput(2, 4, 3)) == Fraction(2, 7)
    # published as 0.28: two-decimal truncation of 2/7, not rounding
    assert math.floor(float(eta1(EfficiencyInput(2, 4, 3))) * 100) / 100 == 0.28
    assert eta1(EfficiencyInput(2, 5, 3)) == Fraction(1, 4)
    assert eta1(EfficiencyInput(0, 4, 3)) == 0


def test_eta2_examples():
    assert eta2(EfficiencyInput(2, 4)) == Fraction(1, 2)
    assert eta2(EfficiencyInput(2, 5)) == Fraction(2, 5)
    assert eta2(EfficiencyInput(2, 2)) == 1


def test_zero_denominators():
    with pytest.raises(ZeroDivisionError):
        eta1(EfficiencyInput(1, 0, 0))
    with pytest.raises(ZeroDivisionError):
        eta2(EfficiencyInput(1, 0, 3))


def test_negative_counts():
    with pytest.raises(ValueError):
        EfficiencyInput(-1, 2, 0)


def test_protocol_counts():
    assert protocol_counts("cluster") == EfficiencyInput(2, 4, 3)
    assert protocol_counts("brown") == EfficiencyInput(2, 5, 3)
    assert eta2(protocol_counts("cluster")) == 0.5


def test_comparison_table():
    rows = {r.name: r for r in comparison_table()}
    proposed = rows["Proposed Protocol"]
    assert proposed.source == "computed"
    assert proposed.eta1 == pytest.approx(0.2857, abs=0.005)
    assert proposed.published_eta1 == 0.28
    assert proposed.eta2 == 0.5
    assert (rows["Dong et al."].eta1, rows["Dong et al."].eta2, rows["Dong et al."].source) == (0.125, 0.25, "cited")
    assert (rows["Hassanpour et al."].eta1, rows["Hassanpour et al."].eta2) == (0.22, 0.33)
    brown = rows["Proposed (2-3) Brown"]
    assert (brown.eta1, brown.eta2) == (0.25, 0.4)


counts = st.builds(EfficiencyInput, st.integers(0, 50), st.integers(1, 50), st.integers(1, 50))


@given(counts)
def test_eta1_below_eta2(c):
    assert eta1(c) <= eta2(c)
    if c.m_u:
        assert eta1(c) < eta2(c)


@given(counts, st.integers(1, 10))
def test_monotonicity(c, k):
    more_q = EfficiencyInput(c.m_u, c.q_k + k, c.b_k)
    more_b = EfficiencyInput(c.m_u, c.q_k, c.b_k + k)
    more_m = EfficiencyInput(c.m_u + k, c.q_k, c.b_k)
    assert eta1(more_q) <= eta1(c) and eta2(more_q) <= eta2(c)
    assert eta1(more_b) <= eta1(c)
    assert eta1(more_m) > eta1(c) and eta2(more_m) > eta2(c)
