import io
import math

import numpy as np
import pytest

from urtlab import (
    TailBoundReport,
    chernoff_upper_raw,
    degree_tail,
    expected_children,
    lower_tail_bound,
    tail_bound_high_index,
    tail_bound_low_index,
    tail_bound_pair,
    upper_tail_bound,
)
from urtlab.bounds import write_tail_reports


def test_expected_children_values():
    assert expected_children(10, 10) == 0.0
    assert expected_children(1, 10) == pytest.approx(1.9289682539682538)
    with pytest.raises(ValueError):
        expected_children(11, 10)
    with pytest.raises(ValueError):
        expected_children(0, 10)


def test_expected_children_log_bracket():
    for i, n in [(1, 10), (3, 50), (17, 1000), (999, 1000)]:
        s = expected_children(i, n)
        assert math.log(n / (i + 1)) <= s <= math.log(n / i)


def test_upper_tail_bound_values_and_domain():
    assert upper_tail_bound(3, 1.5) == pytest.approx(math.exp(-0.375))
    assert upper_tail_bound(1.0 + 1e-12, 1.0) == pytest.approx(1.0)
    for a, s in [(1.0, 1.0), (0.5, 1.0), (2.0, 0.0), (2.0, -1.0)]:
        with pytest.raises(ValueError):
            upper_tail_bound(a, s)


def test_lower_tail_bound_values_and_domain():
    assert lower_tail_bound(0, 2) == pytest.approx(math.exp(-1.0))
    assert lower_tail_bound(2.0 - 1e-12, 2.0) == pytest.approx(1.0)
    for a, s in [(2.0, 2.0), (3.0, 2.0), (-0.1, 2.0)]:
        with pytest.raises(ValueError):
            lower_tail_bound(a, s)


def test_bound_monotonicity():
    s = 2.0
    uppers = [upper_tail_bound(a, s) for a in np.linspace(2.1, 9.0, 30)]
    assert all(x > y for x, y in zip(uppers, uppers[1:]))
    lowers = [lower_tail_bound(a, s) for a in np.linspace(0.0, 1.9, 30)]
    assert all(x < y for x, y in zip(lowers, lowers[1:]))


def test_pair_bounds_hand_values():
    high, low = tail_bound_pair(10**6, 0.5, 0.1)
    assert high == pytest.approx(math.exp(-0.01 * math.log(10**6)), rel=1e-12)
    assert high == pytest.approx(0.8710, abs=5e-5)
    assert low == pytest.approx(math.exp(-(0.01 / 1.2) * math.log(10**6)), rel=1e-12)
    assert low == pytest.approx(0.8913, abs=5e-5)


def test_pair_bounds_approach_one_for_tiny_eps():
    high, low = tail_bound_pair(10**6, 0.5, 1e-9)
    assert high == pytest.approx(1.0, abs=1e-9)
    assert low == pytest.approx(1.0, abs=1e-9)


def test_pair_bounds_domain():
    with pytest.raises(ValueError):
        tail_bound_high_index(100, 0.5, 0.6)  # eps >= t
    with pytest.raises(ValueError):
        tail_bound_low_index(100, 0.5, 0.5)  # eps >= 1 - t
    with pytest.raises(ValueError):
        tail_bound_high_index(100, 1.2, 0.1)
    with pytest.raises(ValueError):
        tail_bound_low_index(100, 0.0, 0.1)


def test_upper_bound_dominates_exact_tail_hand_case():
    # i=1, n=3: s = 5/6; P(X >= 2) = 1/6
    s = expected_children(1, 3)
    bound = upper_tail_bound(2, s)
    assert bound == pytest.approx(math.exp(-((2 - 5 / 6) ** 2) / 4), rel=1e-12)
    exact = float(degree_tail(1, 3, 1))  # P(X > 1) = P(X >= 2)
    assert bound >= exact
    assert bound == pytest.approx(0.7116, abs=5e-5)


def test_lower_bound_dominates_exact_tail_hand_case():
    # i=9, n=100: s = H_100 - H_9 = 2.358409..; P(X <= 1)
    s = expected_children(9, 100)
    assert s == pytest.approx(sum(1.0 / j for j in range(10, 101)), rel=1e-14)
    assert s == pytest.approx(2.3584, abs=5e-5)
    bound = lower_tail_bound(1, s)
    assert bound == pytest.approx(math.exp(-((s - 1) ** 2) / (2 * s)), rel=1e-12)
    exact_at_most_1 = 1.0 - float(degree_tail(9, 100, 1))
    assert bound >= exact_at_most_1


def test_quadratic_bounds_dominate_exact_tails_on_grid():
    """Zero violations across integer thresholds on both sides."""
    for n in (20, 100, 500, 2000):
        for i in sorted({1, 2, n // 20 or 1, n // 5 or 1, n // 2, n - 1}):
            s = expected_children(i, n)
            top = int(s + 6 * math.sqrt(s) + 3)
            for a in range(int(s) + 1, top):
                if a <= s:
                    continue
                exact = float(degree_tail(i, n, a - 1))  # P(X >= a)
                assert upper_tail_bound(a, s) >= exact - 1e-12, (n, i, a)
                raw = chernoff_upper_raw(a, s)
                assert raw >= exact - 1e-12, (n, i, a)
                assert raw <= upper_tail_bound(a, s) + 1e-12, (n, i, a)
            for a in range(0, int(math.ceil(s)) if s > 0 else 0):
                if a >= s:
                    continue
                exact = 1.0 - float(degree_tail(i, n, a))  # P(X <= a)
                assert lower_tail_bound(a, s) >= exact - 1e-12, (n, i, a)


def test_raw_chernoff_value():
    # beta = 2: (e / 4)^s
    assert chernoff_upper_raw(3.0, 1.5) == pytest.approx((math.e / 4.0) ** 1.5, rel=1e-12)
    with pytest.raises(ValueError):
        chernoff_upper_raw(1.0, 1.5)


def test_tail_report_csv():
    row = TailBoundReport.make(3, 100, 0.5, 0.1, "upper", 1.2, 0.8, 0.1, "exact")
    assert row.margin == pytest.approx(0.7)
    buf = io.StringIO()
    write_tail_reports([row], buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0].startswith("i,n,t,eps,side,s,bound,tail,mode,margin")
    assert lines[1].startswith("3,100,0.5,0.1,upper,")
