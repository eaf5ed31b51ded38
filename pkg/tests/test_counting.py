import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tamari_calculus import counting
from tamari_calculus.counting import (
    SeriesLX,
    phi_series,
    closed_formula,
    count_table,
    difference_quotient,
    l_equation_residual,
    phi_equation_residual,
    focused_count_oracle,
    intervals_count,
    pmul,
    solve_series,
)
from tamari_calculus.tamari import LimitExceeded

L1 = (1, 1, 3, 13, 68, 399, 2530, 16965)

# coefficients of z^0..z^5 in R, as polynomials in x (index = power of x)
R_GOLDEN = (
    (0, 1),
    (0, 0, 1),
    (0, 0, 1, 2),
    (0, 0, 3, 5, 5),
    (0, 0, 13, 20, 21, 14),
    (0, 0, 68, 100, 105, 84, 42),
)


def test_r_golden_through_z5():
    _, r = solve_series(5)
    assert r.by_z_degree == R_GOLDEN


def test_r_low_degrees():
    _, r = solve_series(2)
    assert r.format() == "x + x^2z + (x^2 + 2x^3)z^2"


def test_l1_through_z7():
    l, r = solve_series(7)
    assert l.x_slice(1) == L1
    assert r.at_x1() == L1


@pytest.mark.parametrize("n, count", [(0, 1), (3, 13), (6, 2530), (7, 16965)])
def test_intervals_count(n, count):
    assert intervals_count(n) == count


@pytest.mark.parametrize("n, value", [(0, 1), (1, 1), (3, 13), (4, 68), (9, 857956), (10, 6369883)])
def test_closed_formula(n, value):
    assert closed_formula(n) == value


def test_series_matches_closed_formula():
    counts = counting.interval_counts(30)
    assert counts == tuple(closed_formula(n) for n in range(31))


@pytest.mark.parametrize("n, value", [(2, 3), (3, 13), (5, 399)])
def test_focused_count_oracle(n, value):
    assert focused_count_oracle(n) == value


def test_focused_count_limit():
    with pytest.raises(LimitExceeded):
        focused_count_oracle(7)


def test_series_invariants():
    l, r = solve_series(15)
    assert r[0] == (0, 1)
    for n in range(1, 16):
        p = r[n]
        assert len(p) - 1 <= n + 1
        assert all(c == 0 for c in p[:2]) and p[2] > 0
        assert all(c >= 0 for c in p)
    assert l_equation_residual(l, r).is_zero()


def test_phi():
    phi = phi_series(10)
    assert phi[0] == ()
    assert phi[1] == (0, 0, 1)
    assert phi_equation_residual(phi).is_zero()


def test_residual_detects_perturbation():
    phi = phi_series(6)
    coeffs = list(phi.by_z_degree)
    coeffs[4] = coeffs[4][:-1] + (coeffs[4][-1] + 1,)
    assert not phi_equation_residual(SeriesLX(tuple(coeffs))).is_zero()


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_difference_quotient(p):
    p = tuple(p)
    dq = difference_quotient(counting.trim(p))
    # (x - 1) * dq + p(1) == p
    back = counting.padd(pmul((-1, 1), dq), (sum(p),))
    assert back == counting.trim(p)


def test_pshift_requires_exactness():
    assert counting.pshift((0, 0, 3), -2) == (3,)
    with pytest.raises(ArithmeticError):
        counting.pshift((1, 2), -1)


def test_count_table():
    rows = count_table(8, brute_limit=5)
    assert [r["series"] for r in rows] == list(L1) + [118668]
    assert all(r["match"] for r in rows)
    assert rows[5]["bruteforce"] == 399 and rows[6]["bruteforce"] is None


def test_triangle_json():
    data = json.loads(counting.triangle_json(5))
    assert [tuple(p) for p in data["R"]] == list(R_GOLDEN)


def test_solve_series_rejects_negative():
    with pytest.raises(ValueError):
        solve_series(-1)
