import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcnt.errors import CompletenessError, InvalidInputError, UnsupportedFieldError
from qcnt.modelset import PointCloud, enumerate_points, ideal_spec, lattice_spec, sigma_ring
from qcnt.modular import (IDEAL_PREFACTOR, NORMALIZER, QUANTUM_PREFACTOR, PowerEps,
                          hausdorff_window, j_eps, j_invariant, jqt, lambda_eps,
                          pink_ring_form, pink_scaled_set, pink_set_check, pink_value_check,
                          zeta_eps)
from qcnt.numberfield import make_field

PHI = make_field(5).fu
FIB = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765,
       10946, 17711, 28657, 46368, 75025}


def nearest_distance_oracle(n, theta):
    mpmath.mp.dps = 50
    v = n * theta
    return abs(v - mpmath.nint(v))


def test_constants():
    assert IDEAL_PREFACTOR == 12 ** 3
    assert QUANTUM_PREFACTOR == 12
    assert NORMALIZER == Fraction(49, 40)


def test_integers_are_the_pole():
    val = j_invariant(enumerate_points(lattice_spec(), 1e5))
    assert abs(val.J - 40 / 49) < 1e-8
    assert val.normalized == pytest.approx(1.0, abs=1e-8)
    assert val.j_infinite and val.to_dict()["j"] is None


def test_closed_form_of_the_lattice_value():
    mpmath.mp.dps = 30
    exact = (mpmath.pi ** 6 / 945) ** 2 / (mpmath.pi ** 4 / 90) ** 3
    assert abs(exact - mpmath.mpf(40) / 49) < mpmath.mpf(10) ** -25


def test_golden_ring_is_finite():
    val = j_invariant(enumerate_points(sigma_ring(5), 1e4))
    assert not val.j_infinite
    assert val.j == pytest.approx(1728 / (1 - 49 / 40 * val.J))


def test_scale_invariance_by_two():
    base = enumerate_points(ideal_spec(5, 0), 1e4)
    doubled = enumerate_points(ideal_spec(5, 0).scaled(2), 2e4)
    assert {2 * e for e in base.elements} == doubled.element_set()
    assert abs(j_invariant(doubled).J - j_invariant(base).J) < 1e-8


@settings(max_examples=10, deadline=None)
@given(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=7))
def test_scale_invariance_by_rationals(lam):
    base = enumerate_points(ideal_spec(5, 0), 2000)
    scaled = enumerate_points(ideal_spec(5, 0).scaled(lam), 2000 * float(lam))
    assert abs(j_invariant(scaled).J - j_invariant(base).J) < 1e-8


def test_unit_shift_has_same_value():
    a = j_invariant(enumerate_points(ideal_spec(5, Fraction(1, 4)), 1e4)).J
    b = j_invariant(enumerate_points(ideal_spec(5, Fraction(5, 4)), 1e4)).J
    assert abs(a - b) < 1e-9


def test_empty_cloud_value():
    val = j_invariant(enumerate_points(sigma_ring(5), 0.5))
    assert val.J == 0 and val.j == 1728


def test_lambda_eps_example():
    assert list(lambda_eps(PHI, 0.2, 8)) == [3, 5, 8]
    assert list(lambda_eps(float(PHI), 0.2, 8)) == [3, 5, 8]


@pytest.mark.parametrize("eps", [0.5, 0.7, 0.0, -0.1])
def test_lambda_eps_rejects_degenerate_thresholds(eps):
    with pytest.raises(InvalidInputError):
        lambda_eps(PHI, eps, 10)


@pytest.mark.parametrize("eps", [0.3, 0.09, Fraction(1, 17), 0.001])
def test_lambda_eps_against_oracle(eps):
    mpmath.mp.dps = 50
    phi = (1 + mpmath.sqrt(5)) / 2
    bound = mpmath.mpf(eps.numerator) / eps.denominator if isinstance(eps, Fraction) else mpmath.mpf(eps)
    expected = [n for n in range(1, 3001) if nearest_distance_oracle(n, phi) < bound]
    assert list(lambda_eps(PHI, eps, 3000)) == expected


def test_lambda_eps_power_boundaries_are_exact():
    # with 1, 2, 3, 5, ... indexed from 0, ||fib[i] phi|| = phi^-(i+2) exactly
    fib = sorted(FIB)
    for k in range(3, 12):
        eps = PowerEps(PHI, -k)
        members = set(lambda_eps(PHI, eps, 500).tolist())
        assert fib[k - 2] not in members
        assert fib[k - 1] in members


@settings(max_examples=40, deadline=None)
@given(st.floats(0.001, 0.49))
def test_least_member_is_fibonacci(eps):
    ns = lambda_eps(PHI, eps, 100000)
    assert int(ns[0]) in FIB


@settings(max_examples=40, deadline=None)
@given(st.floats(0.001, 0.49), st.floats(0.01, 1.0))
def test_lambda_eps_nesting(eps, shrink):
    small = set(lambda_eps(PHI, eps * shrink, 5000).tolist())
    big = set(lambda_eps(PHI, eps, 5000).tolist())
    assert small <= big


def test_zeta_eps_monotone():
    a = lambda_eps(PHI, 0.1, 10000)
    b = lambda_eps(PHI, 0.05, 10000)
    for s in (4.0, 6.0):
        assert zeta_eps(b, s) <= zeta_eps(a, s)


def test_j_eps_golden_regression():
    val = j_eps(PHI, PowerEps(PHI, -8), 100000)
    assert val.value.J > 0 and not val.value.j_infinite
    assert val.value.prefactor == 12
    # 30-digit oracle over the same 10^5 integers
    mpmath.mp.dps = 30
    phi = (1 + mpmath.sqrt(5)) / 2
    eps = phi ** -8
    ns = [n for n in range(1, 100001) if nearest_distance_oracle(n, phi) < eps]
    z4 = mpmath.fsum(mpmath.mpf(n) ** -4 for n in ns)
    z6 = mpmath.fsum(mpmath.mpf(n) ** -6 for n in ns)
    assert abs(val.value.J - float(z6 ** 2 / z4 ** 3)) < 1e-12


def test_empty_diophantine_set():
    ns = lambda_eps(PHI, 0.3, 1)
    assert len(ns) == 0
    assert zeta_eps(ns, 4.0) == 0
    # an empty truncation says nothing about the members beyond n_max
    with pytest.raises(CompletenessError):
        j_eps(PHI, 0.3, 1)
    with pytest.raises(CompletenessError):
        j_eps(PHI, 1e-9, 100)


def test_jqt_sequence():
    rep = jqt(PHI, [PowerEps(PHI, -m) for m in range(3, 6)], 100000)
    assert len(rep.j_values) == 3
    assert rep.lambda_counts == sorted(rep.lambda_counts, reverse=True)
    with pytest.raises(InvalidInputError):
        jqt(PHI, [0.1, 0.2], 1000)
    with pytest.raises(InvalidInputError):
        jqt(PHI, [], 1000)


def test_hausdorff_window():
    a = np.array([1.0, 2.0, 3.0])
    b = np.array([1.1, 2.0, 3.5])
    assert hausdorff_window(a, b, 0, 10) == pytest.approx(0.5)
    assert hausdorff_window(a, a, 0, 10) == 0


@pytest.mark.parametrize("x,m", [(0, 3), (Fraction(1, 4), 5), (Fraction(1, 2), 8)])
def test_scaled_set_equals_ring_form(x, m):
    a = pink_scaled_set(5, x, m, 50)
    b = pink_ring_form(5, x, m, 50)
    assert len(a) == len(b)
    assert np.allclose(a, b, rtol=0, atol=1e-9)


def test_pink_golden_distances():
    rep = pink_set_check(5, 0, 8)
    dist = rep.set_distances
    assert dist[0] is None and dist[1] is None
    assert 0 < dist[2] <= 50
    for r in rep.ratios[2:]:
        assert abs(r - float(PHI) ** -2) <= 0.2 * float(PHI) ** -2
    for m, count in zip(rep.m_values, rep.counts):
        if m >= 4:
            assert count == rep.target_count


@pytest.mark.parametrize("x", [0, Fraction(1, 4), Fraction(1, 2)])
def test_pink_contraction(x):
    rep = pink_set_check(5, x, 8, m_min=3)
    for a, b in zip(rep.set_distances, rep.set_distances[1:]):
        assert b <= 0.7 * a


def test_pink_rejects_bad_inputs():
    with pytest.raises(UnsupportedFieldError):
        pink_set_check(7, 0, 5)
    with pytest.raises(InvalidInputError):
        pink_set_check(5, Fraction(3, 2), 5)
    with pytest.raises(InvalidInputError):
        pink_set_check(5, 0, 2, m_min=3)


def test_pink_value_reports_both_targets():
    rep = pink_value_check(5, 0, 6, m_min=6)
    assert rep.target is not None and rep.target_closed is not None
    assert rep.target.J != rep.target_closed.J
    assert rep.m_values == [6]


def test_continuity_from_the_right():
    x = Fraction(3, 10)
    base = j_invariant(enumerate_points(ideal_spec(5, x), 1e4)).J
    gaps = []
    for k in range(5):
        xr = x + Fraction(1, 10 * 2 ** k)
        gaps.append(abs(j_invariant(enumerate_points(ideal_spec(5, xr), 1e4)).J - base))
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < gaps[0] / 4
