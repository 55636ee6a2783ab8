import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcnt.errors import InvalidInputError
from qcnt.numberfield import FieldElement, is_squarefree, make_field

FIELDS = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 31, 41, 43, 46, 94]


def pell_oracle(d, b_max=1000):
    """Smallest unit > 1 of O_K by scanning the omega-coefficient b."""
    half = d % 4 == 1
    best = None
    for b in range(1, b_max + 1):
        for sign in (1, -1):
            # x + b*w has norm x^2 + t x b - n b^2 with w^2 = t w + n
            t, n = (1, (d - 1) // 4) if half else (0, d)
            disc = (t * b) ** 2 + 4 * (n * b * b + sign)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for num in (-t * b + r, -t * b - r):
                if num % 2:
                    continue
                u = FieldElement(d, num // 2, b)
                if u > 1 and (best is None or u < best):
                    best = u
        if best is not None:
            return best
    return None


def test_golden_field():
    F = make_field(5)
    assert F.fu == FieldElement(5, 0, 1)
    assert F.fu_norm == -1 and F.disc == 5 and F.omega_kind == "half"
    assert F.zt_equals_ok


def test_silver_field():
    F = make_field(2)
    assert F.fu == FieldElement(2, 1, 1)
    assert F.fu_norm == -1 and F.disc == 8


def test_d3_unit_has_norm_plus_one():
    F = make_field(3)
    assert F.fu == FieldElement(3, 2, 1)
    assert F.fu_norm == 1 and F.disc == 12


@pytest.mark.parametrize("d", [d for d in FIELDS if d not in (46, 94)])
def test_unit_matches_pell_oracle(d):
    F = make_field(d)
    assert F.fu == pell_oracle(d)


@pytest.mark.parametrize("d", FIELDS)
def test_unit_is_pv(d):
    F = make_field(d)
    assert F.fu > 1
    assert F.fu * F.fu.conj() == F.fu_norm
    assert abs(F.fu.conj()) < 1
    assert F.disc == (d if d % 4 == 1 else 4 * d)


def test_d7_index_is_not_one():
    # 8 + 3 sqrt 7: Z[theta] has index 3 in O_K
    F = make_field(7)
    assert F.fu == FieldElement(7, 8, 3)
    assert not F.zt_equals_ok


@pytest.mark.parametrize("d", [0, 1, 4, 8, 12, 18, -5])
def test_rejects_bad_d(d):
    with pytest.raises(InvalidInputError):
        make_field(d)


def test_squarefree_helper():
    assert [n for n in range(2, 20) if is_squarefree(n)] == [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]


def test_conjugation_examples():
    phi = make_field(5).fu
    assert FieldElement(5, 3).conj() == 3
    assert phi.conj() == 1 - phi
    assert abs(phi.conj_float() + 0.6180339887498948482) <= 4 * math.ulp(0.618)


def test_embedding_examples():
    getcontext().prec = 30
    r5 = Decimal(5).sqrt()
    phi = make_field(5).fu
    silver = make_field(2).fu
    r2 = Decimal(2).sqrt()
    cases = [(phi, (1 + r5) / 2, (1 - r5) / 2), (silver, 1 + r2, 1 - r2)]
    for e, hi, lo in cases:
        got = e.embed()
        for value, exact in zip(got, (hi, lo)):
            assert abs(Decimal(value) - exact) <= 4 * Decimal(math.ulp(float(exact)))
    assert FieldElement(5, 1).embed() == (1.0, 1.0)


def test_ring_identities():
    phi = make_field(5).fu
    assert phi * phi == phi + 1
    assert FieldElement(5, Fraction(3, 7)).trace() == Fraction(6, 7)
    assert (phi / phi) == 1
    with pytest.raises(ZeroDivisionError):
        phi / FieldElement(5)


def test_sign_decided_exactly_near_zero():
    # 9369319 - 4189961 sqrt 5 is about 2.4e-8 > 0, and its negative is below zero
    d = 5
    e = make_field(d).from_surd(9369319, -4189961)
    assert e.sign() == 1
    assert (-e).sign() == -1
    big = make_field(d).fu ** 60
    tiny = big.conj()
    assert abs(tiny) > 0
    assert tiny.sign() == 1 and float(abs(tiny)) < 1e-12


elements = st.builds(
    lambda d, a, b: FieldElement(d, a, b),
    st.sampled_from([2, 3, 5, 7, 10, 13]),
    st.fractions(min_value=-50, max_value=50, max_denominator=30),
    st.fractions(min_value=-50, max_value=50, max_denominator=30),
)


@settings(max_examples=200, deadline=None)
@given(elements)
def test_conj_is_an_involution(e):
    assert e.conj().conj() == e


@settings(max_examples=200, deadline=None)
@given(elements)
def test_norm_is_product_of_embeddings(e):
    assert e * e.conj() == e.norm()
    assert (e + e.conj()) == e.trace()
    s1, s2 = e.embed()
    assert s1 * s2 == pytest.approx(float(e.norm()), rel=1e-12, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_embedding_is_a_ring_homomorphism(data):
    d = data.draw(st.sampled_from([2, 3, 5, 7, 10]))
    x = FieldElement(d, data.draw(st.integers(-1000, 1000)), data.draw(st.integers(-1000, 1000)))
    y = FieldElement(d, data.draw(st.integers(-1000, 1000)), data.draw(st.integers(-1000, 1000)))
    for exact, approx in (((x + y), float(x) + float(y)), ((x * y), float(x) * float(y))):
        scale = abs(float(x)) * abs(float(y)) + abs(float(x)) + abs(float(y)) + 1
        assert abs(float(exact) - approx) <= 8 * math.ulp(scale)


@settings(max_examples=100, deadline=None)
@given(elements, elements)
def test_order_agrees_with_floats_away_from_ties(e, f):
    if e.d != f.d:
        f = FieldElement(e.d, f.a, f.b)
    if abs(float(e) - float(f)) > 1e-9:
        assert (e < f) == (float(e) < float(f))
