import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_points, window_radius
from qcnt.errors import (CompletenessError, InsufficientDataError, InvalidInputError,
                         ResourceError, UnsupportedFieldError)
from qcnt.modelset import (PointCloud, WindowSpec, coding_function, delaunay_stats,
                           enumerate_points, extend_to_ideal, hnf_basis, ideal_spec,
                           lattice_spec, monoid_product, scale_by_unit, sigma_ring,
                           star_product, sumset)
from qcnt.numberfield import make_field

PHI = (1 + math.sqrt(5)) / 2


def coefficient_pairs(cloud):
    return [(e.a, e.b) for e in cloud.elements]


def test_golden_ring_first_points():
    cloud = enumerate_points(sigma_ring(5), 5)
    assert np.allclose(cloud.values, [1, PHI, PHI ** 2, PHI ** 3])
    phi = make_field(5).fu
    assert cloud.elements == [phi ** 0, phi, phi ** 2, phi ** 3]


def test_range_below_least_point_is_empty():
    assert len(enumerate_points(sigma_ring(5), 0.5)) == 0
    assert len(enumerate_points(ideal_spec(5, 3), 1.0)) == 0


def test_lattice_mode():
    cloud = enumerate_points(lattice_spec(), 10)
    assert cloud.values.tolist() == list(range(1, 11))
    assert delaunay_stats(cloud) == (1.0, 1.0)
    signed = enumerate_points(lattice_spec(0.5), 2, signed=True)
    assert signed.values.tolist() == [-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2]


def test_rejects_nonpositive_range():
    with pytest.raises(InvalidInputError):
        enumerate_points(sigma_ring(5), 0)


def test_point_cap():
    with pytest.raises(ResourceError):
        enumerate_points(ideal_spec(5, -20), 1e4, point_cap=1000)


def test_delaunay_stats_golden_ring(golden_ring):
    # gaps of the Fibonacci chain are 1/phi and phi
    r_min, gap_max = delaunay_stats(golden_ring)
    assert r_min == pytest.approx(1 / PHI, rel=1e-9)
    assert gap_max == pytest.approx(PHI, rel=1e-9)
    wider = enumerate_points(sigma_ring(5), 2e4)
    assert delaunay_stats(wider)[1] == gap_max
    assert delaunay_stats(wider)[0] > 0


def test_delaunay_stats_needs_two_points():
    with pytest.raises(InsufficientDataError):
        delaunay_stats(enumerate_points(sigma_ring(5), 1.2))


def test_removed_point_doubles_gap():
    cloud = enumerate_points(lattice_spec(), 20)
    keep = cloud.values != 10
    holed = PointCloud(cloud.values[keep], cloud.conj_values[keep], cloud.coords[keep],
                       None, 20, False, lattice_step=1.0)
    assert delaunay_stats(holed)[1] == 2 * delaunay_stats(cloud)[1]


def test_cloud_values_strictly_increasing_and_distinct(golden_ring):
    assert np.all(np.diff(golden_ring.values) > 0)
    assert len(golden_ring.element_set()) == len(golden_ring)


def test_csv_columns():
    text = enumerate_points(sigma_ring(5), 3).to_csv()
    lines = text.splitlines()
    assert lines[0] == "a,b,value,conj_value"
    assert lines[1] == "1,0,1,1"
    assert lines[2].startswith("0,1,1.6180339887498949,")


def test_density_close_to_cut_and_project_value(golden_ring):
    spec = sigma_ring(5)
    assert spec.density == pytest.approx(2 / math.sqrt(5))
    assert golden_ring.density_est == pytest.approx(spec.density, rel=0.05)
    other = enumerate_points(ideal_spec(2, Fraction(1, 2)), 1e4)
    assert other.density_est == pytest.approx(ideal_spec(2, Fraction(1, 2)).density, rel=0.05)


@pytest.mark.parametrize("d,x,strict", [(5, 0, False), (5, 2, True), (2, Fraction(1, 3), True),
                                        (3, 1, False), (10, Fraction(3, 2), True),
                                        (7, 0, True), (13, -1, False)])
def test_enumeration_matches_brute_force(d, x, strict):
    F = make_field(d)
    spec = ideal_spec(d, x, strict)
    radius = window_radius(d, (F.fu.a, F.fu.b), Fraction(x))
    basis = [(e.a, e.b) for e in spec.ideal_basis]
    expected = brute_force_points(d, basis, radius, strict, 25)
    assert coefficient_pairs(enumerate_points(spec, 25)) == expected


def test_nonprincipal_ideal_matches_brute_force():
    F = make_field(10)
    spec = ideal_spec(10, 0, strict=False, basis=(F.element(2), F.omega))
    basis = [(e.a, e.b) for e in spec.ideal_basis]
    expected = brute_force_points(10, basis, 1, False, 40)
    assert coefficient_pairs(enumerate_points(spec, 40)) == expected


def test_boundary_strictness_differs_exactly():
    # |phi'|^2 is attained by phi^-2 conjugates, so the closed ideal is larger
    open_ = enumerate_points(ideal_spec(5, 2, strict=True), 100).element_set()
    closed = enumerate_points(ideal_spec(5, 2, strict=False), 100).element_set()
    assert open_ < closed
    phi = make_field(5).fu
    assert phi ** 2 in closed and phi ** 2 not in open_


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5, 6, 10]), st.fractions(min_value=-1, max_value=3, max_denominator=6),
       st.booleans())
def test_enumeration_oracle_property(d, x, strict):
    F = make_field(d)
    spec = ideal_spec(d, x, strict)
    radius = window_radius(d, (F.fu.a, F.fu.b), x)
    basis = [(e.a, e.b) for e in spec.ideal_basis]
    assert coefficient_pairs(enumerate_points(spec, 12)) == \
        brute_force_points(d, basis, radius, strict, 12)


def test_pv_characterization(golden_ring):
    for alpha, conj in zip(golden_ring.elements, golden_ring.conj_values):
        if alpha > 1:
            assert abs(alpha.conj()) <= 1
        elif alpha == 1:
            assert alpha.norm() == 1
    assert golden_ring.values[0] == 1.0


def test_monoid_product_identity_and_closure():
    F = make_field(5)
    ring = enumerate_points(sigma_ring(5), 1000)
    one = PointCloud.from_elements([F.one], F, 1000, False)
    assert monoid_product(ring, one, 100).element_set() == ring.restrict(100).element_set()
    prod = monoid_product(ring, ring, 100)
    assert F.fu ** 3 in prod.element_set()
    assert prod.element_set() <= enumerate_points(sigma_ring(5), 100).element_set()


def test_monoid_product_needs_covering_inputs():
    ring = enumerate_points(sigma_ring(5), 50)
    with pytest.raises(CompletenessError):
        monoid_product(ring, ring, 100)


@pytest.mark.parametrize("x,y", [(0, 1), (Fraction(1, 2), Fraction(3, 4)), (2, -1)])
def test_ideal_product_inclusion(x, y):
    R = 60
    a = enumerate_points(ideal_spec(5, x), 4000)
    b = enumerate_points(ideal_spec(5, y), 4000)
    prod = monoid_product(a, b, R).element_set()
    assert prod <= enumerate_points(ideal_spec(5, x + y), R).element_set()


def test_unit_scaling_identity():
    spec = ideal_spec(5, 0)
    assert scale_by_unit(spec, 0) == spec
    back = scale_by_unit(scale_by_unit(spec, 1), -1)
    assert enumerate_points(back, 100).element_set() == enumerate_points(spec, 100).element_set()


@pytest.mark.parametrize("x", [0, Fraction(1, 3), 2])
def test_unit_times_ideal(x):
    phi = make_field(5).fu
    shifted = enumerate_points(ideal_spec(5, x + 1), 100).element_set()
    scaled = enumerate_points(scale_by_unit(ideal_spec(5, x), 1), 100).element_set()
    assert scaled == shifted
    assert {phi * e for e in enumerate_points(ideal_spec(5, x), 100 / float(phi)).elements} == shifted


@pytest.mark.parametrize("d,x", [(5, Fraction(1, 2)), (2, 1), (3, Fraction(-2, 3))])
def test_negative_exponent_is_inverse_unit(d, x):
    F = make_field(d)
    a = enumerate_points(ideal_spec(d, -x), 80).element_set()
    b = enumerate_points(ideal_spec(d, x, unit=F.fu.inverse()), 80).element_set()
    assert a == b


def test_star_product_unit_and_exponents():
    F = make_field(5)
    a = ideal_spec(5, Fraction(1, 3))
    unit = star_product(a, sigma_ring(5))
    assert unit.ideal_basis == a.ideal_basis
    assert unit.window.bound == pytest.approx(a.window.bound)
    c = star_product(ideal_spec(5, 1), ideal_spec(5, 2))
    assert c.window.bound == pytest.approx(ideal_spec(5, 3).window.bound)
    assert c.ideal_basis == (F.one, F.omega)
    assert c.window.strict


def test_star_product_of_principal_ideals():
    F = make_field(10)
    alpha, beta = F.element(3, 1), F.element(1, 2)
    P = ideal_spec(10, 0, basis=(F.element(2), F.omega))
    a = P.scaled(alpha)
    b = ideal_spec(10, 0).scaled(beta)
    gens = [alpha * beta * x * y for x in P.ideal_basis for y in (F.one, F.omega)]
    assert star_product(a, b).ideal_basis == hnf_basis(gens)


def test_sumset_with_zero():
    F = make_field(5)
    ring = enumerate_points(sigma_ring(5), 60)
    zero = PointCloud.from_elements([F.element(0)], F, 60, True)
    assert sumset(ring, zero, 50).element_set() == ring.restrict(50).element_set()


def test_sumset_is_for_field_clouds():
    z = enumerate_points(lattice_spec(), 20)
    with pytest.raises(InvalidInputError):
        sumset(z, z, 10)


def test_golden_sumset_law():
    # a_2 + a_2 = a_(2 - log_phi 2): the window doubles
    F = make_field(5)
    a2 = enumerate_points(ideal_spec(5, 2), 200, signed=True)
    total = sumset(a2, a2, 50).element_set()
    window = WindowSpec.from_exponent(F.fu, 2, strict=True, factor=2)
    target = replace(ideal_spec(5, 2), window=window)
    assert total == enumerate_points(target, 50).element_set()


def test_sumset_needs_covering_inputs():
    ring = enumerate_points(sigma_ring(5), 20)
    with pytest.raises(CompletenessError):
        sumset(ring, ring, 50)


def test_coding_function_examples():
    assert coding_function(ideal_spec(5, 2, strict=True), 4) == [0, 1, 1, 0]
    assert coding_function(ideal_spec(5, 2, strict=False), 1) == [1]
    assert coding_function(ideal_spec(5, 0), 30) == [1] * 30
    assert coding_function(ideal_spec(2, 0), 30) == [1] * 30


def test_coding_function_matches_nearest_integer_distance():
    bits = coding_function(ideal_spec(5, 3, strict=True), 200)
    for a, bit in enumerate(bits, start=1):
        dist = abs(a * PHI - round(a * PHI))
        assert bit == int(dist < PHI ** -3)


def test_coding_function_rejects_index_fields():
    with pytest.raises(UnsupportedFieldError):
        coding_function(ideal_spec(7, 1), 5)


def test_extension_map():
    F = make_field(5)
    assert extend_to_ideal(sigma_ring(5)) == (F.one, F.omega)
    gamma = F.element(2, 1)
    assert extend_to_ideal(sigma_ring(5).scaled(gamma)) == hnf_basis([gamma, gamma * F.omega])
    K = make_field(10)
    P = ideal_spec(10, 0, basis=(K.element(2), K.omega))
    assert extend_to_ideal(P) == hnf_basis([K.element(2), K.omega])
    assert extend_to_ideal(P) != (K.one, K.omega)


def test_hnf_is_canonical():
    F = make_field(5)
    a = hnf_basis([F.element(2), F.element(0, 2)])
    b = hnf_basis([F.element(2, 2), F.element(0, -2), F.element(4, 6)])
    assert a == b


def test_window_describe_is_exact():
    desc = ideal_spec(5, Fraction(1, 3)).window.describe()
    assert desc["strict"] is True
    assert "1/3" in str(desc)
