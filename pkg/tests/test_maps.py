"""Branch-correct half-plane maps, capacities, and the geodesic zipper."""

import cmath
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from slekit.maps import (
    Composition,
    MapDomainError,
    ZipperError,
    apply,
    compose,
    derivative,
    hcap_from_expansion,
    schwarzian,
    scale_map,
    shift_map,
    slit_avoidance_probability,
    slit_hitting_probability,
    tilted_slit_map,
    vertical_slit_map,
    zipper_map,
)

PHI = vertical_slit_map(1.0, 2.0 ** -0.5)

interior_points = st.builds(
    complex,
    st.floats(min_value=-4.0, max_value=4.0),
    st.floats(min_value=0.3, max_value=4.0),
)


class TestVerticalSlit:
    def test_normalization_at_origin(self):
        assert PHI.apply(0.0) == 0

    def test_offset_and_asymptotic_constant(self):
        assert PHI.offset == pytest.approx(math.sqrt(2.0), abs=1e-15)
        assert PHI.asymptotic_constant \
            == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-15)

    def test_tip_folds_to_offset(self):
        # the tip is a square-root branch point, so its floating-point
        # image resolves only to about sqrt(ulp)
        assert abs(PHI.apply(PHI.tip) - PHI.offset) < 1e-7

    def test_slit_interior_rejected(self):
        with pytest.raises(MapDomainError):
            PHI.apply(complex(1.0, 0.5))

    def test_derivatives_at_origin(self):
        d1, d2, d3 = PHI.derivatives(0.0)
        assert d1 == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-14)
        assert d2 == pytest.approx(-1.0 / (2.0 * math.sqrt(2.0)), abs=1e-14)
        assert d3 == pytest.approx(-3.0 / (4.0 * math.sqrt(2.0)), abs=1e-14)

    def test_schwarzian_at_origin(self):
        assert schwarzian(PHI, 0.0) == pytest.approx(-1.125, abs=1e-12)

    def test_hydrodynamic_normalization(self):
        z = complex(0.0, 1e6)
        assert abs(PHI.apply(z) / z - 1.0) < 1e-5

    def test_boundary_stays_real_and_ordered(self):
        imgs = [PHI.apply(complex(x / 10.0, 0.0)) for x in range(-50, 51)]
        assert all(abs(w.imag) < 1e-9 for w in imgs)
        reals = [w.real for w in imgs]
        assert reals == sorted(reals)

    @given(interior_points)
    @settings(max_examples=60, deadline=None)
    def test_inverse_roundtrip(self, z):
        assume(abs(z.real - 1.0) > 1e-3 or z.imag > 1.1)
        w = PHI.apply(z)
        assert w.imag > 0.0
        assert abs(PHI.apply_inverse(w) - z) < 1e-10 * max(1.0, abs(z))


class TestTiltedSlit:
    def test_base_points_map_to_origin(self):
        # both bases are power-law corners, so a 1e-12 offset resolves
        # their images only to roughly (1e-12)^alpha
        ts = tilted_slit_map(0.3, 0.8)
        for x in (-0.8, 0.3 * 0.8 / 0.7):
            w = ts.apply(complex(x + math.copysign(1e-12, x), 1e-12))
            assert abs(w) < 1e-3

    def test_interval_between_bases_maps_onto_the_slit(self):
        ts = tilted_slit_map(0.3, 0.8)
        w = ts.apply(complex(0.05, 1e-12))
        assert w.imag > 1e-3

    def test_outer_boundary_real(self):
        ts = tilted_slit_map(0.3, 0.8)
        for x in (-5.0, -1.2, 0.5, 4.0):
            assert abs(ts.apply(complex(x, 0.0)).imag) < 1e-9

    @given(interior_points)
    @settings(max_examples=40, deadline=None)
    def test_inverse_roundtrip(self, z):
        ts = tilted_slit_map(0.3, 0.8)
        w = ts.apply(z)
        assert abs(ts.apply_inverse(w) - z) < 1e-10 * max(1.0, abs(z))


class TestDerivativesAndSchwarzian:
    def stencils(self, m, z, h=0.005):
        f = m.apply
        fd1 = (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h)
               + f(z - 2 * h)) / (12 * h)
        fd2 = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z)
               + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)
        fd3 = (f(z - 3 * h) / 8 - f(z - 2 * h) + f(z - h) * 13 / 8
               - f(z + h) * 13 / 8 + f(z + 2 * h)
               - f(z + 3 * h) / 8) / h ** 3
        return fd1, fd2, fd3

    def test_closed_forms_match_stencils(self):
        for m in (PHI, tilted_slit_map(0.25, 1.1)):
            for z in (0.4 + 0.8j, -1.3 + 0.5j, 2.0 + 2.0j):
                got = m.derivatives(z)
                ref = self.stencils(m, z)
                for g, r in zip(got, ref):
                    assert abs(g - r) <= 1e-6 * max(1.0, abs(r))

    def test_derivative_helper_orders(self):
        z = 0.7 + 1.1j
        d = PHI.derivatives(z)
        for order in (1, 2, 3):
            assert derivative(PHI, z, order) == d[order - 1]
        with pytest.raises(ValueError):
            derivative(PHI, z, 4)

    def test_schwarzian_cocycle(self):
        f = PHI
        g = tilted_slit_map(0.3, 0.8)
        fg = compose([f, g])
        for z in (0.2 + 1.0j, -0.9 + 0.7j):
            f1 = f.derivatives(z)[0]
            lhs = schwarzian(fg, z)
            rhs = schwarzian(g, f.apply(z)) * f1 * f1 + schwarzian(f, z)
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs))

    def test_moebius_is_schwarzian_free(self):
        m = compose([shift_map(1.5), scale_map(2.0)])
        assert abs(schwarzian(m, 0.3 + 0.4j)) < 1e-12


class TestCapacity:
    def test_single_slit_capacity(self):
        assert hcap_from_expansion(PHI) == pytest.approx(0.5, abs=1e-9)

    def test_additive_under_composition(self):
        two = compose([PHI, vertical_slit_map(-0.7, 0.5)])
        assert hcap_from_expansion(two) == pytest.approx(0.75, abs=1e-9)

    def test_moebius_carries_none(self):
        assert hcap_from_expansion(shift_map(2.5)) == pytest.approx(0.0,
                                                                    abs=1e-9)

    def test_composition_sums_asymptotic_constants(self):
        c = compose([shift_map(2.5), PHI])
        assert c.asymptotic_constant \
            == pytest.approx(2.5 + PHI.asymptotic_constant, abs=1e-12)


class TestClosedFormProbabilities:
    def test_avoidance_value(self):
        assert slit_avoidance_probability(1.0, 2.0 ** -0.5, 0.625) \
            == pytest.approx(2.0 ** (-5.0 / 16.0), abs=1e-15)

    def test_hitting_complements_avoidance(self):
        for x, eps in ((2.0, 0.5), (2.0, 0.25), (1.0, 2.0 ** -0.5)):
            assert slit_hitting_probability(x, eps, 0.625) \
                == pytest.approx(
                    1.0 - slit_avoidance_probability(x, eps, 0.625),
                    abs=1e-15)

    def test_halving_ratio(self):
        full = slit_hitting_probability(2.0, 0.5, 0.625)
        half = slit_hitting_probability(2.0, 0.25, 0.625)
        assert full / half == pytest.approx(3.7761585091696226, abs=1e-12)


class TestZipper:
    def test_matches_closed_form_on_vertical_polyline(self):
        x, eps = 1.0, 2.0 ** -0.5
        ell = eps * math.sqrt(2.0)
        poly = [complex(x, 0.0)] + [x + 1j * ell * k / 40
                                    for k in range(1, 41)]
        zz = zipper_map(poly)
        for z in (0.5 + 1.0j, -2.0 + 0.8j, 3.0 + 2.5j):
            ref = PHI.apply(z) - PHI.asymptotic_constant
            assert abs(zz.apply(z) - ref) < 1e-10

    def test_roundtrip_through_kinked_polyline(self):
        zz = zipper_map([0.5, 0.6 + 0.4j, 0.55 + 0.8j])
        for z in (1.0 + 0.5j, -0.3 + 1.2j):
            assert abs(zz.apply_inverse(zz.apply(z)) - z) < 1e-10

    def test_skips_zero_length_steps(self):
        z = zipper_map([0.5, 0.5])
        assert z.apply(1j) == 1j

    def test_rejects_vertex_outside_half_plane(self):
        # after unzipping the first segment the second vertex lands on or
        # below the real axis
        with pytest.raises(ZipperError):
            zipper_map([0.0, 1.0j, 0.5j])

    def test_rejects_complex_base(self):
        with pytest.raises(ValueError):
            zipper_map([1.0j])


class TestCompositionStructure:
    def test_apply_order_is_first_to_last(self):
        c = compose([shift_map(1.0), scale_map(2.0)])
        assert c.apply(1.0 + 1.0j) == pytest.approx(4.0 + 2.0j, abs=1e-15)

    def test_flattens_nested_compositions(self):
        inner = compose([shift_map(1.0), scale_map(2.0)])
        outer = compose([inner, shift_map(-3.0)])
        assert isinstance(outer, Composition)
        assert all(not isinstance(m, Composition) for m in outer.maps)

    def test_apply_helper_delegates(self):
        z = 0.1 + 0.9j
        assert apply(PHI, z) == PHI.apply(z)
