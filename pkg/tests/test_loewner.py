"""Discrete Loewner evolution: driving, flow, traces, crossing queries."""

import math

import numpy as np
import pytest

from slekit.loewner import (
    DrivingSample,
    avoids_hull,
    driving_rows,
    evolve_point,
    polyline_crosses_slit,
    probe_spacing,
    refine_driving,
    removal_map_from_driving,
    sample_driving,
    slit_probes,
    trace_from_driving,
    trace_points_batch,
)
from slekit.maps import hcap_from_expansion

KAPPA = 8.0 / 3.0


class TestDriving:
    def test_deterministic_in_seed(self):
        d1 = sample_driving(KAPPA, 1.0, 300, seed=11)
        d2 = sample_driving(KAPPA, 1.0, 300, seed=11)
        assert np.array_equal(d1.values, d2.values)
        assert np.array_equal(d1.times, d2.times)
        d3 = sample_driving(KAPPA, 1.0, 300, seed=12)
        assert not np.array_equal(d1.values, d3.values)

    def test_family_extension_preserves_replicas(self):
        narrow = sample_driving(KAPPA, 1.0, 120, seed=3, replica=1,
                                family_width=2)
        wide = sample_driving(KAPPA, 1.0, 120, seed=3, replica=1,
                              family_width=5)
        assert np.array_equal(narrow.values, wide.values)

    def test_starts_at_zero_on_uniform_grid(self):
        d = sample_driving(KAPPA, 2.0, 64, seed=0)
        assert d.values[0] == 0.0
        assert d.steps == 64
        assert d.T == 2.0
        assert np.allclose(np.diff(d.times), 2.0 / 64)

    def test_validation(self):
        with pytest.raises(ValueError):
            sample_driving(KAPPA, 1.0, 0, seed=0)
        with pytest.raises(ValueError):
            sample_driving(KAPPA, -1.0, 10, seed=0)
        with pytest.raises(ValueError):
            sample_driving(-1.0, 1.0, 10, seed=0)
        with pytest.raises(ValueError):
            sample_driving(KAPPA, 1.0, 10, seed=0, replica=3, family_width=2)
        with pytest.raises(ValueError):
            DrivingSample(kappa=KAPPA, times=np.array([0.0, 1.0]),
                          values=np.array([1.0, 2.0]), seed=0)

    def test_refinement_preserves_coarse_grid_bitwise(self):
        d = sample_driving(KAPPA, 1.0, 100, seed=7)
        r = refine_driving(d)
        assert r.steps == 200
        assert np.array_equal(r.values[::2], d.values)
        assert np.array_equal(r.times[::2], d.times)
        rr = refine_driving(r)
        assert np.array_equal(rr.values[::4], d.values)

    def test_refinement_deterministic(self):
        d = sample_driving(KAPPA, 1.0, 50, seed=9)
        assert np.array_equal(refine_driving(d).values,
                              refine_driving(d).values)

    def test_brownian_scaling(self):
        # under T -> s T with the same seed, W and the trace scale by sqrt(s)
        s = 4.0
        d1 = sample_driving(KAPPA, 1.0, 150, seed=21)
        ds = sample_driving(KAPPA, s, 150, seed=21)
        assert np.allclose(ds.values, 2.0 * d1.values, atol=1e-13)
        t1 = trace_from_driving(d1).points
        ts = trace_from_driving(ds).points
        assert np.max(np.abs(ts - 2.0 * t1)) < 1e-10


class TestTrace:
    def test_zero_driving_grows_vertical_slit(self):
        d = sample_driving(0.0, 1.0, 16, seed=0)
        pts = trace_from_driving(d).points
        # gamma(t) = 2 i sqrt(t) for zero driving
        expect = 2j * np.sqrt(d.times)
        assert np.max(np.abs(pts - expect)) < 1e-9

    def test_reflection_symmetry(self):
        d = sample_driving(KAPPA, 1.0, 180, seed=5)
        neg = DrivingSample(kappa=d.kappa, times=d.times.copy(),
                            values=-d.values, seed=d.seed)
        tr = trace_from_driving(d).points
        tn = trace_from_driving(neg).points
        assert np.max(np.abs(tn + np.conj(tr))) < 1e-12

    def test_trace_starts_at_origin_and_stays_closed_upper(self):
        d = sample_driving(6.0, 1.0, 200, seed=2)
        pts = trace_from_driving(d).points
        assert pts[0] == 0.0
        assert np.all(pts.imag >= -1e-12)

    def test_capacity_of_removal_map(self):
        d = sample_driving(KAPPA, 1.5, 40, seed=13)
        a1 = hcap_from_expansion(removal_map_from_driving(d))
        assert abs(a1 - 2.0 * 1.5) < 1e-6 * 3.0

    def test_forward_flow_returns_trace_to_driving(self):
        d = sample_driving(KAPPA, 1.0, 160, seed=31)
        pts = trace_from_driving(d).points
        for j in (40, 80, 160):
            trunc = DrivingSample(kappa=d.kappa,
                                  times=d.times[:j + 1].copy(),
                                  values=d.values[:j + 1].copy(),
                                  seed=d.seed)
            _, g = evolve_point(pts[j], trunc)
            assert abs(g - d.values[j]) < 1e-6


class TestEvolvePoint:
    def test_rejects_lower_half_plane_and_origin(self):
        d = sample_driving(KAPPA, 1.0, 10, seed=0)
        with pytest.raises(ValueError):
            evolve_point(1.0 - 0.5j, d)
        with pytest.raises(ValueError):
            evolve_point(0.0, d)

    def test_far_point_survives(self):
        d = sample_driving(KAPPA, 1.0, 50, seed=1)
        escape, g = evolve_point(100.0 + 0.0j, d)
        assert escape is None
        assert g.imag == 0.0
        assert g.real > 90.0

    def test_interior_point_lands_on_axis_at_kappa_zero(self):
        # a point on the growing slit is mapped to the real axis by the
        # first step; the discrete flow keeps it there rather than
        # reporting a swallow (|v| jumps over the tolerance window)
        d = sample_driving(0.0, 1.0, 100, seed=0)
        escape, g = evolve_point(0.05j, d)
        assert escape is None
        assert g.imag == 0.0

    def test_axis_point_escapes_when_driving_passes_over(self):
        d = sample_driving(KAPPA, 1.0, 100, seed=1)
        dt = 1.0 / 100
        # the first increment passes over whichever tiny point shares its
        # sign, and the sign-flip rule reports the escape on that step
        results = [evolve_point(complex(s * 1e-8, 0.0), d)[0]
                   for s in (+1.0, -1.0)]
        escaped = [t for t in results if t is not None]
        assert len(escaped) >= 1
        assert min(escaped) == pytest.approx(dt)


class TestBatchedHelpers:
    def test_driving_rows_match_scalar_sampler_bitwise(self):
        rows = driving_rows(KAPPA, 1.0, 90, 17, [0, 2, 3], 4)
        for r, rep in zip(rows, (0, 2, 3)):
            d = sample_driving(KAPPA, 1.0, 90, seed=17, replica=rep,
                               family_width=4)
            assert np.array_equal(r, d.values)

    def test_driving_rows_column_subset(self):
        full = driving_rows(KAPPA, 1.0, 60, 23, [1], 3)
        cols = np.array([0, 7, 31, 60])
        sub = driving_rows(KAPPA, 1.0, 60, 23, [1], 3, columns=cols)
        assert np.array_equal(sub[0], full[0][cols])

    def test_trace_batch_matches_scalar_bitwise(self):
        pts = trace_points_batch(KAPPA, 1.0, 120, 29, [0, 4], 5)
        for row, rep in zip(pts, (0, 4)):
            d = sample_driving(KAPPA, 1.0, 120, seed=29, replica=rep,
                               family_width=5)
            assert np.array_equal(row, trace_from_driving(d).points)

    def test_trace_batch_prefix_property(self):
        full = trace_points_batch(KAPPA, 1.0, 100, 41, [2], 3)
        head = trace_points_batch(KAPPA, 1.0, 100, 41, [2], 3, k_max=35)
        assert np.array_equal(head[0], full[0][:36])

    def test_trace_batch_rejects_bad_k_max(self):
        with pytest.raises(ValueError):
            trace_points_batch(KAPPA, 1.0, 10, 0, [0], 1, k_max=11)
        with pytest.raises(ValueError):
            trace_points_batch(KAPPA, 1.0, 10, 0, [0], 1, k_max=0)


class TestCrossingQueries:
    def test_crossing_detected(self):
        poly = np.array([0.0 + 0.5j, 2.0 + 0.5j])
        assert polyline_crosses_slit(poly, 1.0, 1.0)

    def test_crossing_above_slit_tip_ignored(self):
        poly = np.array([0.0 + 1.5j, 2.0 + 1.5j])
        assert not polyline_crosses_slit(poly, 1.0, 1.0)

    def test_touch_without_straddle_ignored(self):
        # vertex lands exactly on the slit line but never crosses it
        poly = np.array([0.0 + 0.5j, 1.0 + 0.5j, 0.0 + 0.9j])
        assert not polyline_crosses_slit(poly, 1.0, 1.0)

    def test_interpolated_height_is_used(self):
        # edge from below-left to above-right passes the line at height 1.25
        poly = np.array([0.5 + 1.0j, 1.5 + 1.5j])
        assert not polyline_crosses_slit(poly, 1.0, 1.2)
        assert polyline_crosses_slit(poly, 1.0, 1.3)

    def test_batch_rows(self):
        polys = np.array([[0.0 + 0.5j, 2.0 + 0.5j],
                          [0.0 + 2.0j, 2.0 + 2.0j]])
        got = polyline_crosses_slit(polys, 1.0, 1.0)
        assert got.tolist() == [True, False]

    def test_avoids_hull_matches_trace_intersection(self):
        x, eps = 1.0, 2.0 ** -0.5
        ell = eps * math.sqrt(2.0)
        seen_hit = seen_miss = False
        for seed in range(30):
            d = sample_driving(KAPPA, 4.0, 400, seed=seed)
            pts = trace_from_driving(d).points
            expect = not polyline_crosses_slit(pts, x, ell)
            assert avoids_hull(d, x, eps) == expect
            seen_hit |= not expect
            seen_miss |= expect
        assert seen_hit and seen_miss

    def test_avoids_hull_zero_driving(self):
        d = sample_driving(0.0, 1.0, 32, seed=0)
        assert avoids_hull(d, 1.0, 0.5)

    def test_avoids_hull_validation(self):
        d = sample_driving(KAPPA, 1.0, 10, seed=0)
        with pytest.raises(ValueError):
            avoids_hull(d, 0.0, 0.5)
        with pytest.raises(ValueError):
            avoids_hull(d, 1.0, -0.5)


class TestProbeLayout:
    def test_geometry(self):
        x, eps = 2.0, 0.5
        ell = eps * math.sqrt(2.0)
        p = slit_probes(x, eps)
        assert p.size == 11
        assert np.allclose(p[:9], x + 1j * ell * np.arange(1, 10) / 9.0)
        assert p[9] == pytest.approx(x - ell / 18.0)
        assert p[10] == pytest.approx(x + ell / 18.0)
        assert probe_spacing(eps) == pytest.approx(ell / 9.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            slit_probes(0.0, 1.0)
        with pytest.raises(ValueError):
            slit_probes(1.0, 0.0)


class TestSimpleCurveRegime:
    def test_polyline_crossings_vanish_under_refinement(self):
        # at kappa = 8/3 the limiting curve is simple; any crossing of the
        # sampled polyline must be a discretization artifact
        def self_crosses(pts):
            a, b = pts[:-1], pts[1:]
            for i in range(len(a) - 2):
                o, p = a[i], b[i]
                q, r = a[i + 2:], b[i + 2:]
                d1 = ((p.real - o.real) * (r.imag - o.imag)
                      - (p.imag - o.imag) * (r.real - o.real))
                d2 = ((p.real - o.real) * (q.imag - o.imag)
                      - (p.imag - o.imag) * (q.real - o.real))
                d3 = ((r.real - q.real) * (o.imag - q.imag)
                      - (r.imag - q.imag) * (o.real - q.real))
                d4 = ((r.real - q.real) * (p.imag - q.imag)
                      - (r.imag - q.imag) * (p.real - q.real))
                if bool(((np.sign(d1) * np.sign(d2) < 0)
                         & (np.sign(d3) * np.sign(d4) < 0)).any()):
                    return True
            return False

        persistent = 0
        for seed in range(25):
            d = sample_driving(KAPPA, 1.0, 200, seed=seed)
            if self_crosses(trace_from_driving(d).points):
                fine = refine_driving(refine_driving(d))
                if self_crosses(trace_from_driving(fine).points):
                    persistent += 1
        assert persistent == 0
