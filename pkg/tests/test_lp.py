import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisectrix import dual, lp
from bisectrix.dual import SceneDual
from bisectrix.errors import DegenerateTriangle, DomainViolation, HypothesisViolation, NotFound
from bisectrix.geometry import Point2
from bisectrix.lp import INF, ONE, ZERO, LinfInfimum, LinfMinimum, NormExponent
from conftest import random_domain_points, random_min_scenes

SYM = SceneDual(-1.0, 1.0, 1.0, 1.0)
LEFT = SceneDual(0.1, 0.3, 0.3, 0.1)
APEX = Point2(0.0, 2.0)
lengths = st.floats(1e-3, 1e3)


def linf_scenes(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = rng.uniform(-2, 2)
        d = rng.uniform(0.2, 2)
        s = SceneDual(a, d * (1 + rng.uniform(0.01, 1.0)), a + rng.uniform(0.2, 3), d)
        if isinstance(lp.solve_linf(s), LinfMinimum):
            out.append(s)
    return out


class TestNormExponent:
    def test_parse(self):
        assert NormExponent.parse(0) is ZERO
        assert NormExponent.parse("inf") is INF
        assert NormExponent.parse(math.inf) is INF
        assert NormExponent.parse("2.5").p == 2.5
        assert NormExponent.parse(1) == ONE

    def test_finite_rejects(self):
        with pytest.raises(ValueError):
            NormExponent.finite(0.0)
        with pytest.raises(ValueError):
            NormExponent.finite(math.inf)

    def test_json(self):
        assert [e.to_json() for e in (ZERO, INF, NormExponent.finite(2))] == [0, "inf", 2.0]


class TestEvalLp:
    def test_examples(self):
        r8 = 2 * math.sqrt(2)
        assert lp.eval_lp(SYM, INF, APEX) == pytest.approx(r8, rel=1e-15)
        assert lp.eval_lp(SYM, NormExponent.finite(2), APEX) == pytest.approx(4.0, rel=1e-15)
        assert lp.eval_lp(SYM, ZERO, APEX) == pytest.approx(r8, rel=1e-15)
        assert lp.eval_lp(SYM, ONE, APEX) == pytest.approx(4 * math.sqrt(2), rel=1e-15)

    def test_one_is_objective(self, rng):
        for s in random_min_scenes(20, seed=21):
            xs, ys = random_domain_points(s, 50, rng)
            for x, y in zip(xs, ys):
                c1 = Point2(float(x), float(y))
                assert lp.eval_lp(s, ONE, c1) == pytest.approx(dual.eval_objective(s, c1), rel=1e-12)

    def test_batch_matches_scalar(self, rng):
        s = SceneDual(0.0, 1.1, 2.0, 1.0)
        xs, ys = random_domain_points(s, 200, rng)
        for p in (ZERO, INF, ONE, NormExponent.finite(2.0), NormExponent.finite(-1.5)):
            batch = lp.lp_batch(s, p, xs, ys)
            ref = [lp.eval_lp(s, p, Point2(float(x), float(y))) for x, y in zip(xs, ys)]
            assert np.allclose(batch, ref, rtol=1e-13, atol=0)

    def test_domain(self):
        with pytest.raises(DomainViolation):
            lp.eval_lp(SYM, ONE, Point2(0, 0.5))

    @settings(max_examples=300, deadline=None)
    @given(lengths, lengths, st.floats(0.05, 20))
    def test_monotone_in_each_length(self, u, v, p):
        e = NormExponent.finite(p)
        # non-strict: a term below rounding of the other cannot move the sum
        assert e.combine(u * 1.01, v) >= e.combine(u, v)
        assert e.combine(u, v * 1.01) >= e.combine(u, v)
        assert e.combine(2 * u, 2 * v) > e.combine(u, v)

    @settings(max_examples=300, deadline=None)
    @given(lengths, lengths)
    def test_non_increasing_in_p(self, u, v):
        grid = np.geomspace(0.05, 200, 80)
        vals = [NormExponent.finite(float(p)).combine(u, v) for p in grid]
        assert all(b <= a * (1 + 1e-14) for a, b in zip(vals, vals[1:]))

    @settings(max_examples=300, deadline=None)
    @given(lengths, lengths)
    def test_large_p_near_max(self, u, v):
        assert NormExponent.finite(64.0).combine(u, v) / max(u, v) - 1 < 0.02

    @settings(max_examples=300, deadline=None)
    @given(st.floats(1e-2, 1e2), st.floats(1e-2, 1e2), st.sampled_from([1e-2, -1e-2, 1e-3, -1e-3]))
    def test_power_mean_tends_to_geometric_mean(self, u, v, p):
        # the normalised mean ((u^p + v^p)/2)^(1/p) is what approaches sqrt(uv):
        # its log gap is log(cosh(pL/2))/p with L = log(u/v), at most |p| L^2 / 8
        e = NormExponent.finite(p)
        mean = e.combine(u, v) * 2.0 ** (-1.0 / p)
        gap = abs(math.log(mean / ZERO.combine(u, v)))
        assert gap <= abs(p) * math.log(u / v) ** 2 / 8 + 1e-11

    @pytest.mark.xfail(strict=True, reason="(u^p + v^p)^(1/p) grows like 2^(1/p) sqrt(uv) as p -> 0+")
    def test_unnormalised_small_p_is_geometric_mean(self):
        u, v = 2.0, 3.0
        assert abs(NormExponent.finite(1e-4).combine(u, v) / ZERO.combine(u, v) - 1) < 1e-3

    def test_small_p_same_minimiser_as_geometric_mean(self, rng):
        # the 2^(1/p) factor is a constant, so the comparison between points is unchanged
        s = SceneDual(0.0, 1.1, 2.0, 1.0)
        xs, ys = random_domain_points(s, 2000, rng)
        g = lp.lp_batch(s, ZERO, xs, ys)
        small = lp.lp_batch(s, NormExponent.finite(0.01), xs, ys)
        assert np.argmin(g) == np.argmin(small)
        assert np.isinf(lp.lp_batch(s, NormExponent.finite(1e-4), xs[:5], ys[:5])).all()


class TestLinf:
    def test_symmetric(self):
        sol = lp.solve_linf(SYM)
        assert isinstance(sol, LinfMinimum)
        assert sol.k0 == 1.0
        assert sol.C.dist(APEX) < 1e-15
        assert sol.value == pytest.approx(2 * math.sqrt(2), rel=1e-15)

    def test_left_scene_has_minimum(self):
        sol = lp.solve_linf(LEFT)
        assert sol.k0 == pytest.approx(2 ** (1 / 3), rel=1e-15)
        assert isinstance(sol, LinfMinimum)

    def test_infimum_case(self):
        s = SceneDual(0.0, 3.0, 0.5, 0.2)
        assert lp.linf_k0(s) <= (s.b - s.d) / (s.c - s.a)
        sol = lp.solve_linf(s)
        assert isinstance(sol, LinfInfimum)
        assert sol.infimum == pytest.approx(3.0 * math.sqrt((0.5 / 2.8) ** 2 + 1), rel=1e-15)
        xs, ys = random_domain_points(s, 20_000, np.random.default_rng(2))
        assert np.min(lp.lp_batch(s, INF, xs, ys)) > sol.infimum

    def test_balance_and_local(self):
        for s in linf_scenes(50, seed=22):
            sol = lp.solve_linf(s)
            assert sol.balance < 1e-10
            assert sol.value == pytest.approx(lp.eval_lp(s, INF, sol.C), rel=1e-15)
            h = 1e-4 * s.scale
            for ang in np.arange(8) * math.pi / 4:
                c1 = sol.C + Point2(h * math.cos(ang), h * math.sin(ang))
                assert lp.eval_lp(s, INF, c1) >= sol.value

    def test_grid_never_beats(self):
        s = LEFT
        sol = lp.solve_linf(s)
        gx, gy = np.meshgrid(np.linspace(-0.5, 1.0, 600), s.b + np.geomspace(1e-4, 2.0, 600))
        vals = lp.lp_batch(s, INF, gx.ravel(), gy.ravel())
        assert np.min(vals) > sol.value - 1e-6

    def test_challenge(self):
        ch = lp.linf_challenge_check(LEFT, 10_000, seed=0)
        assert ch.min_margin_max > 0 and ch.margin_AP > 0
        assert ch.apex_gap < 1e-10

    def test_challenge_needs_gap(self):
        with pytest.raises(HypothesisViolation):
            lp.linf_challenge_check(SYM)

    def test_margin_vanishes_near_apex(self):
        sol = lp.solve_linf(LEFT)
        gaps = [lp.eval_lp(LEFT, INF, sol.C + Point2(0, e)) - sol.value for e in (1e-2, 1e-4, 1e-6)]
        assert all(g > 0 for g in gaps)
        assert gaps[0] > gaps[1] > gaps[2]


class TestCevian:
    C, D, E = Point2(0, 2), Point2(-2, 0), Point2(2, 0)

    def test_bisector_example(self):
        sc = lp.build_cevian_scene(self.C, self.D, self.E, 1.0)
        for got, exp in ((sc.K, (0, 0)), (sc.L, (-1, 1)), (sc.A, (-1, 1)), (sc.B, (1, 1))):
            assert got.dist(Point2(*exp)) < 1e-15

    def test_isosceles_any_p(self):
        for p in (0.0, 2.0, -3.0):
            assert lp.build_cevian_scene(self.C, self.D, self.E, p).K.dist(Point2(0, 0)) < 1e-15

    def test_symedian_ratio(self):
        C, D, E = Point2(0.4, 1.3), Point2(0, 0), Point2(3, 0)
        sc = lp.build_cevian_scene(C, D, E, 2.0)
        ratio = D.dist(sc.K) / sc.K.dist(E)
        assert ratio == pytest.approx((D.dist(C) / C.dist(E)) ** 2, rel=1e-12)

    def test_vector_conditions(self):
        C, D, E = Point2(0.4, 1.3), Point2(0, 0), Point2(3, 0)
        sc = lp.build_cevian_scene(C, D, E, 0.0)
        assert (sc.C - sc.A).dist(sc.L - sc.D) < 1e-15
        assert (sc.C - sc.B).dist(sc.M - sc.E) < 1e-15
        assert sc.K.dist(Point2(1.5, 0)) < 1e-15

    def test_degenerate(self):
        with pytest.raises(DegenerateTriangle):
            lp.build_cevian_scene(Point2(1, 0), self.D, self.E, 1.0)

    def test_bisector_recovers_dual_points(self):
        for s in random_min_scenes(30, seed=23):
            sol = dual.solve_dual(s)
            sc = lp.build_cevian_scene(sol.C, sol.D, sol.E, 1.0)
            assert sc.A.dist(s.A) < 1e-10 * s.scale
            assert sc.B.dist(s.B) < 1e-10 * s.scale

    def test_segments_match_dual_frame(self):
        s = SceneDual(0.0, 1.1, 2.0, 1.0)
        sol = dual.solve_dual(s)
        sc = lp.build_cevian_scene(sol.C, sol.D, sol.E, 1.0)
        c1 = Point2(0.7, 2.5)
        u, v = sc.segments_from(c1)
        assert u + v == pytest.approx(dual.eval_objective(s, c1), rel=1e-10)


class TestNumericMinimize:
    def test_matches_sum_solver(self):
        res = lp.numeric_minimize(SYM, ONE, starts=8, seed=0)
        assert res.value == pytest.approx(4 * math.sqrt(2), abs=1e-8)
        assert not res.boundary_flag

    def test_matches_linf(self):
        for s in linf_scenes(5, seed=24):
            res = lp.numeric_minimize(s, INF, starts=16, seed=1)
            assert abs(res.value - lp.solve_linf(s).value) < 1e-6

    def test_infimum_case_hits_boundary(self):
        res = lp.numeric_minimize(LEFT, ONE, starts=8, seed=0)
        assert res.boundary_flag
        assert res.value == pytest.approx(dual.infimum_value(LEFT), rel=1e-6)

    def test_median_scene_beaten_near_corner(self):
        cert = lp.find_counterexample(ZERO, seed=1)
        s, _ = cert.scene.to_dual()
        res = lp.numeric_minimize(s, ZERO, starts=16, seed=0)
        assert res.value < cert.g_at_C1 < cert.g_at_C
        # the better point sits just above the higher point, not near the apex
        assert res.best.dist(s.A) < 0.01 * s.scale

    def test_deterministic(self):
        r1 = lp.numeric_minimize(LEFT, NormExponent.finite(2.0), starts=6, seed=5)
        r2 = lp.numeric_minimize(LEFT, NormExponent.finite(2.0), starts=6, seed=5)
        assert r1 == r2


class TestCounterexample:
    @pytest.mark.parametrize("p", [ZERO, NormExponent.finite(2.0)])
    def test_found(self, p):
        cert = lp.find_counterexample(p, budget=100_000, seed=1)
        assert cert.margin > 0
        assert cert.revalidate() == pytest.approx(cert.margin, rel=1e-12)
        D1, E1 = (cert.scene.segments_from(cert.challenger))
        assert cert.g_at_C1 == pytest.approx(p.combine(D1, E1), rel=1e-15)
        ratio = cert.scene.D.dist(cert.scene.C) / cert.scene.C.dist(cert.scene.E)
        assert 1e-3 <= ratio <= 1

    def test_deterministic(self):
        c1 = lp.find_counterexample(ZERO, seed=1)
        c2 = lp.find_counterexample(ZERO, seed=1)
        assert c1 == c2

    def test_control(self):
        with pytest.raises(NotFound) as info:
            lp.find_counterexample(ONE, budget=100_000, seed=1)
        assert info.value.budget == 100_000
        assert info.value.best_margin < 0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            lp.find_counterexample(ZERO, budget=0)
        with pytest.raises(ValueError):
            lp.find_counterexample(INF)

    def test_sampler(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            tri = lp.sample_triangle(rng)
            if tri is None:
                continue
            C, D, E = tri
            assert 0 < C.x < 1 and C.y > 0
            assert D.dist(C) <= C.dist(E)
