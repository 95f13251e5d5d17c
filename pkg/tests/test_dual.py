import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisectrix import dual
from bisectrix.dual import Case, InfimumOnly, MinimumFound, SceneDual
from bisectrix.errors import (
    DomainViolation,
    InvalidScene,
    IsoscelesDegenerate,
    NotApplicable,
)
from bisectrix.geometry import Line2, Point2, perp_foot
from conftest import random_domain_points, random_min_scenes
from oracles import distance_sum, mp_derivatives

SYM = SceneDual(-1.0, 1.0, 1.0, 1.0)
LEFT = SceneDual(0.1, 0.3, 0.3, 0.1)
RIGHT = SceneDual(0.1, 0.3, 0.3, 0.2)
TALL = SceneDual(0.0, 1.1, 2.0, 1.0)

scenes = st.builds(
    lambda a, w, d, g: SceneDual(a, d * (1 + g), a + w, d),
    st.floats(-3, 3),
    st.floats(0.1, 4),
    st.floats(0.1, 3),
    st.floats(0, 2),
)


def candidate(s, fx, fy):
    """Domain point from unit-square coordinates."""
    w = s.scale
    return Point2(s.a - 2 * w + fx * (s.c - s.a + 4 * w), s.b + w * math.exp(math.log(1e-2) + fy * math.log(500)))


class TestScene:
    @pytest.mark.parametrize("args", [(1, 1, 0, 0.5), (0, 1, 1, 2), (0, 1, 1, 0), (0, 1, 1, -1), (0, math.nan, 1, 1)])
    def test_rejects(self, args):
        with pytest.raises(InvalidScene):
            SceneDual(*args)


class TestRaysAndObjective:
    def test_symmetric_hits(self):
        D1, E1 = dual.ray_hits(SYM, Point2(0, 2))
        assert (D1, E1) == (Point2(-2.0, 0.0), Point2(2.0, 0.0))

    def test_hits_collinear(self):
        c1 = Point2(0.2, 1.0)
        D1, E1 = dual.ray_hits(RIGHT, c1)
        assert abs((RIGHT.A - c1).cross(D1 - c1)) < 1e-12
        assert abs((RIGHT.B - c1).cross(E1 - c1)) < 1e-12

    def test_vertical_ray(self):
        D1, _ = dual.ray_hits(RIGHT, Point2(RIGHT.a, 0.9))
        assert D1.x == pytest.approx(RIGHT.a, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainViolation):
            dual.ray_hits(RIGHT, Point2(0.2, 0.3))
        with pytest.raises(DomainViolation):
            dual.eval_objective(RIGHT, Point2(0.2, 0.25))

    def test_symmetric_value(self):
        assert dual.eval_objective(SYM, Point2(0, 2)) == pytest.approx(4 * math.sqrt(2), rel=1e-15)

    def test_two_formulas_agree(self):
        c1 = Point2(0.2, 0.6)
        assert dual.eval_objective(RIGHT, c1) == pytest.approx(distance_sum(RIGHT, 0.2, 0.6), rel=1e-12)

    def test_consistency_bulk(self, rng):
        # 10^5 (scene, candidate) pairs through the vectorised path
        for s in random_min_scenes(100, seed=3):
            xs, ys = random_domain_points(s, 1000, rng)
            f = dual.objective_batch(s, xs, ys)
            x1 = xs - ys * (xs - s.a) / (ys - s.b)
            x2 = xs - ys * (xs - s.c) / (ys - s.d)
            ref = np.hypot(xs - x1, ys) + np.hypot(xs - x2, ys)
            assert np.max(np.abs(f - ref) / ref) < 1e-12

    def test_batch_nan_outside(self):
        out = dual.objective_batch(RIGHT, np.array([0.2, 0.2]), np.array([0.1, 1.0]))
        assert math.isnan(out[0]) and math.isfinite(out[1])

    def test_corner_limit_along_vertical(self):
        vals = [dual.eval_objective(LEFT, Point2(LEFT.a, LEFT.b + 10.0**-k)) for k in range(3, 10)]
        assert vals[-1] == pytest.approx(0.3 * (1 + math.sqrt(2)), rel=1e-8)


class TestDerivatives:
    def test_symmetric_stationary(self):
        fx, fy = dual.grad_objective(SYM, Point2(0, 2))
        assert abs(fx) < 1e-15 and abs(fy) < 1e-15

    @settings(max_examples=200, deadline=None)
    @given(scenes, st.floats(0, 1), st.floats(0, 1))
    def test_gradient_against_high_precision(self, s, u, v):
        c1 = candidate(s, u, v)
        fx, fy = dual.grad_objective(s, c1)
        mx, my, *_ = mp_derivatives(s, c1.x, c1.y)
        size = 1 + abs(mx) + abs(my)
        assert abs(fx - mx) < 1e-9 * size
        assert abs(fy - my) < 1e-9 * size

    @settings(max_examples=200, deadline=None)
    @given(scenes, st.floats(0, 1), st.floats(0, 1))
    def test_hessian_against_high_precision(self, s, u, v):
        c1 = candidate(s, u, v)
        hxx, hxy, hyy = dual.hessian(s, c1)
        _, _, mxx, mxy, myy = mp_derivatives(s, c1.x, c1.y)
        size = abs(mxx) + abs(mxy) + abs(myy)
        for a, b in ((hxx, mxx), (hxy, mxy), (hyy, myy)):
            assert abs(a - b) < 1e-8 * size
        assert hxx > 0

    @settings(max_examples=150, deadline=None)
    @given(scenes, st.floats(0, 1), st.floats(0, 1))
    def test_det_first_term(self, s, u, v):
        c1 = candidate(s, u, v)
        _, _, axx, axy, ayy = mp_derivatives(s, c1.x, c1.y, which="A")
        ref = axx * ayy - axy * axy
        got = dual.hessian_diagnostics(s, c1).detH_f1
        assert got <= 0
        assert abs(got - ref) < 1e-8 * (abs(axx * ayy) + axy * axy)

    def test_det_first_term_zero_on_vertical(self):
        assert dual.hessian_diagnostics(RIGHT, Point2(RIGHT.a, 0.8)).detH_f1 == 0.0

    @pytest.mark.parametrize("lam", [0.1, 1.0, 3.0])
    def test_det_on_ab_line(self, lam):
        s = TALL
        x, y = (lam + 1) * s.a - lam * s.c, (lam + 1) * s.b - lam * s.d
        _, _, mxx, mxy, myy = mp_derivatives(s, x, y)
        ref = mxx * myy - mxy * mxy
        got = dual.det_hessian_on_ab(s, lam)
        assert got < 0
        assert abs(got - ref) < 1e-9 * (abs(mxx * myy) + mxy * mxy)
        assert dual.hessian_diagnostics(s, Point2(x, y)).detH_f == pytest.approx(got, rel=1e-8)

    def test_det_on_ab_needs_gap(self):
        with pytest.raises(NotApplicable):
            dual.det_hessian_on_ab(SYM, 1.0)

    def test_sign_pattern(self, rng):
        for s in random_min_scenes(20, seed=8):
            for _ in range(50):
                y = s.b + rng.uniform(1e-3, 5)
                assert dual.grad_objective(s, Point2(s.a - rng.uniform(1e-3, 5), y))[0] < 0
                assert dual.grad_objective(s, Point2(s.c + rng.uniform(1e-3, 5), y))[0] > 0

    def test_boundary_growth(self, rng):
        for s in random_min_scenes(20, seed=9):
            for dx in (0.1 + rng.uniform(0, 2), -0.1 - rng.uniform(0, 2)):
                assert dual.eval_objective(s, Point2(s.a + dx, s.b + 1e-9)) > 1e3


class TestCornerLimit:
    def test_value(self):
        assert dual.directional_limit(LEFT, 0, 1) == pytest.approx(0.3 * (1 + math.sqrt(2)), rel=1e-15)

    def test_minimal_at_vertical(self):
        assert dual.directional_limit(LEFT, 1, 1) > dual.directional_limit(LEFT, 0, 1)
        ks = np.linspace(-3, 3, 61)
        vals = [dual.directional_limit(LEFT, k, 1.0) for k in ks]
        assert ks[int(np.argmin(vals))] == 0.0

    def test_matches_sampling(self):
        k1, k2 = 0.7, 1.3
        lim = dual.directional_limit(TALL, k1, k2)
        ts = (1e-4, 1e-5, 1e-6, 1e-7)
        gaps = [dual.eval_objective(TALL, Point2(TALL.a + k1 * t, TALL.b + k2 * t)) - lim for t in ts]
        # first-order approach: gap / t settles to a constant
        rates = [g / t for g, t in zip(gaps, ts)]
        assert abs(rates[-1] - rates[-2]) < 1e-3 * abs(rates[-1])
        assert abs(gaps[-1]) < 1e-4

    def test_errors(self):
        with pytest.raises(NotApplicable):
            dual.directional_limit(SYM, 0, 1)
        with pytest.raises(DomainViolation):
            dual.directional_limit(LEFT, 0, 0)


class TestClassification:
    def test_examples(self):
        assert dual.classify_existence(LEFT).case is Case.INFIMUM_ONLY
        assert dual.classify_existence(RIGHT).case is Case.MIN_EXISTS
        cls = dual.classify_existence(SYM)
        assert cls.case is Case.MIN_EXISTS and cls.sigma == math.inf

    def test_sigma_zero_is_infimum(self):
        # d - b + d (c - a) / sqrt(b^2 - d^2) = 0 with b = 2, d = 1 => c - a = sqrt(3)
        s = SceneDual(0.0, 2.0, math.sqrt(3.0), 1.0)
        sig = dual.existence_sigma(s)
        assert abs(sig) < 1e-15
        assert (dual.classify_existence(s).case is Case.INFIMUM_ONLY) == (sig <= 0)

    def test_infimum_values(self):
        assert dual.infimum_value(LEFT) == pytest.approx(0.3 * (1 + math.sqrt(2)), rel=1e-15)
        s = SceneDual(0.0, 2.0, 1.0, 1.0)
        assert dual.existence_sigma(s) == pytest.approx(-1 + 1 / math.sqrt(3), rel=1e-14)
        assert dual.infimum_value(s) == pytest.approx(2 * (1 + math.sqrt(2)), rel=1e-15)
        with pytest.raises(NotApplicable):
            dual.infimum_value(RIGHT)

    def test_infimum_is_lower_bound(self, rng):
        s = LEFT
        xs, ys = random_domain_points(s, 100_000, rng)
        assert np.min(dual.objective_batch(s, xs, ys)) > dual.infimum_value(s)

    def test_infimum_approached_monotonically(self):
        vals = [dual.eval_objective(LEFT, Point2(LEFT.a, LEFT.b + 10.0**-k)) for k in range(1, 9)]
        assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
        assert vals[-1] - dual.infimum_value(LEFT) < 1e-6


class TestPhi:
    def test_phi_at_b_is_sigma(self):
        for s in random_min_scenes(50, seed=4) + [LEFT, TALL]:
            assert dual.phi(s, s.b) == pytest.approx(dual.existence_sigma(s), rel=1e-13, abs=1e-13)

    def test_negative_at_large_t(self):
        assert dual.phi(TALL, 1e6) < 0

    def test_numerator_decreasing(self):
        for s in random_min_scenes(100, seed=5):
            ts = s.b * (1 + np.concatenate([[0.0], np.geomspace(1e-6, 50, 400)]))
            vals = [dual.phi_numerator(s, t) for t in ts]
            assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainViolation):
            dual.phi(TALL, 1.0)
        with pytest.raises(NotApplicable):
            dual.phi(SYM, 2.0)

    def test_root(self):
        t0 = dual.solve_phi_root(TALL)
        assert t0 > TALL.b
        assert abs(dual.phi(TALL, t0)) < 1e-12 * (1 + t0)

    def test_root_not_applicable(self):
        with pytest.raises(NotApplicable):
            dual.solve_phi_root(LEFT)
        with pytest.raises(NotApplicable):
            dual.solve_phi_root(SYM)

    def test_root_tends_to_b_at_threshold(self):
        # sigma = 0 at d* where d (c - a) = (b - d) sqrt(b^2 - d^2); sweep d down to it
        b, w = 0.3, 0.2
        dstar = dual_threshold(b, w)
        prev = math.inf
        for eps in (1e-1, 1e-2, 1e-3, 1e-4):
            s = SceneDual(0.1, b, 0.1 + w, dstar + eps * (b - dstar))
            gap = dual.solve_phi_root(s) - b
            assert 0 < gap < prev
            prev = gap
        assert prev < 1e-2


def dual_threshold(b, w):
    from bisectrix.roots import bisect_sign

    return bisect_sign(lambda d: d - b + d * w / math.sqrt(b * b - d * d), 1e-9, b * (1 - 1e-12))


class TestQuartic:
    def test_tall_scene_validates(self):
        q = dual.dual_quartic(TALL)
        t0 = dual.solve_phi_root(TALL)
        assert q.validated and q.derived_validated
        assert abs(q.t - t0) < 1e-8
        assert q.errata is None

    def test_quoted_form_fails_off_unit_d(self):
        s = SceneDual(0.0, 0.9, 1.5, 0.4)
        q = dual.dual_quartic(s)
        t0 = dual.solve_phi_root(s)
        assert not q.validated
        assert q.derived_validated and abs(q.t - t0) < 1e-8
        assert q.errata and "d = 1" in q.errata

    def test_derived_always_validates(self):
        for s in random_min_scenes(100, seed=6):
            q = dual.dual_quartic(s)
            assert q.derived_validated
            assert abs(q.t - dual.solve_phi_root(s)) < 1e-8

    def test_near_degenerate_lead(self):
        s = SceneDual(-1.0, 1.0 + 1e-10, 1.0, 1.0)
        assert dual.dual_quartic(s).near_degenerate

    def test_scale_covariance(self):
        s = SceneDual(0.0, 0.9, 1.5, 0.4)
        base = dual.dual_quartic(s).lam
        for k in (0.01, 7.0):
            assert dual.dual_quartic(s.scaled(k)).lam == pytest.approx(k * base, rel=1e-9)


class TestReconstruct:
    def test_symmetric(self):
        cfg = dual.reconstruct(SYM, math.sqrt(2))
        exp = {"C": (0, 2), "D": (-2, 0), "E": (2, 0), "K": (0, 0), "L": (-1, 1), "M": (1, 1)}
        for name, xy in exp.items():
            assert getattr(cfg, name).dist(Point2(*xy)) < 1e-12
        assert cfg.P is None and cfg.Q is None

    def test_offsets_equal(self):
        for s in random_min_scenes(30, seed=7):
            t0 = dual.solve_phi_root(s)
            cfg = dual.reconstruct(s, t0)
            assert s.A.dist(cfg.D) == pytest.approx(t0, rel=1e-10)
            assert s.B.dist(cfg.E) == pytest.approx(t0, rel=1e-10)
            # acute base angles
            assert (cfg.C - cfg.D).dot(cfg.E - cfg.D) > 0
            assert (cfg.C - cfg.E).dot(cfg.D - cfg.E) > 0
            assert cfg.D.x < s.a and cfg.E.x > s.c

    def test_config_invariants(self):
        sol = dual.solve_dual(TALL)
        cfg = sol.config
        assert abs((cfg.A - cfg.C).cross(cfg.D - cfg.C)) < 1e-12
        assert abs((cfg.B - cfg.C).cross(cfg.E - cfg.C)) < 1e-12
        assert cfg.K.y == 0.0 and cfg.A0.y == cfg.B0.y == cfg.C0.y == 0.0
        assert cfg.L.dist(perp_foot(cfg.K, Line2(cfg.C, cfg.D))) < 1e-15

    def test_apex_closed_form(self):
        for s in random_min_scenes(30, seed=10):
            t0 = dual.solve_phi_root(s)
            cfg = dual.reconstruct(s, t0)
            assert dual.apex_ordinate_closed_form(s, t0) == pytest.approx(cfg.C.y, rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainViolation):
            dual.reconstruct(TALL, 1.0)


class TestOptimality:
    def test_symmetric_exact(self):
        cfg = dual.reconstruct(SYM, math.sqrt(2))
        rep = dual.verify_optimality(SYM, cfg)
        assert rep.worst() < 1e-12 and not rep.reduced

    def test_non_optimal_apex(self):
        cfg = dual.candidate_config(SYM, Point2(0.3, 2.5))
        rep = dual.verify_optimality(SYM, cfg)
        assert rep.cond1_residual > 1e-3

    def test_random_scenes(self):
        for s in random_min_scenes(100, seed=11):
            sol = dual.solve_dual(s)
            rep = sol.report
            assert rep.worst() < 1e-8
            assert rep.fd_grad_error < 1e-6

    def test_right_angle_at_base(self):
        # apex directly above E: the perpendicular at M1 to CE is horizontal
        s = SceneDual(-1.0, 1.0, 1.0, 1.0)
        assert not dual.verify_optimality(s, dual.candidate_config(s, Point2(3.0, 4.0))).reduced
        above = dual.candidate_config(s, Point2(s.c + 0.0, 3.0))
        rep2 = dual.verify_optimality(s, above)
        assert rep2.reduced and math.isnan(rep2.cond1_residual)
        assert "K2" not in rep2.points and "K1" in rep2.points


class TestSolve:
    def test_symmetric(self):
        sol = dual.solve_dual(SYM)
        assert isinstance(sol, MinimumFound)
        assert sol.C.dist(Point2(0, 2)) < 1e-10
        assert sol.value == pytest.approx(4 * math.sqrt(2), abs=1e-10)

    def test_infimum_case(self):
        sol = dual.solve_dual(LEFT)
        assert isinstance(sol, InfimumOnly)
        assert sol.limit_point == LEFT.A
        assert sol.infimum == pytest.approx(0.3 * (1 + math.sqrt(2)), rel=1e-15)

    def test_value_is_distance_sum(self):
        sol = dual.solve_dual(TALL)
        assert sol.value == pytest.approx(sol.C.dist(sol.D) + sol.C.dist(sol.E), rel=1e-12)
        assert sol.value == pytest.approx(dual.eval_objective(TALL, sol.C), rel=1e-12)
        assert sol.t0 > TALL.b

    def test_global_minimality(self, rng):
        sol = dual.solve_dual(TALL)
        xs, ys = random_domain_points(TALL, 10_000, rng)
        vals = dual.objective_batch(TALL, xs, ys)
        assert np.all(vals >= sol.value - 1e-12)

    def test_grid_confirms_symmetric(self):
        ys = np.linspace(1.01, 5, 4001)
        vals = dual.objective_batch(SYM, np.zeros_like(ys), ys)
        assert ys[int(np.argmin(vals))] == pytest.approx(2.0, abs=1e-3)

    def test_equal_heights_general(self):
        s = SceneDual(0.3, 0.7, 2.1, 0.7)
        sol = dual.solve_dual(s)
        assert sol.C.x == pytest.approx(1.2, abs=1e-12)
        assert sol.report.worst() < 1e-8


class TestIdentities:
    def test_random_optima(self):
        for s in random_min_scenes(50, seed=12):
            cfg = dual.solve_dual(s).config
            ids = dual.triangle_identities(cfg)
            assert max(ids.residuals) < 1e-9
            assert dual.corner_bound_margin(cfg) > 0

    def test_symmetric(self):
        cfg = dual.solve_dual(SYM).config
        ids = dual.triangle_identities(cfg)
        r1, r2, r3, r4, r5, r6 = ids.residuals
        assert math.isnan(r1) and math.isnan(r5)
        assert max(r2, r3, r4, r6) < 1e-14
        with pytest.raises(IsoscelesDegenerate):
            dual.corner_bound_margin(cfg)

    def test_perturbed_config_breaks_them(self):
        sol = dual.solve_dual(TALL)
        cfg = dual.candidate_config(TALL, sol.C + Point2(0.05, 0.08))
        assert max(dual.triangle_identities(cfg).evaluated()) > 1e-3

    def test_quoted_first_identity_differs(self):
        cfg = dual.solve_dual(TALL).config
        assert dual.triangle_identities(cfg).quoted_1 > 1e-3

    def test_corner_margin_example(self):
        assert dual.corner_bound_margin(dual.solve_dual(TALL).config) > 0
