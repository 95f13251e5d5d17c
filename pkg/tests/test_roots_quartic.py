import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisectrix.errors import ConvergenceError, LeadingZero
from bisectrix.quartic import quartic_roots
from bisectrix.roots import bisect_sign, golden_section


def expand(roots, lead=1.0):
    return tuple(float(c) for c in lead * np.poly(roots))


class TestQuartic:
    def test_x4_minus_1(self):
        assert quartic_roots(1, 0, 0, 0, -1) == pytest.approx([-1.0, 1.0], abs=1e-14)

    def test_double_root_with_complex_pair(self):
        # (x-2)^2 (x^2+1) = x^4 - 4x^3 + 5x^2 - 4x + 4
        assert quartic_roots(1, -4, 5, -4, 4) == pytest.approx([2.0], abs=1e-7)

    def test_quadruple_root(self):
        assert quartic_roots(*expand([2, 2, 2, 2])) == pytest.approx([2.0], abs=1e-3)

    def test_no_real_roots(self):
        assert quartic_roots(1, 0, 2, 0, 1) == []

    def test_biquadratic(self):
        assert quartic_roots(1, 0, -5, 0, 4) == pytest.approx([-2, -1, 1, 2], abs=1e-13)

    def test_leading_zero(self):
        with pytest.raises(LeadingZero):
            quartic_roots(0, 1, 0, 0, 0)

    def test_planted_roots(self, rng):
        for _ in range(5000):
            roots = np.sort(rng.uniform(-5, 5, 4))
            if np.min(np.diff(roots)) < 0.25:
                continue
            got = quartic_roots(*expand(roots))
            assert len(got) == 4
            assert np.max(np.abs(np.array(got) - roots)) < 1e-10

    def test_clustered_roots_within_conditioning(self, rng):
        # close roots are only determined to eps * scale / |p'(x)|
        eps = np.finfo(float).eps
        for _ in range(3000):
            roots = np.sort(rng.uniform(-10, 10, 4))
            if np.min(np.diff(roots)) < 0.05:
                continue
            c = expand(roots, rng.uniform(0.5, 3) * rng.choice([-1, 1]))
            got = quartic_roots(*c)
            assert len(got) == 4
            for x, r in zip(got, roots):
                scale = sum(abs(ci) * abs(r) ** (4 - i) for i, ci in enumerate(c))
                slope = abs(np.polyval(np.polyder(c), r))
                assert abs(x - r) < 1e-10 + 64 * eps * scale / slope

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=5, max_size=5))
    def test_residual_bound(self, c):
        if abs(c[0]) < 1e-3:
            return
        for x in quartic_roots(*c):
            scale = sum(abs(ci) * abs(x) ** (4 - i) for i, ci in enumerate(c))
            assert abs(np.polyval(c, x)) < 1e-12 * scale

    def test_scale_covariance(self):
        base = [0.3, 1.1, 2.7, 4.0]
        for k in (1e-3, 1.0, 1e3):
            got = quartic_roots(*expand([k * r for r in base]))
            assert got == pytest.approx([k * r for r in base], rel=1e-9)


class TestBisect:
    def test_sqrt2(self):
        assert bisect_sign(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=4e-16)

    def test_known_sign(self):
        # f is undefined at lo; the caller supplies the sign instead
        f = lambda x: math.log(x) if x > 0 else math.nan  # noqa: E731
        assert bisect_sign(lambda x: f(x) - 1, 0.0, 10.0, sign_lo=-1.0) == pytest.approx(math.e, rel=1e-15)

    def test_no_sign_change(self):
        with pytest.raises(ConvergenceError):
            bisect_sign(lambda x: x * x + 1, -1, 1)

    def test_exact_endpoint(self):
        assert bisect_sign(lambda x: x - 1, 1, 3) == 1

    def test_relative_width(self):
        r = bisect_sign(lambda x: x - 1 / 3, 0, 1, rel_width=1e-6)
        assert abs(r - 1 / 3) < 1e-6


class TestGolden:
    def test_parabola(self):
        lo, hi = golden_section(lambda x: (x - 0.7) ** 2, 0, 2, width=1e-10)
        assert hi - lo <= 1e-10
        assert lo - 1e-7 <= 0.7 <= hi + 1e-7

    def test_open_interval_blowup(self):
        lo, hi = golden_section(lambda x: 1 / x + 1 / (1 - x), 0.0, 1.0, width=1e-9)
        assert 0.5 == pytest.approx(0.5 * (lo + hi), abs=1e-6)
