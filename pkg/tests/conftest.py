import math

import numpy as np
import pytest

from bisectrix.dual import SceneDual, existence_sigma


def random_min_scenes(n, seed, min_gap=1e-3):
    """Scenes with b > d and a strictly positive existence margin."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = rng.uniform(-2.0, 2.0)
        c = a + rng.uniform(0.2, 3.0)
        d = rng.uniform(0.2, 2.0)
        b = d * (1.0 + rng.uniform(min_gap, 1.5))
        s = SceneDual(a, b, c, d)
        if existence_sigma(s) > 1e-3:
            out.append(s)
    return out


def random_domain_points(s, n, rng):
    """Points with y > b, spread over a broad box around the scene."""
    w = s.scale
    xs = rng.uniform(s.a - 3 * w, s.c + 3 * w, n)
    ys = s.b + w * np.exp(rng.uniform(math.log(1e-3), math.log(6.0), n))
    return xs, ys


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
