"""Shared helpers: seeded random parameter draws for both potential families."""

import numpy as np

from curvqes.families import NORMALIZABLE, GaugeParams, make_spec, normalizability
from curvqes.oscillator import SpaceConfig


def draw_space(rng, dims=(1, 2, 3)):
    lam = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5))
    d = int(rng.choice(dims))
    l = int(rng.choice([0, 1]))
    return SpaceConfig(lam, d, l)


def draw_gauge(rng, family, m, lam=None, n=0):
    """Gauge parameters in the well-behaved region used by the random suites.

    All b_j positive, a bounded away from the leading-coefficient degeneracy
    4a + 3 = 0, and (for family 1 on the bounded domain) inside the
    normalizable wedge a < 1/4 - n."""
    while True:
        b = tuple(float(x) for x in rng.uniform(0.25, 1.4, size=m))
        if family == 1 and lam is not None and lam < 0:
            a = 0.25 - n - float(rng.uniform(0.35, 1.0))
        elif family == 2:
            a = float(rng.uniform(1.1, 1.8))
        else:
            a = float(rng.uniform(0.3, 1.5))
        if abs(4 * a + 3) < 0.3:
            continue
        return GaugeParams(family, a, b)


def draw_normalizable_spec(rng, family, m, n, dims=(1, 2, 3)):
    """(space, gauge) with the closed-form normalizability verdict positive."""
    while True:
        space = draw_space(rng, dims=dims)
        gauge = draw_gauge(rng, family, m, lam=space.lam, n=n)
        spec = make_spec(space, gauge, n)
        if normalizability(spec)[0] == NORMALIZABLE:
            return space, gauge


def random_cubic_problem(rng, n=2):
    """Coefficient draw for a generic degree-(<=5, <=4) polynomial pair."""
    p = np.zeros(6)
    deg = int(rng.integers(2, 6))
    p[2 : deg + 1] = rng.uniform(-3, 3, size=deg - 1)
    p[deg] = float(rng.uniform(0.5, 3) * rng.choice([-1.0, 1.0]))
    q = rng.uniform(-3, 3, size=5)
    return tuple(p), tuple(q), n
