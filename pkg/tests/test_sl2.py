"""Hidden-symmetry route: generator algebra and spectral cross-checks."""

import numpy as np

from curvqes.sl2 import (
    cross_check,
    family1_operator_matrix,
    family2_operator_matrix,
    generators,
)


def test_commutation_relations_exact():
    for n in range(13):
        jp, j0, jm = generators(n)
        assert np.array_equal(j0 @ jp - jp @ j0, jp)
        assert np.array_equal(j0 @ jm - jm @ j0, -jm)
        assert np.array_equal(jm @ jp - jp @ jm, 2 * j0)


def test_casimir_is_scalar():
    for n in (1, 3, 6):
        jp, j0, jm = generators(n)
        cas = j0 @ j0 - (jp @ jm + jm @ jp) / 2
        expected = (n / 2) * (n / 2 + 1) * np.eye(n + 1)
        assert np.allclose(cas, expected, atol=1e-12)


def test_scalar_sector_matches_fixed_formulas():
    # n=0: the 1x1 operator matrix is the gauge-fixed constant itself
    a, b1, l, d = 0.7, 1.1, 1, 3
    m1 = family1_operator_matrix(0, a, b1, l, d)
    eps = -4 * a**2 + 8 * a * b1 + 2 * a * (2 * l + d - 1) - 2 * b1
    assert abs(m1[0, 0] - eps) < 1e-13
    m2 = family2_operator_matrix(0, a, b1, l, d)
    coupling = 2 * a * (2 * a + 1) + 2 * b1 * (4 * a - 2 * l - d + 3)
    assert abs(m2[0, 0] - coupling) < 1e-13


def test_cross_check_small_sectors():
    rng = np.random.default_rng(47)
    for family in (1, 2):
        for n in (0, 1, 2):
            for _ in range(4):
                a = float(rng.uniform(0.4, 1.4))
                b1 = float(rng.uniform(0.3, 1.5))
                l = int(rng.choice([0, 1]))
                d = int(rng.choice([1, 3]))
                rep = cross_check(family, n, a, b1, l, d)
                assert rep["n_unmatched"] == 0
                assert rep["max_value_diff"] < 1e-9
                assert rep["max_vector_diff"] < 1e-6


def test_cross_check_flags_complex_pair():
    # negative discriminant at n=1: the admissible values come as a
    # conjugate pair and must still match the matrix eigenvalues
    rep = cross_check(1, 1, 1.3482641344755142, -1.978938781737701, 0, 3)
    assert rep["complex_pair"]
    assert rep["n_unmatched"] == 0
    assert rep["max_value_diff"] < 1e-9
