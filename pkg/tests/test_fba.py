"""Root-finding engine: residues, derived coefficients, verification oracle."""

import numpy as np
import pytest

from conftest import random_cubic_problem
from curvqes.errors import DuplicateRoots, NoRealSolution, PoleProximity
from curvqes.families import GaugeParams, make_spec, to_bethe_problem
from curvqes.fba import (
    BetheProblem,
    BetheRoots,
    WCoefficients,
    bethe_residue,
    canonical_order,
    derive_w,
    residue_vector,
    solve_roots,
    summation_identities,
    verify_polynomial_solution,
)
from curvqes.oscillator import SpaceConfig


def _quadratic_case():
    """Family-1 m=1 single-root problem with a rational discriminant."""
    space = SpaceConfig(1.0, 3, 0)
    gauge = GaugeParams(1, 0.5, (1.0,))
    return to_bethe_problem(make_spec(space, gauge, 1))


def test_single_root_closed_form_pair():
    # numerator (4a+3) z^2 - (4a-4b1-2l-d+3) z - 4b1 at a=1/2, b1=1, l=0, d=3
    prob = _quadratic_case()
    configs = solve_roots(prob)
    got = sorted(c.roots[0] for c in configs)
    delta = np.sqrt(21.0)
    expected = sorted([(-1 - delta) / 5, (-1 + delta) / 5])
    assert np.allclose(got, expected, rtol=1e-12, atol=0)
    for c in configs:
        assert abs(bethe_residue(prob, c, 1)) < 1e-12


def test_single_root_matches_numerator_roots():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p, q, _ = random_cubic_problem(rng)
        prob = BetheProblem(p, q, 1)
        numer = np.trim_zeros(np.array(q[::-1]), "f")
        direct = sorted(z.real for z in np.roots(numer) if abs(z.imag) < 1e-12)
        direct = [z for z in direct if abs(prob.p_eval(z)) > 1e-6]
        try:
            got = sorted(c.roots[0] for c in solve_roots(prob))
        except NoRealSolution:
            assert not direct
            continue
        assert len(got) == len(direct)
        assert np.allclose(got, direct, rtol=1e-12, atol=1e-12)


def test_trivial_configuration():
    prob = _quadratic_case()
    prob = BetheProblem(prob.p, prob.q, 0)
    configs = solve_roots(prob)
    assert len(configs) == 1 and configs[0].n == 0
    w = derive_w(prob, configs[0])
    assert w.w == (0.0, 0.0, 0.0, 0.0)
    assert verify_polynomial_solution(prob, w, configs[0]) == 0.0


def test_top_coefficient_identity():
    # w3 = -n(n-1) p5 - n q4 for every configuration
    rng = np.random.default_rng(5)
    for _ in range(10):
        p, q, n = random_cubic_problem(rng, n=int(rng.integers(0, 4)))
        prob = BetheProblem(p, q, n)
        try:
            configs = solve_roots(prob, include_complex=True, budget=60)
        except NoRealSolution:
            continue
        for c in configs:
            w = derive_w(prob, c, residue_tol=1e-7)
            expected = -n * (n - 1) * p[5] - n * q[4]
            assert abs(w.w[3] - expected) < 1e-10 * (1 + abs(expected))


def test_planted_roots_verify_and_perturbation_sensitivity():
    rng = np.random.default_rng(9)
    for _ in range(10):
        p, q, _ = random_cubic_problem(rng)
        prob = BetheProblem(p, q, 2)
        try:
            configs = solve_roots(prob, include_complex=True, budget=60)
        except NoRealSolution:
            continue
        for c in configs:
            w = derive_w(prob, c, residue_tol=1e-7)
            assert verify_polynomial_solution(prob, w, c) < 1e-9
            bumped = BetheRoots(tuple(z + 1e-5 for z in c.roots))
            res = np.max(np.abs(residue_vector(prob, bumped)))
            assert res > 1e-7  # the gate actually reacts to wrong roots


def test_summation_identities_any_distinct_multiset():
    rng = np.random.default_rng(13)
    for n in (2, 3, 4, 5):
        for _ in range(5):
            z = rng.uniform(-3, 3, n) + 1j * rng.uniform(-1, 1, n)
            pairs = summation_identities(BetheRoots(tuple(z)))
            assert len(pairs) == 5
            for lhs, rhs in pairs:
                assert abs(lhs - rhs) < 1e-10 * (1 + abs(lhs) + abs(rhs))


def test_w_is_permutation_invariant():
    prob = _quadratic_case()
    prob = BetheProblem(prob.p, prob.q, 2)
    configs = solve_roots(prob, budget=80)
    for c in configs:
        w1 = derive_w(prob, c)
        w2 = derive_w(prob, BetheRoots(tuple(reversed(c.roots))))
        assert w1.w == w2.w


def test_canonical_order_and_root_container():
    roots = canonical_order([2.0, -1.0, 1.0 + 0j])
    assert roots == (-1.0, 1.0, 2.0)
    assert all(isinstance(z, float) for z in roots)
    br = BetheRoots((0.5 + 0.5j, 0.5 - 0.5j))
    assert not br.is_real
    with pytest.raises(ValueError):
        br.as_real()
    s1, s2, s3, e2, s21 = BetheRoots((1.0, 2.0, 3.0)).power_sums()
    assert (s1, s2, s3) == (6.0, 14.0, 36.0)
    assert e2 == 11.0 and s21 == 48.0


def test_duplicate_and_pole_guards():
    prob = _quadratic_case()
    with pytest.raises(DuplicateRoots):
        bethe_residue(prob, BetheRoots((0.3, 0.3 + 1e-12)), 1)
    # P vanishes at z = 0 and z = 1 for this problem
    with pytest.raises(PoleProximity):
        bethe_residue(prob, BetheRoots((1.0 + 1e-13, 0.3)), 2)


def test_problem_validation():
    with pytest.raises(ValueError):
        BetheProblem((0.0,) * 6, (1.0,) * 5, 2)  # P degree < 2 everywhere
    with pytest.raises(ValueError):
        BetheProblem((0.0,) * 5, (0.0,) * 5, 1)  # wrong length
    with pytest.raises(ValueError):
        WCoefficients((1.0, 2.0))


def test_residue_vector_scaled_smallness():
    rng = np.random.default_rng(21)
    for _ in range(10):
        p, q, n = random_cubic_problem(rng, n=int(rng.integers(2, 4)))
        prob = BetheProblem(p, q, n)
        try:
            configs = solve_roots(prob, include_complex=True, budget=60)
        except NoRealSolution:
            continue
        for c in configs:
            assert np.max(np.abs(residue_vector(prob, c))) < 1e-10
