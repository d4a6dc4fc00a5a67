"""State assembly: energies, closed-form roots, wavefunctions, node counts."""

import numpy as np
import pytest

from conftest import draw_normalizable_spec
from curvqes.errors import UnsupportedCase
from curvqes.families import GaugeParams, fixed_epsilon, make_spec, to_bethe_problem
from curvqes.fba import BetheRoots, residue_vector
from curvqes.oscillator import OscillatorSpec, SpaceConfig, oscillator_energy
from curvqes.states import (
    closed_form_z1,
    node_count,
    solve_states,
    to_one_dimensional,
    wavefunction_eval,
)


def _line_ground_state(family, lam, a, b):
    space = SpaceConfig(lam, 1, 0)
    states = solve_states(space, GaugeParams(family, a, b), 0)
    assert len(states) == 1
    return states[0]


def test_reference_energies_on_the_line():
    # family 1: (lam, a) = (1, 1/2) -> A=2, E=3; (-1, -1) -> A=2, E=12
    st = _line_ground_state(1, 1.0, 0.5, (1.0,))
    assert abs(st.spec.coupling_A - 2.0) < 1e-12 and abs(st.energy - 3.0) < 1e-12 * 3
    st = _line_ground_state(1, -1.0, -1.0, (1.0,))
    assert abs(st.spec.coupling_A - 2.0) < 1e-12 and abs(st.energy - 12.0) < 1e-12 * 12
    # family 2: (1, 1/2) -> A=10, E=9; (-1, 1/2) -> A=10, E=-9
    st = _line_ground_state(2, 1.0, 0.5, (1.0,))
    assert abs(st.spec.coupling_A - 10.0) < 1e-11 and abs(st.energy - 9.0) < 1e-11
    st = _line_ground_state(2, -1.0, 0.5, (1.0,))
    assert abs(st.spec.coupling_A - 10.0) < 1e-11 and abs(st.energy + 9.0) < 1e-11


def test_first_family_line_energy_formula():
    # n=0, d=1: E = lam (8 a b1 + 4 p a + 2 a - 2 b1 - p)
    rng = np.random.default_rng(31)
    for _ in range(10):
        lam = float(rng.choice([-1, 1]) * rng.uniform(0.5, 1.5))
        a = float(rng.uniform(-1.5, 1.2))
        b1 = float(rng.uniform(0.3, 1.5))
        p = int(rng.choice([0, 1]))
        if abs(4 * a + 3) < 0.3:
            continue
        st = solve_states(SpaceConfig(lam, 1, p), GaugeParams(1, a, (b1,)), 0)[0]
        expected = lam * (8 * a * b1 + 4 * p * a + 2 * a - 2 * b1 - p)
        assert abs(st.energy - expected) < 1e-12 * (1 + abs(expected))


def test_closed_form_single_root_example():
    # a=1/2, b1=1, l=0, d=3: z1 = (-1 +/- sqrt(21)) / 5
    spec = make_spec(SpaceConfig(1.0, 3, 0), GaugeParams(1, 0.5, (1.0,)), 1)
    zs = closed_form_z1(spec)
    delta = np.sqrt(21.0)
    assert np.allclose(sorted(zs), sorted([(-1 - delta) / 5, (-1 + delta) / 5]), rtol=1e-14)


def test_closed_form_single_root_against_companion_matrix():
    rng = np.random.default_rng(37)
    for family in (1, 2):
        for m in (1, 2, 3):
            for _ in range(8):
                space, gauge = draw_normalizable_spec(rng, family, m, 1)
                spec = make_spec(space, gauge, 1)
                prob = to_bethe_problem(spec)
                try:
                    zs = closed_form_z1(spec)
                except Exception:
                    continue
                for z in zs:
                    res = residue_vector(prob, BetheRoots((z,)))
                    assert np.max(np.abs(res)) < 1e-8 * (1 + abs(z))


def test_second_family_single_root_small_b_limit():
    # b1 -> 0: the finite branch tends to (4a - 2l - d + 3)/(4a + 3)
    a, l, d = 1.3, 1, 3
    spec = make_spec(SpaceConfig(1.0, d, l), GaugeParams(2, a, (1e-7,)), 1)
    zs = closed_form_z1(spec)
    limit = (4 * a - 2 * l - d + 3) / (4 * a + 3)
    assert min(abs(z - limit) for z in zs) < 1e-5
    with pytest.raises(UnsupportedCase):
        closed_form_z1(make_spec(SpaceConfig(1.0, d, l), GaugeParams(2, a, (1.0,)), 2))


def test_energy_offset_consistency():
    # family 2 pins the offset independently of the roots
    rng = np.random.default_rng(41)
    for _ in range(8):
        n = int(rng.integers(0, 3))
        space, gauge = draw_normalizable_spec(rng, 2, int(rng.integers(1, 4)), n)
        for st in solve_states(space, gauge, n):
            eps = fixed_epsilon(gauge, space)
            assert abs(st.epsilon - eps) < 1e-9 * (1 + abs(eps))


def test_baseline_reduction():
    # all b -> 0 turns family 1 into the solvable oscillator with
    # beta/lam = 2a + 2n; the level-n energy lands on oscillator level 2n
    for lam, a_vals in [(1.0, (0.6, 1.1)), (-1.0, (-1.4, -2.2))]:
        for a in a_vals:
            for n in (0, 1, 2):
                if lam * (2 * a + 2 * n) <= 0:
                    continue
                space = SpaceConfig(lam, 3, 0)
                states = solve_states(space, GaugeParams(1, a, (0.0,)), n)
                osc = OscillatorSpec(space, beta=lam * (2 * a + 2 * n))
                expected = oscillator_energy(osc, 2 * n)
                best = min(abs(st.energy - expected) for st in states)
                assert best < 1e-12 * (1 + abs(expected))


def test_parity_symmetry_is_exact():
    x = np.linspace(0.05, 0.8, 40)
    for family in (1, 2):
        for p in (0, 1):
            space = SpaceConfig(-1.0, 1, p)
            gauge = GaugeParams(family, -1.0 if family == 1 else 1.2, (1.0,))
            st = solve_states(space, gauge, 0)[0]
            left = wavefunction_eval(st, -x)
            right = wavefunction_eval(st, x)
            assert np.array_equal(left, (-1.0) ** p * right)


def test_node_counts_agree_with_grid():
    rng = np.random.default_rng(43)
    for family in (1, 2):
        for _ in range(6):
            n = int(rng.integers(0, 3))
            space, gauge = draw_normalizable_spec(rng, family, int(rng.integers(1, 3)), n)
            for st in solve_states(space, gauge, n):
                if not st.normalizable:
                    continue
                if space.lam > 0:
                    r_hi = 8.0 / np.sqrt(space.lam)
                    for z in st.roots.as_real():
                        if 0.0 < z < 1.0:
                            r_hi = max(r_hi, 1.5 * np.sqrt((1.0 / z - 1.0) / space.lam))
                    r = np.linspace(1e-3, r_hi, 6001)
                else:
                    r = np.linspace(1e-3, space.r_max * (1 - 1e-8), 6001)
                assert node_count(st, grid=r) == st.nodes


def test_states_sorted_with_node_ordering():
    # within one solve the lowest-energy normalizable state has the fewest nodes
    space = SpaceConfig(1.0, 3, 0)
    states = solve_states(space, GaugeParams(1, 0.5, (1.0,)), 1)
    assert [st.energy for st in states] == sorted(st.energy for st in states)
    norm = [st for st in states if st.normalizable]
    if len(norm) >= 2:
        assert norm[0].nodes <= norm[-1].nodes


def test_line_reduction_of_spec():
    spec = make_spec(SpaceConfig(1.0, 3, 1), GaugeParams(1, 0.5, (1.0,)), 1)
    line = to_one_dimensional(spec)
    assert line.space.d == 1 and line.space.l == 1
    assert line.gauge == spec.gauge and line.n == spec.n
    with pytest.raises(ValueError):
        to_one_dimensional(line)
