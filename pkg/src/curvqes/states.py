"""Assembly of solved states: energies, closed-form wavefunctions, node counts.

A SolvedState bundles a completed potential spec with one admissible real root
configuration.  Energies come from the printed closed-form expressions; the
wavefunction is r^l (1+lam r^2)^(-a-n) exp(g) prod_i(1 - z_i(1+lam r^2)),
with g polynomial in 1+lam r^2 (family 1) or in its inverse (family 2).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridTooCoarse, NoRealSolution, UnsupportedCase
from .families import (
    NORMALIZABLE,
    apply_root_constraints,
    make_spec,
    normalizability,
    to_bethe_problem,
)
from .fba import BetheRoots, solve_roots
from .oscillator import SpaceConfig


@dataclass(frozen=True)
class SolvedState:
    """One algebraically solved level of a completed potential spec."""

    spec: object
    roots: BetheRoots
    energy: float
    nodes: int
    normalizable: bool
    reason: str

    @property
    def epsilon(self):
        """Offset in E = lam [epsilon + A - l(l+d-1)]."""
        sp = self.spec
        l, d = sp.space.l, sp.space.d
        return self.energy / sp.space.lam - sp.coupling_A + l * (l + d - 1)


def energy(spec, roots):
    """Closed-form energy for (spec, roots); spec need not be completed."""
    s1, s2, s3, _, _ = roots.power_sums()
    lam = spec.space.lam
    a, n = spec.gauge.a, spec.n
    b1, b2, b3 = spec.gauge.b_padded()
    l, d = spec.space.l, spec.space.d
    if spec.gauge.family == 1:
        val = (
            2 * (4 * a + 4 * n - 1) * s1
            + 8 * (a + n) * b1
            + 2 * (a + n) * (2 * l + d)
            - 2 * b1
            - l * (l + d - 1)
        )
    else:
        val = (
            2 * a * (4 * n + 2 * l + d)
            + 2 * n * (2 * n + 1)
            + 2 * b1 * (4 * a + 4 * n - 2 * l - d + 3 - 4 * s1)
            - 16 * b2 * (s2 - s1)
            - 24 * b3 * (s3 - s2)
            - l * (l + d - 1)
        )
    return lam * val


def wavefunction_derivs(state, r):
    """(psi, psi', psi'') of the closed-form state, exactly differentiated."""
    sp = state.spec
    sp.space.check_domain(r)
    r = np.asarray(r, dtype=float)
    lam = sp.space.lam
    a, n = sp.gauge.a, sp.n
    l = sp.space.l
    y = 1.0 + lam * r**2
    alpha = a + n
    b = sp.gauge.b
    if sp.gauge.family == 1:
        g = -sum(bj * y**j for j, bj in enumerate(b, 1))
        dg = -sum(j * bj * y ** (j - 1) for j, bj in enumerate(b, 1))
        d2g = -sum(j * (j - 1) * bj * y ** (j - 2) for j, bj in enumerate(b, 1))
    else:
        g = -sum(bj * y**-j for j, bj in enumerate(b, 1))
        dg = sum(j * bj * y ** (-j - 1) for j, bj in enumerate(b, 1))
        d2g = -sum(j * (j + 1) * bj * y ** (-j - 2) for j, bj in enumerate(b, 1))
    rho_c = np.array([1.0])
    for z in state.roots.as_real():
        rho_c = np.convolve(rho_c, np.array([-z, 1.0]))
    rho = np.polyval(rho_c, y)
    drho = np.polyval(np.polyder(rho_c), y) if n >= 1 else np.zeros_like(y)
    d2rho = np.polyval(np.polyder(rho_c, 2), y) if n >= 2 else np.zeros_like(y)
    amp = y**-alpha * np.exp(g)
    h = -alpha / y + dg
    damp = amp * h
    d2amp = amp * (h**2 + alpha / y**2 + d2g)
    f = amp * rho
    df = damp * rho + amp * drho
    d2f = d2amp * rho + 2 * damp * drho + amp * d2rho
    rl = r**l
    psi = rl * f
    dpsi = (l * rl / r) * f + 2 * lam * r * rl * df
    d2psi = (
        (l * (l - 1) * rl / r**2) * f
        + (4 * l + 2) * lam * rl * df
        + 4 * lam**2 * r**2 * rl * d2f
    )
    return psi, dpsi, d2psi


def wavefunction_eval(state, r):
    """Unnormalized closed-form wavefunction value(s)."""
    psi, _, _ = wavefunction_derivs(state, r)
    return psi


def _real_cubic_roots(shift, u, v):
    """Real roots of t^3 + u t + v = 0, shifted."""
    if abs(u) < 1e-300 and abs(v) < 1e-300:
        return [shift]
    disc = (v / 2) ** 2 + (u / 3) ** 3
    if disc >= 0:
        s = math.sqrt(disc)
        t = np.cbrt(-v / 2 + s) + np.cbrt(-v / 2 - s)
        return [shift + float(t)]
    # three real roots (casus irreducibilis)
    m = 2 * math.sqrt(-u / 3)
    theta = math.acos(max(-1.0, min(1.0, 3 * v / (u * m))))
    return [shift + m * math.cos((theta - 2 * math.pi * k) / 3) for k in range(3)]


def _bethe_numerator(spec):
    """Descending coefficients of the degree-(m+1) single-root polynomial."""
    a = spec.gauge.a
    b1, b2, b3 = spec.gauge.b_padded()
    l, d = spec.space.l, spec.space.d
    m = spec.gauge.m
    if spec.gauge.family == 1:
        lead = [4 * a + 3, -(4 * a - 4 * b1 - 2 * l - d + 3)]
        if m == 1:
            return np.array(lead + [-4 * b1])
        if m == 2:
            return np.array(lead + [-4 * (b1 - 2 * b2), -8 * b2])
        return np.array(lead + [-4 * (b1 - 2 * b2), -4 * (2 * b2 - 3 * b3), -12 * b3])
    tail = [-(4 * a + 4 * b1 + 3), 4 * a - 2 * l - d + 3]
    if m == 1:
        return np.array([4 * b1] + tail)
    if m == 2:
        return np.array([8 * b2, 4 * (b1 - 2 * b2)] + tail)
    return np.array([12 * b3, 4 * (2 * b2 - 3 * b3), 4 * (b1 - 2 * b2)] + tail)


def closed_form_z1(spec):
    """Real candidates for the single root z_1 from the printed closed forms.

    Quadratic cases use the discriminant branch pair, cubic cases the
    depressed-cubic expression; the two quartic cases fall back to a numeric
    companion-matrix solve of the printed quartic."""
    if spec.n != 1:
        raise UnsupportedCase("closed forms exist for n=1 only")
    a = spec.gauge.a
    b1, b2, b3 = spec.gauge.b_padded()
    l, d = spec.space.l, spec.space.d
    m = spec.gauge.m
    fam = spec.gauge.family
    coeffs = _bethe_numerator(spec)
    scale = np.max(np.abs(coeffs))
    if abs(coeffs[0]) < 1e-10 * scale:
        # leading coefficient degenerates; solve the lower-degree equation
        zs = np.roots(np.trim_zeros(coeffs, "f"))
        out = sorted(float(z.real) for z in zs if abs(z.imag) < 1e-10)
    elif fam == 1 and m == 1:
        disc = (
            4 * (a + b1) ** 2
            + 4 * (a + 2 * b1)
            + 1
            - (l + (d - 1) / 2) * (4 * a - 4 * b1 - l - (d - 5) / 2)
        )
        if disc < 0:
            raise NoRealSolution("discriminant is negative")
        delta = math.sqrt(disc)
        base = 2 * a - 2 * b1 - l - (d - 3) / 2
        out = sorted([(base - delta) / (4 * a + 3), (base + delta) / (4 * a + 3)])
    elif fam == 2 and m == 1:
        disc = 16 * (a - b1) ** 2 + 24 * a + 8 * (4 * l + 2 * d - 3) * b1 + 9
        if disc < 0:
            raise NoRealSolution("discriminant is negative")
        delta = math.sqrt(disc)
        out = sorted(
            [
                (4 * a + 4 * b1 + 3 - delta) / (8 * b1),
                (4 * a + 4 * b1 + 3 + delta) / (8 * b1),
            ]
        )
    elif fam == 1 and m == 2:
        k = 4 * a - 4 * b1 - 2 * l - d + 3
        shift = k / (3 * (4 * a + 3))
        u = 4 / (4 * a + 3) * (-b1 + 2 * b2 - k**2 / (12 * (4 * a + 3)))
        v = (
            -8
            / (4 * a + 3)
            * (b2 + k**3 / (108 * (4 * a + 3) ** 2) + k * (b1 - 2 * b2) / (6 * (4 * a + 3)))
        )
        out = sorted(_real_cubic_roots(shift, u, v))
    elif fam == 2 and m == 2:
        shift = -(b1 - 2 * b2) / (6 * b2)
        u = -1 / (8 * b2) * (4 * a + 4 * b1 + 3 + 2 * (b1 - 2 * b2) ** 2 / (3 * b2))
        v = (
            1
            / (8 * b2)
            * (
                4 * a - 2 * l - d + 3
                + 2 * (b1 - 2 * b2) ** 3 / (27 * b2**2)
                + (b1 - 2 * b2) * (4 * a + 4 * b1 + 3) / (6 * b2)
            )
        )
        out = sorted(_real_cubic_roots(shift, u, v))
    else:
        zs = np.roots(coeffs)
        out = sorted(float(z.real) for z in zs if abs(z.imag) < 1e-9 * (1 + abs(z)))
    if not out:
        raise NoRealSolution("no admissible real root")
    # drop near-duplicates from the numeric paths
    dedup = [out[0]]
    for z in out[1:]:
        if abs(z - dedup[-1]) > 1e-10 * (1 + abs(z)):
            dedup.append(z)
    return dedup


def analytic_node_count(spec, roots):
    """Roots z_i produce a wavefunction zero at 1 + lam r^2 = 1/z_i; count the
    ones landing inside the open coordinate domain."""
    lam = spec.space.lam
    count = 0
    for z in roots.as_real():
        if lam > 0 and 0.0 < z < 1.0:
            count += 1
        elif lam < 0 and z > 1.0:
            count += 1
    return count


def node_count(state, grid=None):
    """Sign changes of psi on the open domain (excluding r=0)."""
    if grid is None:
        return analytic_node_count(state.spec, state.roots)
    r = np.asarray(grid, dtype=float)
    r = r[r > 0]
    if r.size < 201:
        raise GridTooCoarse("need at least 201 interior points")
    psi = wavefunction_eval(state, r)
    sign_changes = int(np.sum(psi[:-1] * psi[1:] < 0))
    # a deep magnitude dip without a sign change hints at a missed pair of zeros
    mag = np.abs(psi)
    interior = mag[1:-1]
    dips = (interior < 1e-9 * mag.max()) & (interior <= mag[:-2]) & (interior <= mag[2:])
    if dips.any() and not np.any(psi[:-1] * psi[1:] <= 0):
        raise GridTooCoarse("magnitude dip suggests unresolved oscillation")
    return sign_changes


def to_one_dimensional(spec):
    """Map a d>=2 spec to the line: d -> 1, l -> parity p, symmetric domain."""
    if spec.space.d < 2:
        raise ValueError("spec is already one-dimensional")
    if spec.space.l not in (0, 1):
        raise ValueError("parity reduction needs l in {0, 1}")
    space = SpaceConfig(spec.space.lam, 1, spec.space.l)
    return make_spec(space, spec.gauge, spec.n)


def solve_states(space, gauge, n, budget=200):
    """Full pipeline: Bethe roots -> completed specs -> solved states.

    Returns the real-configuration states sorted by energy."""
    base = make_spec(space, gauge, n)
    prob = to_bethe_problem(base)
    configs = solve_roots(prob, budget=budget)
    states = []
    for roots in configs:
        spec = apply_root_constraints(base, roots)
        e_val = energy(spec, roots)
        verdict, reason = normalizability(spec)
        states.append(
            SolvedState(
                spec=spec,
                roots=roots,
                energy=e_val,
                nodes=analytic_node_count(spec, roots),
                normalizable=verdict == NORMALIZABLE,
                reason=reason,
            )
        )
    return sorted(states, key=lambda s: s.energy)
