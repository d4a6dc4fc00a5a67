"""Functional Bethe ansatz engine for t=3 polynomial-coefficient ODEs.

Handles second-order equations P(z) phi'' + Q(z) phi' + W(z) phi = 0 with
deg P <= 5, deg Q <= 4, deg W <= 3, and determines when they admit a monic
polynomial solution phi(z) = prod_i (z - z_i) of degree n.  The roots z_i
must satisfy a system of residue conditions; once they do, the coefficients
of W follow from power sums of the roots.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .errors import (
    DuplicateRoots,
    InvalidRoots,
    NonConvergence,
    NoRealSolution,
    PoleProximity,
)

# Distinctness and pole-avoidance tolerances (relative, scaled by magnitude).
DELTA_DISTINCT = 1e-8
DELTA_POLE = 1e-9
RESIDUE_TOL = 1e-10
DEFAULT_BUDGET = 200


@dataclass(frozen=True)
class BetheProblem:
    """Coefficients of P (degree <= 5) and Q (degree <= 4) plus target degree n."""

    p: tuple
    q: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(c) for c in self.p))
        object.__setattr__(self, "q", tuple(float(c) for c in self.q))
        if len(self.p) != 6:
            raise ValueError("p must hold coefficients p0..p5")
        if len(self.q) != 5:
            raise ValueError("q must hold coefficients q0..q4")
        if self.n < 0:
            raise ValueError("target degree n must be non-negative")
        if not any(c != 0.0 for c in self.p[2:]):
            raise ValueError("P must have degree >= 2 somewhere on the region")

    def p_eval(self, z):
        return _horner(self.p, z)

    def q_eval(self, z):
        return _horner(self.q, z)

    def p_deriv(self, z):
        return _horner(_deriv(self.p), z)

    def q_deriv(self, z):
        return _horner(_deriv(self.q), z)


@dataclass(frozen=True)
class BetheRoots:
    """A candidate root configuration, stored in canonical order."""

    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", canonical_order(self.roots))

    @property
    def n(self):
        return len(self.roots)

    @property
    def is_real(self):
        return all(abs(complex(z).imag) < 1e-10 for z in self.roots)

    def as_real(self):
        if not self.is_real:
            raise ValueError("configuration has complex roots")
        return tuple(float(complex(z).real) for z in self.roots)

    def power_sums(self):
        """Return (S1, S2, S3, e2, s21) with e2 = sum_{i<j} z_i z_j and
        s21 = sum_{i != j} z_i^2 z_j."""
        z = np.asarray(self.roots)
        s1 = z.sum()
        s2 = (z**2).sum()
        s3 = (z**3).sum()
        e2 = (s1**2 - s2) / 2
        s21 = s2 * s1 - s3
        return s1, s2, s3, e2, s21


@dataclass(frozen=True)
class WCoefficients:
    """Coefficients w0..w3 of the zeroth-order polynomial W(z)."""

    w: tuple

    def __post_init__(self):
        if len(self.w) != 4:
            raise ValueError("w must hold coefficients w0..w3 (t=3)")
        object.__setattr__(self, "w", tuple(self.w))

    def eval(self, z):
        return _horner(self.w, z)


def _horner(coeffs, z):
    acc = 0.0 * z if isinstance(z, np.ndarray) else 0.0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _deriv(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0.0,)


def canonical_order(roots):
    """Sort by ascending real part, then imaginary part, casting real values
    stored as complex back to float."""
    out = []
    for z in roots:
        zc = complex(z)
        out.append(float(zc.real) if zc.imag == 0.0 else zc)
    return tuple(sorted(out, key=lambda z: (complex(z).real, complex(z).imag)))


def _pole_scale(prob, z):
    m = max(1.0, max(abs(c) for c in prob.p))
    return m * max(1.0, abs(z)) ** 5


def _check_distinct(roots):
    z = np.asarray(roots)
    n = len(z)
    if n < 2:
        return
    scale = 1.0 + np.max(np.abs(z))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= DELTA_DISTINCT * scale:
                raise DuplicateRoots(f"roots {i} and {j} coincide within tolerance")


def bethe_residue(prob, roots, i):
    """Residue condition for root i (1-based): sum_{j != i} 2/(z_i - z_j)
    + Q(z_i)/P(z_i).  Vanishes iff root i satisfies its Bethe equation."""
    if not 1 <= i <= roots.n:
        raise IndexError(f"root index {i} out of range 1..{roots.n}")
    _check_distinct(roots.roots)
    z = np.asarray(roots.roots)
    zi = z[i - 1]
    pz = prob.p_eval(zi)
    if abs(pz) < DELTA_POLE * _pole_scale(prob, zi):
        raise PoleProximity(f"P(z_{i}) = {pz} too close to zero")
    others = np.delete(z, i - 1)
    return (2.0 / (zi - others)).sum() + prob.q_eval(zi) / pz


def residue_vector(prob, roots):
    return np.array([bethe_residue(prob, roots, i) for i in range(1, roots.n + 1)])


def _residue_system(prob, z):
    """Vectorized residue system over a batch of configurations z (S, n)."""
    n = z.shape[1]
    eye = np.eye(n, dtype=bool)
    diff = np.where(eye[None, :, :], 1.0, z[:, :, None] - z[:, None, :])
    pair = np.where(eye[None, :, :], 0.0, 2.0 / diff)
    f = pair.sum(axis=2) + _horner(prob.q, z) / _horner(prob.p, z)
    return f


def _residue_jacobian(prob, z):
    n = z.shape[1]
    eye = np.eye(n, dtype=bool)
    diff = np.where(eye[None, :, :], 1.0, z[:, :, None] - z[:, None, :])
    inv2 = np.where(eye[None, :, :], 0.0, 2.0 / diff**2)
    pz = _horner(prob.p, z)
    qz = _horner(prob.q, z)
    dp = _horner(_deriv(prob.p), z)
    dq = _horner(_deriv(prob.q), z)
    diag = -inv2.sum(axis=2) + (dq * pz - qz * dp) / pz**2
    jac = inv2.copy()
    jac[:, eye] = diag
    return jac


def _poly_system(prob, z):
    """Pole-free form of the Bethe conditions over a batch z of shape (S, n):
    G_i = P(z_i) phi''(z_i) + Q(z_i) phi'(z_i) with phi(z) = prod_j (z - z_j).

    Elementwise G = P * phi' * F, so zeros with distinct roots and
    P(z_i) != 0 are exactly the residue-system zeros, but G is polynomial in
    the roots: iterates cannot shrink the merit by escaping to infinity."""
    n = z.shape[1]
    eye = np.eye(n, dtype=bool)[None]
    diff = np.where(eye, 1.0, z[:, :, None] - z[:, None, :])
    inv = np.where(eye, 0.0, 1.0 / diff)
    pi = np.where(eye, 1.0, diff).prod(axis=2)  # phi'(z_i)
    t = inv.sum(axis=2)  # phi''(z_i) / (2 phi'(z_i))
    return pi * (2.0 * _horner(prob.p, z) * t + _horner(prob.q, z))


def _poly_jacobian(prob, z):
    """Exact Jacobian of _poly_system, using d phi / d z_k = -phi(z)/(z - z_k)."""
    n = z.shape[1]
    eye = np.eye(n, dtype=bool)[None]
    diff = np.where(eye, 1.0, z[:, :, None] - z[:, None, :])
    inv = np.where(eye, 0.0, 1.0 / diff)
    pi = np.where(eye, 1.0, diff).prod(axis=2)
    t = inv.sum(axis=2)
    u = (inv**2).sum(axis=2)
    pz = _horner(prob.p, z)
    qz = _horner(prob.q, z)
    dp = _horner(_deriv(prob.p), z)
    dq = _horner(_deriv(prob.q), z)
    # off-diagonal (i, k): P phi_k'' + Q phi_k' at z_i, phi_k = phi/(z - z_k)
    jac = pi[:, :, None] * inv * (
        2.0 * pz[:, :, None] * (t[:, :, None] - inv) + qz[:, :, None]
    )
    # diagonal: (P phi'' + Q phi')' at z_i
    jac[:, np.eye(n, dtype=bool)] = pi * (
        2.0 * dp * t + 3.0 * pz * (t**2 - u) + dq + 2.0 * qz * t
    )
    return jac


def _newton_batch(prob, starts, max_iter=400, tol=1e-13):
    """Damped Newton for a batch of starting points.

    Steps and line-search merit use the pole-free polynomial system;
    convergence is declared on the residue system itself.  Returns the
    converged configurations (one complex row per configuration)."""
    z = np.array(starts, dtype=complex)
    n = z.shape[1]
    active = np.ones(z.shape[0], dtype=bool)
    done = []
    ftol = tol * (1.0 + max(abs(c) for c in prob.q))
    best = np.full(z.shape[0], np.inf)
    stale = np.zeros(z.shape[0], dtype=int)
    for _ in range(max_iter):
        if not active.any():
            break
        za = z[active]
        # drop collided, runaway, or non-finite iterates
        bad = ~np.isfinite(za).all(axis=1)
        bad |= np.abs(za).max(axis=1) > 1e6
        if n > 1:
            dmin = np.min(
                np.abs(
                    np.where(
                        np.eye(n, dtype=bool)[None],
                        np.inf,
                        za[:, :, None] - za[:, None, :],
                    )
                ),
                axis=(1, 2),
            )
            bad |= dmin < 1e-13 * (1.0 + np.abs(za).max(axis=1))
        idx = np.flatnonzero(active)
        active[idx[bad]] = False
        za = za[~bad]
        idx = idx[~bad]
        if za.size == 0:
            continue
        # convergence test on the residue system, guarded against poles of Q/P
        pz = np.abs(_horner(prob.p, za))
        scale = max(1.0, max(abs(c) for c in prob.p)) * np.maximum(1.0, np.abs(za)) ** 5
        clear = (pz > 1e-13 * scale).all(axis=1)
        fn_res = np.full(za.shape[0], np.inf)
        if clear.any():
            fn_res[clear] = np.linalg.norm(_residue_system(prob, za[clear]), axis=1)
        conv = fn_res < ftol
        for row in za[conv]:
            done.append(row.copy())
        active[idx[conv]] = False
        za = za[~conv]
        idx = idx[~conv]
        if za.size == 0:
            continue
        g = _poly_system(prob, za)
        gn = np.linalg.norm(g, axis=1)
        # cull rows whose merit stopped improving a while ago
        imp = gn < 0.999 * best[idx]
        best[idx[imp]] = gn[imp]
        stale[idx[imp]] = 0
        stale[idx[~imp]] += 1
        give_up = stale[idx] > 60
        if give_up.any():
            active[idx[give_up]] = False
            za = za[~give_up]
            idx = idx[~give_up]
            g = g[~give_up]
            gn = gn[~give_up]
            if za.size == 0:
                continue
        jac = _poly_jacobian(prob, za)
        try:
            step = np.linalg.solve(jac, -g[..., None])[..., 0]
        except np.linalg.LinAlgError:
            active[idx] = False
            continue
        # halve each row's step until its own merit decreases
        alpha = np.ones(za.shape[0])
        znew = za + step
        for _ in range(30):
            with np.errstate(all="ignore"):
                gnew = np.linalg.norm(_poly_system(prob, znew), axis=1)
            worse = (~np.isfinite(gnew) | (gnew >= gn)) & (alpha > 1e-9)
            if not worse.any():
                break
            alpha[worse] *= 0.5
            znew = za + alpha[:, None] * step
        z[idx] = znew
    return done


def _numerator_zeros(prob):
    numer = np.trim_zeros(np.array(prob.q[::-1]), "f")
    return np.roots(numer) if len(numer) > 1 else np.array([])


def _natural_width(prob):
    """Half-width of the start box, from the root scales of Q and P."""
    width = 2.5
    pl = np.trim_zeros(np.array(prob.p[::-1]), "f")
    for zs in (_numerator_zeros(prob), np.roots(pl) if len(pl) > 1 else []):
        if len(zs):
            width = max(width, 1.5 * float(np.max(np.abs(zs))))
    return width


def _start_points(prob, budget):
    """Deterministic start schedule.

    Blocks: seeded combinations of the single-root numerator zeros with
    log-spread magnitudes, Halton points over a real box, conjugate-symmetric
    Halton points for every pair count, and fully complex Halton points.  The
    box half-width adapts to the natural root scales of the problem."""
    n = prob.n
    starts = []
    seeds = _numerator_zeros(prob)
    width = _natural_width(prob)
    # combinations of the numerator zeros, log-spread in magnitude: root
    # configurations tend to stretch multiplicatively as the degree grows
    if seeds.size:
        rng = np.random.default_rng(20240815)
        for _ in range(budget):
            pick = rng.integers(0, seeds.size, size=n)
            spread = np.exp(0.8 * rng.standard_normal(n))
            jitter = 0.03 * width * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
            starts.append(seeds[pick] * spread + jitter)
            if len(starts) >= budget // 4:
                break
        # geometric ladders anchored on each zero: extremal configurations
        # spread multiplicatively away from a single zero of the numerator
        if n >= 2:
            for s in seeds:
                for ratio in (1.6, 2.3, 3.3):
                    for shift in range(n):
                        starts.append(s * ratio ** (np.arange(n) - shift + 0.0))
    remaining = max(budget - len(starts), 3)
    n_real = remaining // 3
    n_sym = remaining // 3 if n >= 2 else 0
    n_cplx = remaining - n_real - n_sym
    h_real = qmc.Halton(d=n, scramble=False).random(n_real + 1)[1:]
    for row in h_real:
        starts.append(width * (2.0 * row - 1.0) + 0j)
    if n_sym:
        # conjugate-symmetric starts: configurations of a real-coefficient
        # problem come in conjugate pairs, so sample those shapes directly,
        # cycling through every possible number of pairs
        pair_counts = list(range(1, n // 2 + 1))
        h_sym = qmc.Halton(d=n, scramble=False).random(n_sym + 1)[1:]
        for k, row in enumerate(h_sym):
            pairs = pair_counts[k % len(pair_counts)]
            re = width * (2.0 * row[:pairs] - 1.0)
            im = width * (0.95 * row[pairs : 2 * pairs] + 0.05)
            tail = width * (2.0 * row[2 * pairs :] - 1.0) + 0j
            starts.append(np.concatenate([re + 1j * im, re - 1j * im, tail]))
    h_cplx = qmc.Halton(d=2 * n, scramble=False).random(n_cplx + 1)[1:]
    for row in h_cplx:
        starts.append(width * ((2.0 * row[:n] - 1.0) + 1j * (row[n:] - 0.5)))
    return starts[:budget]


def _admissible(prob, z):
    """Check distinctness and pole clearance for a converged configuration."""
    n = len(z)
    scale = 1.0 + np.max(np.abs(z)) if n else 1.0
    for i in range(n):
        if abs(_horner(prob.p, z[i])) < DELTA_POLE * _pole_scale(prob, z[i]):
            return False
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= DELTA_DISTINCT * scale:
                return False
    return True


def _polish(prob, z):
    """A few undamped Newton steps to drive a converged configuration to
    machine precision (also collapses near-duplicate copies)."""
    z = z[None, :].astype(complex)
    for _ in range(4):
        f = _residue_system(prob, z)
        jac = _residue_jacobian(prob, z)
        try:
            step = np.linalg.solve(jac, -f[..., None])[..., 0]
        except np.linalg.LinAlgError:
            break
        if not np.isfinite(step).all():
            break
        z = z + step
    return z[0]


def _same_multiset(a, b, tol):
    """Greedy nearest matching; robust to sort-order flips between
    near-coincident values."""
    if len(a) != len(b):
        return False
    free = list(range(len(b)))
    for x in a:
        j = min(free, key=lambda k: abs(b[k] - x), default=None)
        if j is None or abs(b[j] - x) >= tol:
            return False
        free.remove(j)
    return True


def _dedup(configs):
    kept = []
    for cfg in configs:
        key = np.asarray(canonical_order(cfg), dtype=complex)
        scale = 1.0 + np.max(np.abs(key)) if key.size else 1.0
        tol = 1e3 * DELTA_DISTINCT * scale
        if not any(_same_multiset(k, key, tol) for k in kept):
            kept.append(key)
    return kept


def _extension_guesses(prob):
    """Candidate positions for one extra root, used to grow configurations of
    degree n-1 into starts for degree n."""
    width = _natural_width(prob)
    guesses = [f * s for s in _numerator_zeros(prob) for f in (0.45, 1.07, 2.3, 4.9)]
    guesses += [0.13 * width, -0.13 * width, 0.61 * width, -0.61 * width]
    return guesses


def _settle(prob, raw, budget):
    """Polish, conjugate-augment, filter, and deduplicate converged rows."""
    configs = [_polish(prob, np.asarray(c)) for c in raw]
    # real coefficients: the conjugate of any configuration also solves
    configs += [np.conj(c) for c in configs]
    return _dedup([c for c in configs if _admissible(prob, c)])


def solve_roots(prob, include_complex=False, budget=DEFAULT_BUDGET):
    """Find all root configurations of the Bethe system.

    n=0 yields the empty configuration; n=1 reduces to the real zeros of the
    numerator polynomial Q(z); n>=2 uses multi-start damped Newton iteration,
    cascading up from lower degrees: configurations of the degree-(k-1) and
    degree-(k-2) problems, extended by one root or by a conjugate pair, seed
    the degree-k search alongside the quasirandom schedule.  Real
    configurations are returned by default; include_complex adds the
    complex-conjugate-paired ones."""
    n = prob.n
    if n == 0:
        return [BetheRoots(())]
    if n == 1:
        numer = np.trim_zeros(np.array(prob.q[::-1]), "f")
        if len(numer) < 2:
            raise NoRealSolution("single-root numerator is constant")
        zeros = np.roots(numer)
        configs = _dedup(
            [np.array([z]) for z in zeros if _admissible(prob, np.array([z]))]
        )
    else:
        guesses = _extension_guesses(prob)
        prev2 = [np.array([], dtype=complex)]
        prev1 = [np.array([z]) for z in _numerator_zeros(prob)]
        configs = []
        for k in range(2, n + 1):
            sub = BetheProblem(prob.p, prob.q, k)
            b_k = budget if k == n else max(80, budget // 2)
            starts = _start_points(sub, b_k)
            # growing the degree often stretches the whole configuration, so
            # extend scaled copies of the parents as well
            for c in prev1:
                for g in guesses:
                    for f in (1.0, 1.45, 2.0):
                        starts.append(np.append(f * c, f * g))
            for c in prev2:
                for g in guesses:
                    for im_f in (0.12, 0.35, 0.8):
                        im = im_f * (1.0 + abs(g))
                        for f in (1.0, 1.6):
                            starts.append(
                                np.append(f * c, [f * (g + 1j * im), f * (g - 1j * im)])
                            )
            configs = _settle(sub, _newton_batch(sub, starts), b_k)
            prev2, prev1 = prev1, configs
        if not configs:
            raise NonConvergence(f"no configuration converged within {budget} starts")
    real = [c for c in configs if np.max(np.abs(c.imag)) < 1e-8 * (1 + np.max(np.abs(c)))]
    out = [BetheRoots(tuple(c.real)) for c in real]
    if include_complex:
        cplx = [
            c for c in configs if np.max(np.abs(c.imag)) >= 1e-8 * (1 + np.max(np.abs(c)))
        ]
        out += [BetheRoots(tuple(c)) for c in cplx]
    elif not out:
        raise NoRealSolution("every converged configuration is complex")
    return out


def derive_w(prob, roots, residue_tol=1e-8):
    """Coefficients of W(z) from the converged roots, via power sums."""
    res = residue_vector(prob, roots) if roots.n else np.array([])
    if res.size and np.max(np.abs(res)) > residue_tol:
        raise InvalidRoots(f"max residue {np.max(np.abs(res)):.3e} exceeds tolerance")
    n = roots.n
    p, q = prob.p, prob.q
    s1, s2, s3, e2, s21 = roots.power_sums()
    c54 = 2 * (n - 1) * p[5] + q[4]
    c43 = 2 * (n - 1) * p[4] + q[3]
    c32 = 2 * (n - 1) * p[3] + q[2]
    w3 = -n * (n - 1) * p[5] - n * q[4]
    w2 = -c54 * s1 - n * (n - 1) * p[4] - n * q[3]
    w1 = -c54 * s2 - 2 * p[5] * e2 - c43 * s1 - n * (n - 1) * p[3] - n * q[2]
    w0 = (
        -c54 * s3
        - 2 * p[5] * s21
        - c43 * s2
        - 2 * p[4] * e2
        - c32 * s1
        - n * (n - 1) * p[2]
        - n * q[1]
    )
    return WCoefficients((w0, w1, w2, w3))


def verify_polynomial_solution(prob, w, roots, samples=50):
    """Scaled max residual of P phi'' + Q phi' + W phi over sample points,
    with phi the monic polynomial built from the roots."""
    if samples < 10:
        raise ValueError("need at least 10 sample points")
    phi = np.poly(np.asarray(roots.roots)) if roots.n else np.array([1.0])
    dphi = np.polyder(phi) if roots.n else np.array([0.0])
    d2phi = np.polyder(phi, 2) if roots.n >= 2 else np.array([0.0])
    zs = np.linspace(-2.0, 2.0, samples).astype(complex)
    val = (
        _horner(prob.p, zs) * np.polyval(d2phi, zs)
        + _horner(prob.q, zs) * np.polyval(dphi, zs)
        + w.eval(zs) * np.polyval(phi, zs)
    )
    scale = 1.0 + max(
        max(abs(c) for c in prob.p),
        max(abs(c) for c in prob.q),
        max(abs(c) for c in w.w),
        max(abs(c) for c in phi),
    )
    return float(np.max(np.abs(val)) / scale)


def summation_identities(roots):
    """Evaluate both sides of the five double-sum identities used to reduce
    the pole expansion; returns a list of (lhs, rhs) pairs."""
    z = np.asarray(roots.roots)
    n = len(z)
    s1, s2, s3, e2, s21 = roots.power_sums()
    pairs = []
    for power, rhs in [
        (0, 0.0),
        (1, n * (n - 1) / 2.0),
        (2, (n - 1) * s1),
        (3, (n - 1) * s2 + e2),
        (4, (n - 1) * s3 + s21),
    ]:
        lhs = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    lhs += z[i] ** power / (z[i] - z[j])
        pairs.append((lhs, rhs))
    return pairs
