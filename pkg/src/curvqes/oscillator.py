"""Exactly solvable oscillator on the constant-curvature space.

The radial problem depends on the curvature-like parameter lambda, the
dimension d, and the angular quantum number l (a parity exponent p in {0,1}
when d=1).  Bound states are Jacobi polynomials times a power of
1 + lambda r^2; everything here is evaluated through the three-term
recurrence in the real argument 1 + 2 lambda r^2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySpectrum, LevelOutOfRange


@dataclass(frozen=True)
class SpaceConfig:
    """Curvature parameter, dimension, and angular quantum number."""

    lam: float
    d: int
    l: int

    def __post_init__(self):
        if self.lam == 0.0:
            raise ValueError("lambda must be nonzero")
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if self.l < 0:
            raise ValueError("angular quantum number must be >= 0")
        if self.d == 1 and self.l not in (0, 1):
            raise ValueError("for d=1 the parity exponent must be 0 or 1")

    @property
    def r_max(self):
        """Upper end of the coordinate range (inf for lam > 0)."""
        return math.inf if self.lam > 0 else 1.0 / math.sqrt(-self.lam)

    def check_domain(self, r):
        r = np.asarray(r, dtype=float)
        ok = np.abs(r) < self.r_max if self.d == 1 else (r > 0) & (r < self.r_max)
        if not np.all(ok & (1.0 + self.lam * r**2 > 0)):
            raise DomainError("coordinate outside the allowed range")


@dataclass(frozen=True)
class OscillatorSpec:
    """Baseline oscillator: beta is primary, the potential strength A derived."""

    space: SpaceConfig
    beta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def coupling(self):
        """A = (beta/lambda)(beta/lambda + 1)."""
        rho = self.beta / self.space.lam
        return rho * (rho + 1.0)


def jacobi_eval(n, alpha, beta, x):
    """Jacobi polynomial P_n^(alpha, beta)(x) by forward recurrence."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    pm1 = np.ones_like(x)
    p = (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        denom = 2 * k * (k + alpha + beta) * (2 * k + alpha + beta - 2)
        b1 = (2 * k + alpha + beta - 1) * (
            (2 * k + alpha + beta) * (2 * k + alpha + beta - 2) * x
            + alpha**2 - beta**2
        )
        c1 = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + alpha + beta)
        p, pm1 = (b1 * p - c1 * pm1) / denom, p
    return p


def jacobi_deriv(n, alpha, beta, x, order=1):
    """Derivative of the Jacobi polynomial via the parameter-shift identity."""
    if order == 0:
        return jacobi_eval(n, alpha, beta, x)
    if n < order:
        return np.zeros_like(np.asarray(x, dtype=float))
    fac = 1.0
    for j in range(order):
        fac *= (n + alpha + beta + 1 + j) / 2.0
    return fac * jacobi_eval(n - order, alpha + order, beta + order, x)


def gegenbauer_eval(n, alpha, x):
    """Gegenbauer polynomial C_n^(alpha)(x) by forward recurrence."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    pm1 = np.ones_like(x)
    p = 2 * alpha * x
    for k in range(2, n + 1):
        p, pm1 = (2 * (k + alpha - 1) * x * p - (k + 2 * alpha - 2) * pm1) / k, p
    return p


def v0_eval(spec, r):
    """Baseline potential lam*A - lam*A/(1 + lam r^2)."""
    spec.space.check_domain(r)
    lam = spec.space.lam
    a_cpl = spec.coupling
    y = 1.0 + lam * np.asarray(r, dtype=float) ** 2
    return lam * a_cpl - lam * a_cpl / y


def allowed_levels(spec):
    """Range of normalizable levels: (0, n_max) tuple, n_max=None if unbounded."""
    lam, d = spec.space.lam, spec.space.d
    if lam < 0:
        return (0, None)
    rho = spec.beta / lam
    n_max = math.ceil(rho - (d + 1) / 2)
    if n_max < 0:
        raise EmptySpectrum("no normalizable level for these parameters")
    return (0, n_max)


def oscillator_energy(spec, n):
    """E_n = beta(2n + d) - lam n(n + d - 1)."""
    if n < 0:
        raise LevelOutOfRange("n must be >= 0")
    lo, hi = allowed_levels(spec)
    if hi is not None and n > hi:
        raise LevelOutOfRange(f"n={n} exceeds n_max={hi}")
    lam, d = spec.space.lam, spec.space.d
    return spec.beta * (2 * n + d) - lam * n * (n + d - 1)


def oscillator_wavefunction(spec, n_r, r):
    """Unnormalized radial eigenfunction with n = 2 n_r + l."""
    psi, _, _ = oscillator_derivs(spec, n_r, r)
    return psi


def oscillator_derivs(spec, n_r, r):
    """Radial eigenfunction and its first two derivatives in closed form."""
    space = spec.space
    space.check_domain(r)
    r = np.asarray(r, dtype=float)
    lam, d, l = space.lam, space.d, space.l
    n = 2 * n_r + l
    lo, hi = allowed_levels(spec)
    if hi is not None and n > hi:
        raise LevelOutOfRange(f"n={n} exceeds n_max={hi}")
    alpha = l + (d - 2) / 2
    beta_j = -spec.beta / lam - 0.5
    c = spec.beta / (2 * lam)
    y = 1.0 + lam * r**2
    x = 1.0 + 2 * lam * r**2
    jac = jacobi_eval(n_r, alpha, beta_j, x)
    dj = jacobi_deriv(n_r, alpha, beta_j, x, 1)
    d2j = jacobi_deriv(n_r, alpha, beta_j, x, 2)
    u = y**-c
    du = -2 * lam * r * c * y ** (-c - 1)
    d2u = -2 * lam * c * y ** (-c - 1) + 4 * lam**2 * r**2 * c * (c + 1) * y ** (-c - 2)
    jr = 4 * lam * r * dj
    jrr = 4 * lam * dj + 16 * lam**2 * r**2 * d2j
    f = u * jac
    df = du * jac + u * jr
    d2f = d2u * jac + 2 * du * jr + u * jrr
    rl = r**l
    psi = rl * f
    dpsi = (l * rl / r) * f + rl * df
    d2psi = (l * (l - 1) * rl / r**2) * f + 2 * (l * rl / r) * df + rl * d2f
    return psi, dpsi, d2psi
