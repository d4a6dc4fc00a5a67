"""Hidden-symmetry cross-check for the first member of each family.

The transformed ODE of the m=1 potentials is an element of the enveloping
algebra of first-order operators preserving polynomials of degree <= n.  The
(n+1)x(n+1) matrices in the monomial basis give an independent route to the
admissible spectral values: the energy offset for family 1, the potential
parameter A for family 2.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig

from .errors import NoRealSolution
from .families import make_spec, to_bethe_problem, unpack_w
from .fba import derive_w, solve_roots
from .oscillator import SpaceConfig


def generators(n):
    """Raising, weight, and lowering matrices on the basis (1, z, ..., z^n).

    Column k holds the image of z^k: Jp z^k = (k-n) z^(k+1), J0 z^k =
    (k - n/2) z^k, Jm z^k = k z^(k-1)."""
    dim = n + 1
    jp = np.zeros((dim, dim))
    j0 = np.zeros((dim, dim))
    jm = np.zeros((dim, dim))
    for k in range(dim):
        j0[k, k] = k - n / 2
        if k + 1 <= n:
            jp[k + 1, k] = k - n
        if k - 1 >= 0:
            jm[k - 1, k] = k
    return jp, j0, jm


@dataclass(frozen=True)
class Sl2Rep:
    n: int

    @property
    def matrices(self):
        return generators(self.n)


def family1_operator_matrix(n, a, b1, l, d):
    """Matrix whose eigenvalues are the admissible energy offsets (first type)."""
    jp, j0, jm = generators(n)
    const = (
        -4 * a**2
        + 8 * a * b1
        + 2 * a * (2 * l + d - 1)
        - 2 * b1
        - n * (4 * a - 4 * b1 - 2 * l - d + 3 + 2 * n)
    )
    return (
        4 * jp @ j0
        - 4 * jp @ jm
        + 2 * (4 * a + 1 + 3 * n) * jp
        - 2 * (4 * a - 4 * b1 - 2 * l - d + 3 + 2 * n) * j0
        - 8 * b1 * jm
        + const * np.eye(n + 1)
    )


def family2_operator_matrix(n, a, b1, l, d):
    """Matrix whose eigenvalues are the admissible values of A (second type)."""
    jp, j0, jm = generators(n)
    const = (
        2 * a * (2 * a + 1)
        + 2 * b1 * (4 * a - 2 * l - d + 3)
        + n * (4 * a + 4 * b1 + 3 + 2 * n)
    )
    return (
        4 * jp @ jm
        - 4 * j0 @ jm
        - 8 * b1 * jp
        + 2 * (4 * a + 4 * b1 + 3 + 2 * n) * j0
        - 2 * (4 * a - 2 * l - d + 3 + n) * jm
        + const * np.eye(n + 1)
    )


def _bethe_values(family, n, a, b1, l, d, budget=400):
    """Spectral values and monic polynomial coefficient vectors from the root
    route, over all configurations (real and complex)."""
    from .families import GaugeParams

    # the z-space problem does not involve the curvature parameter
    space = SpaceConfig(1.0, d, l)
    gauge = GaugeParams(family, a, (b1,))
    spec = make_spec(space, gauge, n)
    prob = to_bethe_problem(spec)
    configs = solve_roots(prob, include_complex=True, budget=budget)
    values, vectors = [], []
    for roots in configs:
        w = derive_w(prob, roots, residue_tol=1e-7)
        unpacked = unpack_w(spec, w)
        values.append(unpacked["epsilon"] if family == 1 else unpacked["A"])
        coeffs = np.poly(np.asarray(roots.roots)) if roots.n else np.array([1.0])
        vectors.append(coeffs[::-1])  # ascending monomial order
    return values, vectors


def cross_check(family, n, a, b1, l, d, budget=400):
    """Compare matrix eigenpairs with root-route values.

    Returns a report dict: per-pair discrepancies after greedy nearest
    matching, the number of unmatched eigenvalues, and whether complex pairs
    were seen on either side."""
    mat = (
        family1_operator_matrix(n, a, b1, l, d)
        if family == 1
        else family2_operator_matrix(n, a, b1, l, d)
    )
    evals, evecs = eig(mat)
    try:
        bvals, bvecs = _bethe_values(family, n, a, b1, l, d, budget=budget)
    except NoRealSolution:
        bvals, bvecs = [], []
    remaining = list(range(len(evals)))
    value_diffs, vector_diffs = [], []
    for bv, bvec in zip(bvals, bvecs):
        if not remaining:
            break
        j = min(remaining, key=lambda k: abs(evals[k] - bv))
        remaining.remove(j)
        value_diffs.append(abs(evals[j] - bv))
        ev = evecs[:, j]
        pad = np.zeros(len(ev), dtype=complex)
        pad[: len(bvec)] = bvec
        # compare up to scale: project out the common direction
        ev_n = ev / ev[np.argmax(np.abs(ev))]
        pv_n = pad / pad[np.argmax(np.abs(pad))]
        vector_diffs.append(float(np.max(np.abs(ev_n - pv_n))))
    scale = 1.0 + max((abs(v) for v in evals), default=0.0)
    return {
        "eigenvalues": evals,
        "bethe_values": np.asarray(bvals),
        "max_value_diff": max(value_diffs, default=0.0) / scale,
        "max_vector_diff": max(vector_diffs, default=0.0),
        "n_unmatched": len(remaining),
        "complex_pair": bool(np.max(np.abs(evals.imag)) > 1e-9 * scale),
    }
