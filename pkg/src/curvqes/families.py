"""The two families of solvable-sector potentials and their constraint cascades.

Family 1 adds positive powers of 1 + lambda r^2 to the baseline potential
(2m extra coefficients B_1..B_2m); family 2 adds inverse powers.  A gauge
factorization with parameters (a, b_1..b_m) fixes part of the B set outright;
the rest, together with A (family 1) or A and the energy offset epsilon
(family 2), follow from the Bethe roots.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, IncompleteSpec, InvalidRoots, UnsupportedCase, WrongFamily
from .fba import BetheProblem
from .oscillator import SpaceConfig


@dataclass(frozen=True)
class GaugeParams:
    """Gauge-transform parameters: family tag in {1, 2}, depth m, a, b_1..b_m."""

    family: int
    a: float
    b: tuple

    def __post_init__(self):
        if self.family not in (1, 2):
            raise WrongFamily(f"family must be 1 or 2, got {self.family}")
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        if self.m not in (1, 2, 3):
            raise UnsupportedCase(f"m={self.m} not solved; only m in {{1,2,3}}")

    @property
    def m(self):
        return len(self.b)

    def b_padded(self):
        """(b1, b2, b3) with zeros beyond m."""
        return self.b + (0.0,) * (3 - self.m)


@dataclass(frozen=True)
class PotentialSpec:
    """A potential with its derived coefficients.

    B entries that require the Bethe roots are None until the spec is
    completed by apply_root_constraints."""

    space: SpaceConfig
    gauge: GaugeParams
    n: int
    coupling_A: float | None = None
    B: tuple = ()
    epsilon: float | None = None

    @property
    def complete(self):
        return self.coupling_A is not None and all(x is not None for x in self.B)

    def require_complete(self):
        if not self.complete:
            raise IncompleteSpec("root-dependent coefficients not yet filled in")


def family1_fixed_B(gauge, space):
    """Gauge-determined part of the B set for family 1, as a dict {k: B_k}."""
    if gauge.family != 1:
        raise WrongFamily("spec belongs to family 2")
    a = gauge.a
    b1, b2, b3 = gauge.b_padded()
    l, d = space.l, space.d
    m = gauge.m
    if m == 1:
        return {
            1: 2 * b1 * (4 * a - 2 * b1 - 2 * l - d - 1),
            2: 4 * b1**2,
        }
    if m == 2:
        return {
            2: 4 * (b1**2 + b2 * (4 * a - 4 * b1 - 2 * l - d - 3)),
            3: 16 * b2 * (b1 - b2),
            4: 16 * b2**2,
        }
    return {
        3: 2 * (8 * b2 * (b1 - b2) + 3 * b3 * (4 * a - 4 * b1 - 2 * l - d - 5)),
        4: 8 * (2 * b2**2 + 3 * b3 * (b1 - 2 * b2)),
        5: 12 * b3 * (4 * b2 - 3 * b3),
        6: 36 * b3**2,
    }


def family2_fixed_B(gauge, space):
    """Gauge-determined part of the B set for family 2."""
    if gauge.family != 2:
        raise WrongFamily("spec belongs to family 1")
    b1, b2, b3 = gauge.b_padded()
    m = gauge.m
    if m == 1:
        return {2: -4 * b1**2}
    if m == 2:
        return {
            3: -16 * b2 * (b1 - b2),
            4: -16 * b2**2,
        }
    return {
        4: -16 * b2**2 - 24 * b3 * (b1 - 2 * b2),
        5: -12 * b3 * (4 * b2 - 3 * b3),
        6: -36 * b3**2,
    }


def fixed_epsilon(gauge, space):
    """Family 2 pins the energy offset: epsilon = -2a(2a - 2l - d + 1)."""
    if gauge.family != 2:
        raise WrongFamily("epsilon is root-derived for family 1")
    a, l, d = gauge.a, space.l, space.d
    return -2 * a * (2 * a - 2 * l - d + 1)


def make_spec(space, gauge, n):
    """Spec with the fixed constraints applied; root-dependent slots left open."""
    if n < 0:
        raise ValueError("n must be >= 0")
    fixed = (
        family1_fixed_B(gauge, space)
        if gauge.family == 1
        else family2_fixed_B(gauge, space)
    )
    bvec = tuple(fixed.get(k) for k in range(1, 2 * gauge.m + 1))
    a = gauge.a
    if gauge.family == 1:
        coupling = (2 * a + 2 * n) * (2 * a + 2 * n + 1)
        eps = None
    else:
        coupling = None
        eps = fixed_epsilon(gauge, space)
    return PotentialSpec(space, gauge, n, coupling, bvec, eps)


def apply_root_constraints(spec, roots):
    """Fill the remaining members of {A, B_1..B_3} from the root power sums."""
    if roots.n != spec.n:
        raise InvalidRoots(f"expected {spec.n} roots, got {roots.n}")
    if not roots.is_real:
        raise InvalidRoots("physical assembly requires a real configuration")
    s1, s2, s3, e2, s21 = roots.power_sums()
    a, n = spec.gauge.a, spec.n
    b1, b2, b3 = spec.gauge.b_padded()
    l, d = spec.space.l, spec.space.d
    m = spec.gauge.m
    bvec = list(spec.B)
    if spec.gauge.family == 1:
        coupling = (2 * a + 2 * n) * (2 * a + 2 * n + 1)
        if m >= 2:
            bvec[0] = (
                -2 * (4 * a + 4 * n - 1) * s2
                - 8 * e2
                + 2 * (4 * a + 4 * n - 4 * b1 - 2 * l - d - 1) * s1
                + 2 * b1 * (4 * a + 4 * n - 2 * b1 - 2 * l - d - 1)
                - 4 * b2 * (4 * a + 4 * n - 3)
            )
        if m == 3:
            bvec[1] = (
                -2 * (4 * a + 4 * n - 1) * s3
                - 8 * s21
                + 2 * (4 * a + 4 * n - 4 * b1 - 2 * l - d - 1) * s2
                + 8 * e2
                + 8 * (b1 - 2 * b2) * s1
                + 4 * b1**2
                + 4 * b2 * (4 * a + 4 * n - 4 * b1 - 2 * l - d - 3)
                - 6 * b3 * (4 * a + 4 * n - 5)
            )
        eps = spec.epsilon
    else:
        coupling = (
            (2 * a + 2 * n) * (2 * a + 2 * n + 1)
            - 2 * b1 * (4 * s1 - 4 * a - 4 * n + 2 * l + d - 3)
            - 16 * b2 * (s2 - s1)
            - 24 * b3 * (s3 - s2)
        )
        bvec[0] = (
            2 * b1 * (4 * a + 4 * n + 2 * b1 + 3)
            + 4 * b2 * (4 * s1 - 4 * a - 4 * n + 2 * l + d - 5)
            + 24 * b3 * (s2 - s1)
        )
        if m >= 2:
            bvec[1] = (
                -4 * b1**2
                + 4 * b2 * (4 * a + 4 * n + 4 * b1 + 5)
                + 6 * b3 * (4 * s1 - 4 * a - 4 * n + 2 * l + d - 7)
            )
        if m == 3:
            bvec[2] = -16 * b2 * (b1 - b2) + 6 * b3 * (4 * a + 4 * n + 4 * b1 + 7)
        eps = spec.epsilon
    return replace(spec, coupling_A=coupling, B=tuple(bvec), epsilon=eps)


def potential_eval(spec, r):
    """V(r) for a completed spec, either family."""
    spec.require_complete()
    spec.space.check_domain(r)
    lam = spec.space.lam
    a_cpl = spec.coupling_A
    y = 1.0 + lam * np.asarray(r, dtype=float) ** 2
    v = lam * a_cpl - lam * a_cpl / y
    for k, bk in enumerate(spec.B, start=1):
        v = v + lam * bk * (y**k if spec.gauge.family == 1 else y ** (-k - 1))
    return v


def to_bethe_problem(spec):
    """Coefficient vectors (p0..p5, q0..q4) of the transformed polynomial ODE.

    All six (family, m) cases are transcribed explicitly; the cascade
    consistency tests guard the transcription."""
    a = spec.gauge.a
    b1, b2, b3 = spec.gauge.b_padded()
    l, d = spec.space.l, spec.space.d
    m = spec.gauge.m
    c_lead = 2 * (4 * a + 3)
    c_sub = -2 * (4 * a - 4 * b1 - 2 * l - d + 3)
    if spec.gauge.family == 1:
        if m == 1:
            p = (0, 0, -4, 4, 0, 0)
            q = (-8 * b1, c_sub, c_lead, 0, 0)
        elif m == 2:
            p = (0, 0, 0, -4, 4, 0)
            q = (-16 * b2, -8 * (b1 - 2 * b2), c_sub, c_lead, 0)
        else:
            p = (0, 0, 0, 0, -4, 4)
            q = (-24 * b3, -8 * (2 * b2 - 3 * b3), -8 * (b1 - 2 * b2), c_sub, c_lead)
    else:
        p = (0, -4, 4, 0, 0, 0)
        q0 = 2 * (-4 * a + 2 * l + d - 3)
        q1 = 2 * (4 * a + 4 * b1 + 3)
        if m == 1:
            q = (q0, q1, -8 * b1, 0, 0)
        elif m == 2:
            q = (q0, q1, -8 * (b1 - 2 * b2), -16 * b2, 0)
        else:
            q = (q0, q1, -8 * (b1 - 2 * b2), -8 * (2 * b2 - 3 * b3), -24 * b3)
    return BetheProblem(p, q, spec.n)


def unpack_w(spec, w):
    """Read {A or epsilon, low-order B} off the derived W coefficients.

    Inverse of the displayed zeroth-order parts of the six transformed ODEs;
    used to cross-check the printed root-sum constraint formulas."""
    a = spec.gauge.a
    b1, b2, b3 = spec.gauge.b_padded()
    l, d = spec.space.l, spec.space.d
    m = spec.gauge.m
    out = {}
    if spec.gauge.family == 1:
        # w slots hold, from the top power down: A, epsilon, then B1, B2
        eps_base = -4 * a**2 + 8 * a * b1 + 2 * a * (2 * l + d - 1) - 2 * b1
        out["A"] = 2 * a * (2 * a + 1) - w.w[m]
        out["epsilon"] = eps_base - w.w[m - 1]
        if m >= 2:
            out["B1"] = (
                w.w[m - 2]
                + 2 * b1 * (4 * a - 2 * b1 - 2 * l - d - 1)
                - 4 * b2 * (4 * a - 3)
            )
        if m == 3:
            out["B2"] = (
                w.w[0]
                + 4 * b1**2
                + 4 * b2 * (4 * a - 4 * b1 - 2 * l - d - 3)
                - 6 * b3 * (4 * a - 5)
            )
    else:
        out["A"] = 2 * a * (2 * a + 1) + 2 * b1 * (4 * a - 2 * l - d + 3) - w.w[0]
        out["B1"] = w.w[1] + 2 * b1 * (4 * a + 2 * b1 + 3) - (
            4 * b2 * (4 * a - 2 * l - d + 5) if m >= 2 else 0.0
        )
        if m >= 2:
            out["B2"] = w.w[2] - 4 * b1**2 + 4 * b2 * (4 * a + 4 * b1 + 5) - (
                6 * b3 * (4 * a - 2 * l - d + 7) if m == 3 else 0.0
            )
        if m == 3:
            out["B3"] = w.w[3] - 16 * b2 * (b1 - b2) + 6 * b3 * (4 * a + 4 * b1 + 7)
    return out


NORMALIZABLE = "Normalizable"
NOT_NORMALIZABLE = "NotNormalizable"


def normalizability(spec):
    """(verdict, reason) from the printed closed-form conditions."""
    lam = spec.space.lam
    a, n = spec.gauge.a, spec.n
    bm = spec.gauge.b[-1]
    l, d = spec.space.l, spec.space.d
    if spec.gauge.family == 1:
        if lam > 0:
            ok = bm > 0
            reason = f"b_m = {bm} must be > 0 for lambda > 0"
        else:
            ok = a < 0.25 - n
            reason = f"a = {a} must be < 1/4 - n = {0.25 - n} for lambda < 0"
    else:
        if lam > 0:
            bound = l if d == 1 else l + (d - 1) / 2
            ok = 2 * a > bound
            reason = f"2a = {2 * a} must exceed {bound} for lambda > 0"
        else:
            ok = bm > 0
            reason = f"b_m = {bm} must be > 0 for lambda < 0"
    return (NORMALIZABLE if ok else NOT_NORMALIZABLE), reason
