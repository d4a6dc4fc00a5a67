"""Exception types shared across the solver modules."""


class CurvQESError(Exception):
    """Base class for all solver errors."""


class DomainError(CurvQESError):
    """Coordinate outside the allowed range for the given curvature sign."""


class PoleProximity(CurvQESError):
    """A candidate root sits too close to a zero of P(z)."""


class DuplicateRoots(CurvQESError):
    """Root distinctness tolerance violated."""


class NoRealSolution(CurvQESError):
    """No admissible real root configuration exists."""


class NonConvergence(CurvQESError):
    """Iterative search exhausted its retry budget."""


class InvalidRoots(CurvQESError):
    """Roots do not satisfy their residue equations to tolerance."""


class WrongFamily(CurvQESError):
    """Operation called with a spec from the other potential family."""


class IncompleteSpec(CurvQESError):
    """Potential spec is missing root-dependent coefficients."""


class UnsupportedCase(CurvQESError):
    """Requested (family, m) combination is not implemented."""


class LevelOutOfRange(CurvQESError):
    """Quantum number outside the normalizable window."""


class EmptySpectrum(CurvQESError):
    """No normalizable level exists for the given parameters."""


class GridTooCoarse(CurvQESError):
    """Evaluation grid cannot resolve the sign structure."""


class ConfigError(CurvQESError):
    """Run configuration failed validation."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
