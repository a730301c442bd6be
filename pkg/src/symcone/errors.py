"""Exception types shared across the package."""


class SymconeError(Exception):
    """Base class for all package-specific errors."""


class AlgebraError(SymconeError, ValueError):
    """Invalid algebra construction (bad kind/rank combination, bad ambient dim)."""


class AlgebraMismatchError(SymconeError, ValueError):
    """Arithmetic between elements of different algebras."""


class FrameError(SymconeError, ValueError):
    """A proposed Jordan frame fails the idempotency/orthogonality checks."""


class DomainError(SymconeError, ValueError):
    """Argument outside the cone / shape outside the admissible set."""


class UnsupportedSamplerError(SymconeError, ValueError):
    """Requested a sampler for a kind or shape regime that has none."""


class StructuralFailureError(SymconeError, RuntimeError):
    """A structural invariant failed numerically; signals a broken kernel,
    e.g. an eigenvalue of the split operator outside its two admissible values."""


class InconsistentConstantsError(SymconeError, ValueError):
    """Observed regression constants do not correspond to any algebra."""
