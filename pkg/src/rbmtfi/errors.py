"""Exception types raised across the package."""


class RbmTfiError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(RbmTfiError, ValueError):
    """Inconsistent inputs: dimension mismatches, out-of-range sites, bad configs."""


class CapabilityError(RbmTfiError, ValueError):
    """Request outside what a method can do (e.g. odd chain length for the
    free-fermion formula, or an exact diagonalization too large to hold in RAM)."""


class DegenerateInputError(RbmTfiError, ValueError):
    """Input is formally valid but carries no usable information (e.g. an
    all-zero coupling vector passed to origin alignment)."""


class NumericalFault(RbmTfiError, RuntimeError):
    """A non-finite value appeared where the contract guarantees finite ones."""


class OptimizationFault(RbmTfiError, RuntimeError):
    """The natural-gradient linear solve failed beyond what regularization covers."""


class StatisticalFault(RbmTfiError, RuntimeError):
    """An estimated quantity violates a statistical bound beyond its noise floor
    (e.g. a variance estimate that is negative by much more than its error bar)."""
