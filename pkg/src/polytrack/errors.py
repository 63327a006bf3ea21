"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InputError(ToolkitError):
    """Invalid user-supplied parameters or configuration (CLI exit code 2)."""


class NumericalError(ToolkitError):
    """A computation failed to reach its accuracy contract (CLI exit code 1)."""


class BadSector(InputError):
    """Sector bounds violate L >= m > 0."""


class DegenerateSector(InputError):
    """Sector collapsed to a point (L == m); rate is 0 by convention."""


class ZeroAlphaSum(InputError):
    """Gradient weights sum to zero, so the recursion has no net gradient action."""


class LengthMismatch(InputError):
    """alpha/beta sequence lengths are inconsistent with the history depth k."""


class DimensionMismatch(InputError):
    """Vector or matrix dimensions do not match the declared problem size."""


class BadPerturbations(InputError):
    """Pole perturbations must be positive and pairwise distinct."""


class ConfigError(InputError):
    """Malformed run configuration."""


class NonConvergence(NumericalError):
    """Iterative refinement failed to reach tolerance within the iteration cap."""


class IllConditioned(NumericalError):
    """Floating-point precision exhausted for the requested parameters."""


class DomainViolation(InputError):
    """Argument lies outside the analyticity domain of the requested map."""


class Singularity(NumericalError):
    """Evaluation point is within tolerance of a pole of the map."""


class Condition1Violated(InputError):
    """Momentum weights do not satisfy the polynomial-tracking identity
    required by the shifted (time-invariant) form of the recursion."""


class Divergence(NumericalError):
    """Simulated iterates exceeded the divergence threshold."""

    def __init__(self, step: int, error: float):
        self.step = step
        self.error = error
        super().__init__(f"iterate error {error:.3e} exceeded divergence threshold at step {step}")
