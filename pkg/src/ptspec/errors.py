"""Exception hierarchy shared by all ptspec modules."""


class PTSpecError(Exception):
    """Base class for every error raised by ptspec."""


class InvalidDimensionError(PTSpecError, ValueError):
    """A truncation dimension was not a positive integer."""


class InvalidSpecError(PTSpecError, ValueError):
    """An oscillator specification violated its invariants."""


class UnsupportedKindError(PTSpecError, ValueError):
    """An operator kind is not supported by the requested operation."""


class DimensionMismatchError(PTSpecError, ValueError):
    """Two operands were built at different truncation dimensions."""


class SectorMismatchError(PTSpecError, ValueError):
    """Ladder polynomials from different sectors were combined."""


class InputError(PTSpecError, ValueError):
    """A numerical input was malformed (non-square, non-finite, ...)."""


class SolverError(PTSpecError, RuntimeError):
    """The dense eigensolver failed to converge."""


class NonConvergenceError(PTSpecError, RuntimeError):
    """A truncation sweep could not produce the requested levels."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class EmptyReportError(PTSpecError, ValueError):
    """A report was requested from a spectrum with no converged levels."""


class UndefinedSignError(PTSpecError, ValueError):
    """An eigenstate has an indefinite norm too close to zero to carry a sign."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class UnsupportedOrderError(PTSpecError, ValueError):
    """A perturbative order or level is outside the supported range."""


class DegenerateLevelError(PTSpecError, ValueError):
    """Nondegenerate perturbation theory was applied to a degenerate level."""
