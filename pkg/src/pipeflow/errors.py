"""Exception types shared across the package."""


class PipeflowError(Exception):
    """Base class for all solver errors."""


class NonPositiveDensity(PipeflowError):
    """A density at or below the vacuum floor was passed to the gas law."""


class ReconstructedVacuum(PipeflowError):
    """Piecewise-linear reconstruction produced a nonpositive density."""


class NegativeRadicand(PipeflowError):
    """p'(rho) fell below the global stiffness coefficient; a_n is stale."""


class SingularSystem(PipeflowError):
    """Tridiagonal solve hit a vanishing pivot or lost diagonal dominance."""


class JunctionNewtonFailure(PipeflowError):
    """Newton iteration at a junction did not converge."""


class BlowUp(PipeflowError):
    """Explicit time stepping detected an unbounded state."""


class GridMismatch(PipeflowError):
    """Fine grid is not an exact 2x refinement of the coarse grid."""


class NonPositiveDifference(PipeflowError):
    """Convergence-rate formula needs strictly positive differences."""


class ParseError(PipeflowError):
    """Configuration document is not syntactically valid."""


class SchemaError(PipeflowError):
    """Configuration document contains an unknown or ill-typed key."""
