"""Exception hierarchy for numerical failure modes."""


class DiracShellError(Exception):
    """Base class for numerical errors raised by this package."""


class PoleError(DiracShellError):
    """Evaluation requested too close to a pole of the gamma function
    (equivalently, too close to an unperturbed energy level)."""


class ConvergenceError(DiracShellError):
    """A special-function evaluation scheme failed its own error estimate."""


class SingularPrefactorError(DiracShellError):
    """Off-diagonal Green entries requested within 1e-12 of E = +m or E = -m."""


class DegenerateNullSpaceError(DiracShellError):
    """Level matrix has a (near) two-dimensional null space; the spinor
    direction at the shell is not determined."""


class TransparentCaseError(DiracShellError):
    """Coupling is an integer multiple of pi: the shell is transparent and
    there is no perturbed eigenvector to reconstruct."""


class StepUnderflowError(DiracShellError):
    """Peak profile too narrow for the floating-point integration grid."""
