"""Spectroscopy of the Dirac oscillator perturbed by a surface delta shell.

Energy levels come from the roots of a 2x2 determinant built on the radial
Green matrix of the unperturbed oscillator (Whittaker-function products);
eigenfunctions are reconstructed in closed form from the Green matrix and the
spinor jump across the shell; an independent transfer-matrix integrator
verifies the delta-shell boundary condition for arbitrary sharply peaked
potential profiles.
"""

from .errors import (ConvergenceError, DegenerateNullSpaceError,
                     DiracShellError, PoleError, SingularPrefactorError,
                     StepUnderflowError, TransparentCaseError)
from .green import (GreenParams, OscillatorParams, Side, green_diag,
                    green_matrix, green_offdiag, green_params)
from .levels import (LevelRecord, ShellParams, SweepTable, UnperturbedLevel,
                     det_function, find_levels, sweep_lambda, sweep_radius,
                     unperturbed_levels)
from .limitcheck import (ConvergenceStudy, PeakProfile, PeakShape,
                         TransferResult, convergence_study, transfer_matrix)
from .wavefun import (DensityProfile, RadialSpinor, boundary_spinor,
                      density_profile, radial_spinor)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "ConvergenceStudy", "DegenerateNullSpaceError",
    "DensityProfile", "DiracShellError", "GreenParams", "LevelRecord",
    "OscillatorParams", "PeakProfile", "PeakShape", "PoleError",
    "RadialSpinor", "ShellParams", "Side", "SingularPrefactorError",
    "StepUnderflowError", "SweepTable", "TransferResult",
    "TransparentCaseError", "UnperturbedLevel", "boundary_spinor",
    "convergence_study", "density_profile", "det_function", "find_levels",
    "green_diag", "green_matrix", "green_offdiag", "green_params",
    "radial_spinor", "sweep_lambda", "sweep_radius", "transfer_matrix",
    "unperturbed_levels",
]
