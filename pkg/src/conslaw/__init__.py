"""Spectral numerics for rolls, Bloch spectra, and amplitude-equation
dispersion in a pattern-forming model with a conservation law."""

from .errors import (
    BlowUp,
    ConslawError,
    DegenerateBand,
    GapViolation,
    NoConvergence,
    OutOfRange,
    StepReject,
    TrivialCollapse,
)
from .fourier import (
    PeriodicField,
    SpectralGrid,
    apply_linear_symbol,
    inner_product,
    l2_norm,
    nonlinear_rhs,
    project_kernel,
)
from .rolls import (
    RollParameters,
    RollSolution,
    amplitude_A,
    amplitude_alpha,
    asymptotic_roll,
    measured_alpha,
    solve_roll,
    zero_roll,
)
from .bloch import (
    BlochOperator,
    BlochSpectrum,
    assemble_bloch,
    bloch_spectrum,
    constant_symbol,
    critical_curve_array,
    critical_curves,
    critical_modes,
)

__version__ = "0.1.0"
