"""Modified Ginzburg-Landau amplitude system and its dispersion relations.

The coupled amplitude/mean-mode system

    dA/dt = 4 A'' + A - ((27 - 2 s^2)/36) |A|^2 A - 2 s A B
    dB/dt = B'' + (s/2) (|A|^2)''

has the explicit roll ``A = 6 sqrt((1 - 4 w^2)/(27 - 2 s^2)) e^{i w x}``,
``B = 0``.  Its linearized 3x3 dispersion matrix is assembled directly and
compared against the exact Bloch computation under the scaling
``sigma = eps * sigma_hat``, ``lambda = eps^2 * lambda_hat``.

The small-sigma closed forms deliberately duplicate the reduced-dispersion
formulas instead of importing them: their agreement is a cross-module test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBand, OutOfRange
from .fourier import SpectralGrid
from .rolls import RollSolution

__all__ = [
    "MglParameters",
    "MglDispersion",
    "ComparisonRow",
    "mgl_roll_amplitude",
    "mgl_dispersion_matrix",
    "mgl_small_sigma",
    "compare_exact_vs_mgl",
    "mgl_rhs",
]


@dataclass(frozen=True)
class MglParameters:
    """Band coordinate and quadratic coefficient of the amplitude system."""

    omega: float
    s: float

    def __post_init__(self) -> None:
        if abs(self.omega) > 0.5:
            raise OutOfRange(f"|omega| must be <= 1/2, got {self.omega}")
        if abs(self.s) >= np.sqrt(13.5):
            raise OutOfRange(f"|s| must be < sqrt(27/2), got {self.s}")

    @property
    def amplitude(self) -> float:
        """Roll amplitude ``6 sqrt((1 - 4 omega^2)/(27 - 2 s^2))``."""
        return mgl_roll_amplitude(self.omega, self.s)


@dataclass(frozen=True)
class MglDispersion:
    """3x3 linearized dispersion matrix at one scaled sideband number."""

    sigma_hat: float
    matrix: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class ComparisonRow:
    """One scaled comparison point between exact and amplitude-system spectra."""

    sigma_hat: float
    lambda_exact: np.ndarray
    lambda_mgl: np.ndarray
    deviation: float


def mgl_roll_amplitude(omega: float, s: float) -> float:
    """Positive root of the reduced amplitude equation; 0 at ``|omega| = 1/2``."""
    if abs(omega) > 0.5:
        raise OutOfRange(f"|omega| must be <= 1/2, got {omega}")
    band = 1.0 - 4.0 * omega**2
    if band <= 0.0:
        return 0.0
    return float(6.0 * np.sqrt(band / (27.0 - 2.0 * s**2)))


def mgl_dispersion_matrix(params: MglParameters, sigma_hat: float) -> MglDispersion:
    """Dispersion matrix of the linearization about the explicit roll."""
    w, s = params.omega, params.s
    rootA = np.sqrt((1.0 - 4.0 * w**2) / (27.0 - 2.0 * s**2))
    sh = float(sigma_hat)
    m = np.array(
        [
            [-4.0 * sh**2 - 2.0 * (1.0 - 4.0 * w**2), 8j * w * sh, -12.0 * s * rootA],
            [-8j * w * sh, -4.0 * sh**2, 0.0],
            [-6.0 * s * rootA * sh**2, 0.0, -(sh**2)],
        ],
        dtype=np.complex128,
    )
    vals = np.linalg.eigvals(m)
    vals = vals[np.argsort(vals.real)]
    return MglDispersion(sigma_hat=sh, matrix=m, eigenvalues=vals)


def mgl_small_sigma(params: MglParameters) -> tuple[float, float, float]:
    """Small-sideband coefficients of the three dispersion curves.

    Same closed forms as the exact reduced expansion; kept as an independent
    implementation so the agreement is a genuine cross-check.
    """
    w, s = params.omega, params.s
    band = 1.0 - 4.0 * w**2
    if band <= 0.0:
        raise DegenerateBand(f"expansion singular at |omega| = 1/2 (got {w})")
    u = 36.0 * s**2 / (27.0 - 2.0 * s**2)
    wt = 32.0 * w**2 / band
    curvature = -u - 4.0 * (1.0 + 4.0 * w**2) / band
    T = -5.0 + u + wt
    Pi = 4.0 - 4.0 * u - wt
    sq = np.sqrt(np.complex128(T**2 - 4.0 * Pi))
    return (float(curvature), complex((T - sq) / 2.0).real, complex((T + sq) / 2.0).real)


def compare_exact_vs_mgl(
    roll: RollSolution,
    sigma_hat_grid,
    delta: float = 1.0,
    grid: SpectralGrid | None = None,
) -> list[ComparisonRow]:
    """Critical Bloch eigenvalues at ``sigma = eps sigma_hat`` scaled by
    ``1/eps^2`` against the amplitude-system eigenvalues at ``sigma_hat``.

    Triples on both sides are sorted by real part before pairing, which for
    real spectra is the minimal-distance matching.
    """
    from .bloch import assemble_bloch, critical_modes

    eps = roll.params.eps
    if eps <= 0.0:
        raise OutOfRange("comparison requires eps > 0")
    mglp = MglParameters(roll.params.omega, roll.params.s)
    rows: list[ComparisonRow] = []
    for sh in sigma_hat_grid:
        sigma = eps * float(sh)
        if abs(sigma) > 0.5:
            raise OutOfRange(f"eps * sigma_hat = {sigma} leaves the Brillouin zone")
        vals, _ = critical_modes(assemble_bloch(roll, sigma, grid=grid))
        exact = vals[np.argsort(vals.real)] / eps**2
        mgl_vals = mgl_dispersion_matrix(mglp, float(sh)).eigenvalues
        deviation = float(np.max(np.abs(exact - mgl_vals)))
        rows.append(
            ComparisonRow(
                sigma_hat=float(sh),
                lambda_exact=exact,
                lambda_mgl=mgl_vals,
                deviation=deviation,
            )
        )
    return rows


def mgl_rhs(
    params: MglParameters,
    A: np.ndarray,
    B: np.ndarray,
    length: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side of the amplitude system on a periodic slow domain.

    ``A`` (complex) and ``B`` (real) are point values on a uniform grid over
    ``[0, length)``; derivatives are spectral.  The mean-mode equation is a
    full second derivative, so the spatial mean of ``dB/dt`` vanishes exactly.
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape or A.ndim != 1:
        raise ValueError("A and B must be 1-d arrays of equal length")
    n = A.size
    kappa = 2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
    lap = -(kappa**2)

    def d2(f: np.ndarray) -> np.ndarray:
        return np.fft.ifft(lap * np.fft.fft(f))

    s = params.s
    cubic = (27.0 - 2.0 * s**2) / 36.0
    dA = 4.0 * d2(A) + A - cubic * np.abs(A) ** 2 * A - 2.0 * s * A * B
    dB = d2(B).real + 0.5 * s * d2(np.abs(A) ** 2).real
    return dA, dB
