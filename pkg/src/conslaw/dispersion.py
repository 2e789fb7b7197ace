"""Reduced 3x3 dispersion relations and closed-form stability predicates.

The leading reduced matrix, its characteristic cubic, the Cardano
factorization, the small-sigma eigenvalue expansions, and the sideband
product criterion all live here.  Production root-finding goes through the
companion matrix; the Cardano path is kept as an independent closed-form
route and cross-checked against it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBand, OutOfRange
from .rolls import RollParameters, RollSolution

__all__ = [
    "Stability",
    "ReducedMatrix",
    "ReducedCubic",
    "StabilityVerdict",
    "growth_prefactor",
    "leading_reduced_matrix",
    "cubic_coefficients",
    "cardano_roots",
    "companion_roots",
    "p_symbols",
    "small_sigma_expansion",
    "sideband_product",
    "stability_predicate",
    "band_edge_omega",
    "classify_numerically",
]

#: |Pi| below this is classified as Boundary.
_BOUNDARY_BAND = 1e-9


class Stability(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class ReducedMatrix:
    """Lambda-independent leading 3x3 matrix of the reduced spectral problem."""

    entries: np.ndarray
    params: tuple[float, float, float, float]  # (eps, omega, s, sigma)

    def eigenvalues(self) -> np.ndarray:
        vals = np.linalg.eigvals(self.entries)
        return vals[np.argsort(vals.real)]


@dataclass(frozen=True)
class ReducedCubic:
    """Monic cubic ``lambda^3 + a2 lambda^2 + a1 lambda + a0`` and its roots."""

    a2: float
    a1: float
    a0: float
    Q: float | None = None
    R: float | None = None
    roots: np.ndarray | None = None


@dataclass(frozen=True)
class StabilityVerdict:
    params: tuple[float, float, float]  # (eps, omega, s)
    verdict: Stability
    witness_sigma: float | None = None
    witness_lambda: complex | None = None


def growth_prefactor(eps: float, omega: float) -> float:
    """Co-periodic eigenvalue coefficient ``c = -2 (1 - 4 omega^2) eps^2``."""
    return -2.0 * (1.0 - 4.0 * omega**2) * eps**2


def _band_ratio(omega: float, s: float) -> float:
    return (1.0 - 4.0 * omega**2) / (27.0 - 2.0 * s**2)


def leading_reduced_matrix(params: RollParameters, sigma: float) -> ReducedMatrix:
    """Leading reduced matrix; eigenvalues solve ``det(m - lambda I) = 0``."""
    eps, w, s = params.eps, params.omega, params.s
    c = growth_prefactor(eps, w)
    rootA = np.sqrt(_band_ratio(w, s))
    m = np.array(
        [
            [-4.0 * sigma**2 + c, 8j * w * sigma * eps, -12.0 * s * rootA * eps],
            [-8j * w * sigma * eps, -4.0 * sigma**2, 0.0],
            [-6.0 * s * rootA * sigma**2 * eps, 0.0, -(sigma**2)],
        ],
        dtype=np.complex128,
    )
    return ReducedMatrix(entries=m, params=(eps, w, s, float(sigma)))


def cubic_coefficients(params: RollParameters, sigma: float) -> ReducedCubic:
    """Characteristic cubic of the leading reduced matrix (leading orders).

    ``a2 = -c + 9 s^2``-type closed forms; they coincide exactly with the
    expanded determinant of :func:`leading_reduced_matrix`.
    """
    eps, w, s = params.eps, params.omega, params.s
    c = growth_prefactor(eps, w)
    A = _band_ratio(w, s)
    s2 = sigma**2
    a2 = -c + 9.0 * s2
    a1 = 24.0 * s2**2 - 5.0 * c * s2 - 72.0 * s**2 * A * s2 * eps**2 - 64.0 * w**2 * s2 * eps**2
    a0 = (
        16.0 * s2**3
        - 4.0 * c * s2**2
        - 64.0 * w**2 * s2**2 * eps**2
        - 288.0 * s**2 * A * s2**2 * eps**2
    )
    return ReducedCubic(a2=float(a2), a1=float(a1), a0=float(a0))


def _real_cbrt(x: float) -> float:
    return float(np.copysign(np.abs(x) ** (1.0 / 3.0), x))


def cardano_roots(a2: float, a1: float, a0: float) -> ReducedCubic:
    """Roots of a real monic cubic by the explicit depressed-cubic factorization.

    With ``mu = lambda + a2/3`` the cubic becomes ``mu^3 + 3Q mu - 2R = 0``,
    factored as ``(mu - B)(mu^2 + B mu + D + Q)`` where ``B`` and ``D`` are
    sums of cube roots of ``R +- sqrt(Q^3 + R^2)``; real cube roots when the
    discriminant combination is nonnegative, conjugate complex cube roots
    otherwise.
    """
    Q = (3.0 * a1 - a2**2) / 9.0
    R = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2**3) / 54.0
    disc = Q**3 + R**2
    if disc >= 0.0:
        sq = np.sqrt(disc)
        u = _real_cbrt(R + sq)
        v = _real_cbrt(R - sq)
        B = u + v
        D = u**2 + v**2
    else:
        p = (R + 1j * np.sqrt(-disc)) ** (1.0 / 3.0)
        B = float(2.0 * p.real)
        D = float(2.0 * (p**2).real)
    lam1 = -a2 / 3.0 + B
    inner = np.complex128(B**2 - 4.0 * (D + Q))
    sq2 = np.sqrt(inner)
    lam2 = (-2.0 * a2 / 3.0 - B + sq2) / 2.0
    lam3 = (-2.0 * a2 / 3.0 - B - sq2) / 2.0
    roots = np.array([lam1, lam2, lam3], dtype=np.complex128)
    return ReducedCubic(a2=a2, a1=a1, a0=a0, Q=float(Q), R=float(R), roots=roots)


def companion_roots(a2: float, a1: float, a0: float) -> np.ndarray:
    """Companion-matrix roots of the same cubic (the authoritative path)."""
    return np.roots([1.0, a2, a1, a0]).astype(np.complex128)


def p_symbols(params: RollParameters, sigma: float = 0.0) -> tuple[float, float, float, float, float]:
    """Leading coefficients of the cubic in powers of sigma.

    Returns ``(P04, P12, P14, P20, P22)`` with ``a0 = P04 s^4 + 16 s^6``,
    ``a1 = P12 s^2 + P14 s^4`` and ``a2 = P20 + P22 s^2``.  At leading order
    they do not depend on sigma; the argument is kept for interface symmetry
    with the sigma-dependent operations.
    """
    del sigma
    eps, w, s = params.eps, params.omega, params.s
    c = growth_prefactor(eps, w)
    A = _band_ratio(w, s)
    P04 = -4.0 * c - 64.0 * w**2 * eps**2 - 288.0 * s**2 * A * eps**2
    P12 = -5.0 * c - 72.0 * s**2 * A * eps**2 - 64.0 * w**2 * eps**2
    P14 = 24.0
    P20 = -c
    P22 = 9.0
    return (float(P04), float(P12), float(P14), float(P20), float(P22))


def _sideband_terms(omega: float, s: float) -> tuple[float, float]:
    if abs(abs(omega) - 0.5) < 1e-14 or abs(omega) > 0.5:
        raise DegenerateBand(f"sideband expansion is singular at |omega| = 1/2 (got {omega})")
    u = 36.0 * s**2 / (27.0 - 2.0 * s**2)
    wterm = 32.0 * omega**2 / (1.0 - 4.0 * omega**2)
    T = -5.0 + u + wterm
    Pi = 4.0 - 4.0 * u - wterm
    return T, Pi


def sideband_product(omega: float, s: float) -> float:
    """Product ``Pi = 4 - 144 s^2/(27 - 2 s^2) - 32 omega^2/(1 - 4 omega^2)``.

    The sign of ``Pi`` (the product of the two sideband curvatures) decides
    diffusive stability.
    """
    return _sideband_terms(omega, s)[1]


def small_sigma_expansion(params: RollParameters) -> tuple[float, float, float]:
    """Closed-form sigma^2 coefficients of the three critical curves.

    Returns ``(lambda1 curvature, lambda_minus, lambda_plus)`` where the
    curvature is ``-36 s^2/(27 - 2 s^2) - 4 (1 + 4 omega^2)/(1 - 4 omega^2)``
    and ``lambda_+-`` are the roots of ``x^2 - T x + Pi``.
    """
    w, s = params.omega, params.s
    T, Pi = _sideband_terms(w, s)
    curvature = -36.0 * s**2 / (27.0 - 2.0 * s**2) - 4.0 * (1.0 + 4.0 * w**2) / (1.0 - 4.0 * w**2)
    disc = np.complex128(T**2 - 4.0 * Pi)
    sq = np.sqrt(disc)
    lam_plus = (T + sq) / 2.0
    lam_minus = (T - sq) / 2.0
    return (float(curvature), complex(lam_minus).real, complex(lam_plus).real)


def stability_predicate(omega: float, s: float) -> Stability:
    """Closed-form verdict from the sign of the sideband product.

    Stable iff ``Pi > 0`` (then the trace ``T < 0`` follows), unstable iff
    ``Pi < 0``, boundary within ``1e-9`` of zero.  Equivalent to membership
    of ``omega^2`` below ``(27 - 38 s^2) / (12 (27 - 14 s^2))`` while
    ``27 - 38 s^2 > 0``, and to instability for every ``omega`` beyond.
    """
    if abs(omega) >= 0.5:
        raise OutOfRange(f"predicate requires |omega| < 1/2, got {omega}")
    if abs(s) >= np.sqrt(13.5):
        raise OutOfRange(f"predicate requires |s| < sqrt(27/2), got {s}")
    T, Pi = _sideband_terms(omega, s)
    if abs(Pi) < _BOUNDARY_BAND:
        return Stability.BOUNDARY
    if Pi > 0.0:
        assert T < 0.0, "trace must be negative inside the stable band"
        return Stability.STABLE
    return Stability.UNSTABLE


def band_edge_omega(s: float) -> float:
    """Half-width of the stable band in omega at fixed ``s`` (0 when empty)."""
    num = 27.0 - 38.0 * s**2
    if num <= 0.0:
        return 0.0
    return float(min(0.5, np.sqrt(num / (12.0 * (27.0 - 14.0 * s**2)))))


def _default_sigma_grid(eps: float) -> np.ndarray:
    # Geometric spacing resolves the dangerous window sigma = O(eps), which
    # shrinks to zero at the band boundary.
    small = eps * np.geomspace(0.01, 2.0, 28)
    coarse = np.linspace(0.05, 0.45, 9)
    return np.unique(np.concatenate([[0.0], small, coarse[coarse > small[-1]]]))


def classify_numerically(
    roll: RollSolution,
    sigma_grid: np.ndarray | None = None,
    delta: float = 1.0,
    margin: float = 1e-10,
) -> StabilityVerdict:
    """Verdict from the computed critical curves over a sigma sweep.

    Unstable when any critical curve rises above ``margin``; stable when all
    stay below and the fitted sigma^2 coefficients of the two neutral curves
    are negative (diffusive decay); boundary otherwise.
    """
    from .bloch import critical_curve_array, critical_curves

    eps = roll.params.eps
    sigmas = _default_sigma_grid(eps) if sigma_grid is None else np.asarray(sigma_grid, dtype=float)
    spectra = critical_curves(roll, sigmas, delta=delta)
    # All critical eigenvalues are real (the operator is similar to a real
    # symmetric matrix), so per-sigma ascending sort is the exact curve
    # assignment; continuation matching can swap branches at collisions.
    curves = np.sort(critical_curve_array(spectra).real, axis=0)

    worst = np.unravel_index(np.argmax(curves), curves.shape)
    if curves[worst] > margin:
        return StabilityVerdict(
            params=(eps, roll.params.omega, roll.params.s),
            verdict=Stability.UNSTABLE,
            witness_sigma=float(sigmas[worst[1]]),
            witness_lambda=complex(curves[worst]),
        )

    fit_mask = (sigmas > 0.0) & (sigmas <= 0.75 * eps)
    if np.count_nonzero(fit_mask) < 3:
        fit_mask = (sigmas > 0.0) & (sigmas <= np.sort(sigmas[sigmas > 0.0])[2])
    X = np.column_stack([np.ones(np.count_nonzero(fit_mask)), sigmas[fit_mask] ** 2])
    coefs = [np.linalg.lstsq(X, curves[j, fit_mask], rcond=None)[0][1] for j in (1, 2)]
    if all(cj <= -1e-6 * eps**2 for cj in coefs):
        return StabilityVerdict(
            params=(eps, roll.params.omega, roll.params.s),
            verdict=Stability.STABLE,
        )
    return StabilityVerdict(
        params=(eps, roll.params.omega, roll.params.s),
        verdict=Stability.BOUNDARY,
    )
