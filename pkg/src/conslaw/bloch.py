"""Bloch operators about a roll and their spectra.

In the shifted basis ``e^{i m xi}`` the operator acts as

    B[m, n] = k^2 (m + sigma)^2 * [ (-(1 - k^2 (m + sigma)^2)^2 + eps^2) d_{mn}
                                    + g_{m - n} ],

where ``g`` are the Fourier coefficients of ``-2 s u - 3 u^2``.  The matrix
factors as ``B = diag(p) S`` with ``p_m = k^2 (m + sigma)^2 >= 0`` and ``S``
real symmetric, so ``B`` is similar to the symmetric ``sqrt(p) S sqrt(p)``.
All eigenvalues are therefore real; the symmetric form is what gets
eigensolved.  The three critical eigenvalues are then polished by inverse
iteration plus Rayleigh-Ritz, which restores absolute accuracy near zero that
a dense solve of a matrix with ``O(M^6)`` entries cannot deliver on its own.

At ``sigma = 0`` the ``m = 0`` row vanishes identically (conservation law);
that zero eigenvalue is deflated exactly before the symmetric solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GapViolation, OutOfRange
from .fourier import PeriodicField, SpectralGrid
from .rolls import RollParameters, RollSolution

__all__ = [
    "constant_symbol",
    "BlochOperator",
    "BlochSpectrum",
    "assemble_bloch",
    "bloch_spectrum",
    "critical_modes",
    "critical_curves",
    "critical_curve_array",
]

_SIGMA_ZERO_TOL = 1e-13
_REFINE_STEPS = 2


def constant_symbol(m: int, sigma: float) -> float:
    """Eigenvalue of the zero-amplitude operator on ``e^{i m xi}`` at ``k = 1``.

    ``mu_m = -(m + sigma)^2 (1 - (m + sigma)^2)^2``.
    """
    t = (m + sigma) ** 2
    return float(-t * (1.0 - t) ** 2)


@dataclass(frozen=True)
class BlochOperator:
    """Dense Bloch matrix at one Bloch number, plus its symmetric factorization."""

    params: RollParameters
    sigma: float
    matrix: np.ndarray
    df_field: PeriodicField
    grid: SpectralGrid
    prefactor: np.ndarray = field(repr=False)
    symmetric_factor: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BlochSpectrum:
    """Full spectrum at one Bloch number with the critical triple flagged.

    ``eigenvalues`` are sorted by descending real part; ``critical`` holds the
    indices of the three eigenvalues nearest zero, ordered by ascending real
    part (curve order).  ``gap`` is ``-max Re`` over the non-critical rest.
    """

    sigma: float
    eigenvalues: np.ndarray
    critical: tuple[int, int, int]
    gap: float
    critical_vectors: np.ndarray | None = field(default=None, repr=False)

    def critical_values(self) -> np.ndarray:
        return self.eigenvalues[list(self.critical)]


def assemble_bloch(roll: RollSolution, sigma: float, grid: SpectralGrid | None = None) -> BlochOperator:
    """Assemble the dense Bloch matrix about a converged roll.

    ``|sigma| <= 1/2`` (one Brillouin zone).  The multiplication part of the
    linearized reaction term is a Toeplitz block built from the exact
    convolution of the roll's coefficients, so no transform error enters.
    """
    if abs(sigma) > 0.5:
        raise OutOfRange(f"sigma must lie in [-1/2, 1/2], got {sigma}")
    params = roll.params
    grid = grid or roll.profile.grid
    M = grid.n_modes
    k2 = params.k**2

    c = np.zeros(2 * M + 1)
    src = roll.profile.coeffs.real
    src_M = roll.profile.grid.n_modes
    take = min(M, src_M)
    c[M - take : M + take + 1] = src[src_M - take : src_M + take + 1]

    # df(u) = eps^2 - 2 s u - 3 u^2 up to mode 2M, by exact convolution.
    df = -2.0 * params.s * np.concatenate([np.zeros(M), c, np.zeros(M)]) - 3.0 * np.convolve(c, c)
    df[2 * M] += params.eps**2
    df_grid = SpectralGrid(2 * M)
    df_field = PeriodicField(df_grid, df.astype(np.complex128), even=True)

    theta = (np.arange(-M, M + 1) + sigma).astype(np.float64)
    p = k2 * theta**2
    diag_inner = -((1.0 - k2 * theta**2) ** 2)
    idx = np.subtract.outer(np.arange(2 * M + 1), np.arange(2 * M + 1)) + 2 * M
    S = df[idx]
    S[np.diag_indices(2 * M + 1)] += diag_inner
    S = 0.5 * (S + S.T)
    matrix = p[:, None] * S
    return BlochOperator(
        params=params,
        sigma=float(sigma),
        matrix=matrix,
        df_field=df_field,
        grid=grid,
        prefactor=p,
        symmetric_factor=S,
    )


def _refine_critical(H: np.ndarray, V: np.ndarray, crit: np.ndarray):
    """Polish the near-zero Ritz pairs of symmetric ``H`` by inverse iteration.

    The critical eigenvectors decay spectrally, so matvecs with the huge-norm
    ``H`` are accurate in absolute terms and the final 3x3 Rayleigh-Ritz
    values come out near machine precision.
    """
    Y = V[:, crit]
    for _ in range(_REFINE_STEPS):
        try:
            Z = np.linalg.solve(H, Y)
        except np.linalg.LinAlgError:
            Z = np.linalg.solve(H + 1e-10 * np.eye(H.shape[0]), Y)
        Y, _ = np.linalg.qr(Z)
    G = Y.T @ (H @ Y)
    G = 0.5 * (G + G.T)
    ritz, R = np.linalg.eigh(G)
    return ritz, Y @ R


def _eig_symmetric(p: np.ndarray, S: np.ndarray, n_critical: int):
    """Spectrum of ``diag(p) S`` (p > 0) via the symmetric similarity.

    Returns the refined critical eigenvalues (ascending), the matching
    eigenvectors of ``diag(p) S``, and the remaining eigenvalues.
    """
    sq = np.sqrt(p)
    H = sq[:, None] * S * sq[None, :]
    H = 0.5 * (H + H.T)
    w, V = np.linalg.eigh(H)
    crit = np.argsort(np.abs(w))[:n_critical]
    ritz, Yr = _refine_critical(H, V, crit)
    others = np.delete(w, crit)
    # Map eigenvectors of H back to eigenvectors of diag(p) S.
    vecs = sq[:, None] * Yr
    norms = np.linalg.norm(vecs, axis=0)
    norms[norms == 0.0] = 1.0
    vecs = vecs / norms
    return ritz, vecs, others


def _solve_operator(op: BlochOperator):
    """Refined critical triple plus the rest, handling the sigma = 0 deflation."""
    p, S = op.prefactor, op.symmetric_factor
    n = p.size
    M = op.grid.n_modes

    if abs(op.sigma) < _SIGMA_ZERO_TOL:
        keep = np.arange(n) != M
        ritz, vecs_sub, others = _eig_symmetric(p[keep], S[np.ix_(keep, keep)], 2)
        crit_vals = np.concatenate([[0.0], ritz])
        # Right eigenvector of the exact zero: S v in span(e_0), i.e. v = S^{-1} e_0.
        e0 = np.zeros(n)
        e0[M] = 1.0
        try:
            v0 = np.linalg.solve(S, e0)
        except np.linalg.LinAlgError:
            v0 = np.linalg.lstsq(S, e0, rcond=None)[0]
        v0 = v0 / np.linalg.norm(v0)
        vecs = np.zeros((n, 3))
        vecs[:, 0] = v0
        vecs[keep, 1:] = vecs_sub
    else:
        crit_vals, vecs, others = _eig_symmetric(p, S, 3)

    order = np.argsort(crit_vals)
    return crit_vals[order], vecs[:, order], others


def bloch_spectrum(op: BlochOperator, delta: float = 1.0) -> BlochSpectrum:
    """Full spectrum with the critical triple flagged and the gap certified.

    Raises :class:`GapViolation` when the non-critical spectrum does not stay
    below ``-delta``, i.e. when the three-eigenvalue decomposition breaks.
    """
    if delta <= 0.0:
        raise OutOfRange(f"delta must be positive, got {delta}")
    crit_vals, crit_vecs, others = _solve_operator(op)
    gap = float(-np.max(others)) if others.size else np.inf
    if gap <= delta:
        raise GapViolation(gap, delta)
    allvals = np.concatenate([crit_vals, others]).astype(np.complex128)
    order = np.argsort(-allvals.real, kind="stable")
    allvals = allvals[order]
    pos = np.empty(order.size, dtype=int)
    pos[order] = np.arange(order.size)
    critical = tuple(int(pos[i]) for i in range(3))
    return BlochSpectrum(
        sigma=op.sigma,
        eigenvalues=allvals,
        critical=critical,
        gap=gap,
        critical_vectors=crit_vecs.astype(np.complex128),
    )


def critical_modes(op: BlochOperator) -> tuple[np.ndarray, np.ndarray]:
    """Critical eigenvalues (ascending) and eigenvectors in the shifted basis.

    Column ``j`` of the vector array holds coefficients ``V_m`` of the Bloch
    eigenfunction ``e^{i sigma xi} sum_m V_m e^{i m xi}``.
    """
    crit_vals, crit_vecs, _ = _solve_operator(op)
    return crit_vals.astype(np.complex128), crit_vecs.astype(np.complex128)


def critical_curves(
    roll: RollSolution,
    sigmas,
    delta: float = 1.0,
    grid: SpectralGrid | None = None,
) -> list[BlochSpectrum]:
    """Spectra over a sigma sweep with the critical triple matched into curves.

    Matching is greedy nearest-continuation: at each sigma the permutation of
    the critical triple minimizing the total distance to the previous triple
    is chosen, so the returned ``critical`` index triples trace three
    continuous curves.
    """
    from itertools import permutations

    spectra: list[BlochSpectrum] = []
    prev: np.ndarray | None = None
    for sigma in sigmas:
        spec = bloch_spectrum(assemble_bloch(roll, float(sigma), grid=grid), delta=delta)
        vals = spec.critical_values()
        if prev is not None:
            best = min(
                permutations(range(3)),
                key=lambda perm: float(np.sum(np.abs(vals[list(perm)] - prev))),
            )
            spec = BlochSpectrum(
                sigma=spec.sigma,
                eigenvalues=spec.eigenvalues,
                critical=tuple(spec.critical[i] for i in best),
                gap=spec.gap,
                critical_vectors=(
                    spec.critical_vectors[:, list(best)]
                    if spec.critical_vectors is not None
                    else None
                ),
            )
        prev = spec.critical_values()
        spectra.append(spec)
    return spectra


def critical_curve_array(spectra: list[BlochSpectrum]) -> np.ndarray:
    """Stack matched critical curves as a (3, n_sigma) complex array."""
    return np.column_stack([s.critical_values() for s in spectra])
