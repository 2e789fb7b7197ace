#!/usr/bin/env python3
"""Bloch spectra about a roll: the critical triple and the spectral gap.

Assembles the Bloch operator across the Brillouin zone and prints the three
critical eigenvalue curves together with the certified gap to the rest of
the spectrum.  At sigma = 0 the conservation law and translation invariance
pin two exact zeros; the third eigenvalue sits at -2 (1 - 4 omega^2) eps^2.
"""

import numpy as np

from conslaw import (
    RollParameters,
    SpectralGrid,
    assemble_bloch,
    bloch_spectrum,
    critical_curve_array,
    critical_curves,
    solve_roll,
)

grid = SpectralGrid(16)
eps, omega, s = 0.05, 0.1, 0.8
roll = solve_roll(RollParameters(eps, omega, s), grid)

spec0 = bloch_spectrum(assemble_bloch(roll, 0.0))
print(f"Co-periodic spectrum at eps={eps}, omega={omega}, s={s}:")
print("  critical triple:", np.sort(spec0.critical_values().real))
print("  closed-form lambda_1: ", -2.0 * (1.0 - 4.0 * omega**2) * eps**2)
print(f"  spectral gap: {spec0.gap:.3f} (rest of spectrum below -{spec0.gap:.3f})")
print()

sigmas = np.concatenate([eps * np.linspace(0.0, 2.0, 9), [0.2, 0.3, 0.4]])
spectra = critical_curves(roll, sigmas)
curves = np.sort(critical_curve_array(spectra).real, axis=0)
print(f"{'sigma':>9} {'lambda_1':>12} {'lambda_2':>12} {'lambda_3':>12} {'gap':>8}")
for i, spec in enumerate(spectra):
    print(f"{spec.sigma:9.4f} {curves[0, i]:12.4e} {curves[1, i]:12.4e} "
          f"{curves[2, i]:12.4e} {spec.gap:8.3f}")
print()
print("All three curves stay nonpositive: this roll is diffusively stable.")
print("The two curves through zero bend down quadratically (sideband damping);")
print("sweeping omega or s across the band boundary flips the upper one positive.")
