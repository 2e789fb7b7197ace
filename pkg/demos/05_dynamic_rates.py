#!/usr/bin/env python3
"""Dynamic confirmation: time integration reproduces the spectral rates.

Each run perturbs a converged roll with the Bloch eigenfunction of the most
critical eigenvalue at a domain-compatible sideband number, integrates the
full model with the exponential (ETDRK4) scheme, and fits the log-norm
slope.  The conserved mass is tracked and stays constant to machine zero.
"""

from conslaw import RollParameters, SpectralGrid, solve_roll
from conslaw.evolution import EvolutionConfig, evolve

grid = SpectralGrid(12)

cases = [
    ("stable roll, decaying sideband", 0.05, 0.0, 0.7, 0.25, 4, 0.05, 200.0),
    ("unstable roll (s beyond the band)", 0.05, 0.0, 1.5, 1.0 / 24.0, 24, 0.2, None),
    ("unstable roll (omega beyond the band)", 0.05, 0.4, 0.0, 1.0 / 36.0, 36, 0.2, None),
]

print(f"{'case':<38} {'sigma':>8} {'expected':>11} {'measured':>11} {'rel err':>8} {'mass drift':>11}")
for label, eps, omega, s, sigma, periods, dt, t_final in cases:
    roll = solve_roll(RollParameters(eps, omega, s), grid)
    cfg = EvolutionConfig(n_periods=periods, dt=dt, seed_sigma=sigma, t_final=t_final)
    res = evolve(roll, cfg)
    rel = abs(res.measured_rate - res.expected_rate) / abs(res.expected_rate)
    print(f"{label:<38} {res.seed_sigma:8.4f} {res.expected_rate:11.3e} "
          f"{res.measured_rate:11.3e} {rel:8.1e} {res.mass_drift:11.1e}")

print()
print("Decaying case: the perturbation norm falls exponentially at the Bloch rate.")
print("Unstable cases: growth saturates only far beyond the linear regime; the")
print("fit window stays inside it, so the measured slope is the spectral rate.")
