"""Physical constants in spectroscopic units.

All energies and couplings are expressed in wavenumbers (cm^-1) and all
times in picoseconds, so hbar carries units of cm^-1 * ps and rates such
as gamma / hbar come out in ps^-1 directly.
"""

HBAR_CM1_PS = 5.3088375
"""Reduced Planck constant, cm^-1 * ps."""

KB_CM1_PER_K = 0.69503476
"""Boltzmann constant, cm^-1 / K."""
