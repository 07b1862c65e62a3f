"""Physical constants (SI-2019 exact values) used throughout the package.

Internal canonical units are GHz for energies-as-frequencies and SI for
everything else; conversions happen only at module boundaries.
"""

# Planck constant, J*s (exact, SI-2019)
PLANCK_H = 6.62607015e-34

# Magnetic flux quantum h/2e, Wb (exact, SI-2019)
FLUX_QUANTUM = 2.067833848e-15
