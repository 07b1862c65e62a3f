"""SQUID flux tuning and Ambegaokar-Baratoff junction consistency checks.

All Josephson energies are expressed as frequencies (GHz, i.e. E/h).  The
superconducting gap is handled as a voltage (the gap energy divided by the
electron charge), which is the convention that makes E_J = Phi_0*Delta/(4*R_n)
dimensionally consistent and matches gaps quoted in microvolts.

Everything here is a pure function of immutable value types; safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import FLUX_QUANTUM, PLANCK_H


@dataclass(frozen=True)
class SquidParams:
    """Two-junction SQUID loop: total Josephson energy and asymmetry.

    ej_sum : total Josephson energy of the two junctions, GHz.
    d      : dimensionless junction asymmetry, in [0, 1).
    """

    ej_sum: float
    d: float = 0.0

    def __post_init__(self):
        if not self.ej_sum > 0:
            raise ValueError(f"ej_sum must be positive, got {self.ej_sum}")
        if not 0 <= self.d < 1:
            raise ValueError(f"d must be in [0, 1), got {self.d}")


@dataclass(frozen=True)
class FluxCalibration:
    """Affine map from coil current (A) to flux in units of the flux quantum."""

    current_at_zero_flux: float
    current_per_flux_quantum: float

    def __post_init__(self):
        if self.current_per_flux_quantum == 0:
            raise ValueError("current_per_flux_quantum must be nonzero")


@dataclass(frozen=True)
class JunctionDC:
    """DC junction characterization: normal-state resistance and gap voltage."""

    r_n: float
    delta_v: float

    def __post_init__(self):
        if not self.r_n > 0:
            raise ValueError(f"r_n must be positive, got {self.r_n}")
        if not self.delta_v > 0:
            raise ValueError(f"delta_v must be positive, got {self.delta_v}")


def ej_of_flux(squid: SquidParams, phi_ratio):
    """Effective Josephson energy |E_J(Phi)| of an asymmetric SQUID, GHz.

    Uses the magnitude form E_Jsum * sqrt(cos^2 + d^2 sin^2), which is finite
    at half-integer flux where the cos*sqrt(1 + d^2 tan^2) form is an
    indeterminate limit.  Periodic with period 1 and even in ``phi_ratio``.
    """
    x = np.pi * np.asarray(phi_ratio, dtype=float)
    out = squid.ej_sum * np.sqrt(np.cos(x) ** 2 + squid.d**2 * np.sin(x) ** 2)
    return out if out.ndim else float(out)


def flux_from_current(cal: FluxCalibration, current):
    """Convert coil current (A) to flux in units of the flux quantum."""
    out = (np.asarray(current, dtype=float) - cal.current_at_zero_flux) / cal.current_per_flux_quantum
    return out if out.ndim else float(out)


def ab_josephson_energy(dc: JunctionDC) -> float:
    """Josephson energy (GHz) predicted from R_n and the gap voltage."""
    return FLUX_QUANTUM * dc.delta_v / (4.0 * dc.r_n * PLANCK_H) / 1e9


def ab_inferred_gap(r_n: float, ej: float) -> float:
    """Gap voltage (V) inferred from R_n (ohm) and a measured E_J/h (GHz).

    Exact inverse of :func:`ab_josephson_energy`.
    """
    if not r_n > 0:
        raise ValueError(f"r_n must be positive, got {r_n}")
    if ej < 0:
        raise ValueError(f"ej must be nonnegative, got {ej}")
    return 4.0 * r_n * ej * 1e9 * PLANCK_H / FLUX_QUANTUM
