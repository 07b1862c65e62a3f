"""Charge-basis construction and exact diagonalization of the bare transmon.

The Hamiltonian 4*E_C*(n - n_g)^2 - (E_J/2)(|n><n+1| + h.c.) is built as a
dense real-symmetric matrix in the charge basis n = -n_cut..n_cut and solved
with a full symmetric eigensolver (dimensions here are ~100 at most, so
determinism beats sparsity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, CutoffError

# Levels 0-5 at n_cut=30 are converged far below this for every parameter
# range this package targets (e_j/e_c <= ~200).
CUTOFF_RTOL = 1e-10

DEFAULT_N_CUT = 30
DEFAULT_N_LEVELS = 6


@dataclass(frozen=True)
class TransmonParams:
    """Charging energy, Josephson energy (both GHz) and offset charge."""

    e_c: float
    e_j: float
    n_g: float = 0.0

    def __post_init__(self):
        if not self.e_c > 0:
            raise ValueError(f"e_c must be positive, got {self.e_c}")
        if self.e_j < 0:
            raise ValueError(f"e_j must be nonnegative, got {self.e_j}")


@dataclass(frozen=True)
class ChargeBasisConfig:
    """Charge cutoff; the basis spans charge states -n_cut..+n_cut."""

    n_cut: int = DEFAULT_N_CUT

    def __post_init__(self):
        if self.n_cut < 1:
            raise ValueError(f"n_cut must be >= 1, got {self.n_cut}")

    @property
    def dim(self) -> int:
        return 2 * self.n_cut + 1


@dataclass(frozen=True)
class TransmonEigens:
    """Eigenfrequencies (ground state gauged to 0) and charge matrix elements.

    energies   : ascending eigenfrequencies in GHz, energies[0] == 0.
    n_elements : <i|n|j> in the eigenbasis, real-symmetric with the phase
                 convention that each eigenvector's largest-magnitude
                 component is positive.
    """

    energies: np.ndarray
    n_elements: np.ndarray

    @property
    def n_levels(self) -> int:
        return len(self.energies)


def build_charge_hamiltonian(p: TransmonParams, cfg: ChargeBasisConfig) -> np.ndarray:
    """Dense real-symmetric transmon Hamiltonian in the charge basis, GHz."""
    n = np.arange(-cfg.n_cut, cfg.n_cut + 1, dtype=float)
    h = np.diag(4.0 * p.e_c * (n - p.n_g) ** 2)
    off = np.full(cfg.dim - 1, -p.e_j / 2.0)
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def _solve_once(p: TransmonParams, cfg: ChargeBasisConfig, n_levels: int):
    h = build_charge_hamiltonian(p, cfg)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    w = w[:n_levels]
    v = v[:, :n_levels]
    # Deterministic phase: largest-|component| entry of each vector positive.
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    v = v * signs
    n_op = np.arange(-cfg.n_cut, cfg.n_cut + 1, dtype=float)
    n_el = v.T @ (n_op[:, None] * v)
    return w - w[0], n_el


def solve_transmon(
    p: TransmonParams,
    cfg: ChargeBasisConfig | None = None,
    n_levels: int = DEFAULT_N_LEVELS,
    check_cutoff: bool = True,
) -> TransmonEigens:
    """Lowest ``n_levels`` transmon eigenfrequencies plus <i|n|j> elements.

    With ``check_cutoff`` the solve is repeated at doubled n_cut and a
    CutoffError is raised if any requested level moves by more than
    CUTOFF_RTOL (relative to the local energy scale).  Disable inside tight
    parameter sweeps where the cutoff has already been validated.
    """
    cfg = cfg or ChargeBasisConfig()
    if n_levels > cfg.dim:
        raise ValueError(f"n_levels={n_levels} exceeds basis dimension {cfg.dim}")
    energies, n_el = _solve_once(p, cfg, n_levels)
    if check_cutoff:
        ref, _ = _solve_once(p, ChargeBasisConfig(2 * cfg.n_cut), n_levels)
        scale = max(np.max(np.abs(ref)), p.e_c)
        if np.max(np.abs(energies - ref)) > CUTOFF_RTOL * scale:
            raise CutoffError(
                f"n_cut={cfg.n_cut} not converged for e_j/e_c={p.e_j / p.e_c:.1f}"
            )
    return TransmonEigens(energies=energies, n_elements=n_el)


def asymptotic_f01(p: TransmonParams) -> float:
    """Large-E_J/E_C estimate sqrt(8*e_j*e_c) - e_c, GHz.

    Used for fit initialization and cross-checks; not accurate (and possibly
    negative) outside the transmon regime.
    """
    return float(np.sqrt(8.0 * p.e_j * p.e_c) - p.e_c)
