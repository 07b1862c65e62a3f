"""Dressed transmon-cavity spectrum: build, diagonalize, label, enumerate lines.

The transmon is truncated first in its own eigenbasis, then tensored with a
Fock space of ``n_ph_max + 1`` photon states.  The coupling keeps the full
(non-rotating-wave) form g * (a + a^dagger) * n, so counter-rotating shifts
are included exactly.

Dressed eigenstates are labeled |n_q, n_ph> by their dominant bare product
component via a global greedy max-overlap assignment; a label that wins with
overlap weight <= 0.5 is flagged ambiguous (it sits near an avoided crossing).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, LabelingAmbiguous, MissingLabel
from .junction import FluxCalibration, SquidParams, ej_of_flux, flux_from_current
from .transmon import ChargeBasisConfig, TransmonEigens, TransmonParams, solve_transmon

DEFAULT_N_PH_MAX = 5


@dataclass(frozen=True)
class CavityParams:
    """Cavity frequency and capacitive coupling rate (both GHz), photon cutoff."""

    omega_c: float
    g: float
    n_ph_max: int = DEFAULT_N_PH_MAX

    def __post_init__(self):
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if self.n_ph_max < 1:
            raise ValueError(f"n_ph_max must be >= 1, got {self.n_ph_max}")


@dataclass(frozen=True, order=True)
class StateLabel:
    """Bare product label: transmon index and photon number."""

    n_q: int
    n_ph: int


@dataclass(frozen=True)
class DressedState:
    label: StateLabel
    energy: float
    overlap: float
    ambiguous: bool


@dataclass(frozen=True)
class DressedSpectrum:
    """Labeled dressed eigenstates at a single flux point."""

    states: tuple[DressedState, ...]
    transmon: TransmonParams
    cavity: CavityParams
    _by_label: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        lookup = {s.label: s for s in self.states}
        object.__setattr__(self, "_by_label", lookup)

    def state(self, label: StateLabel) -> DressedState:
        try:
            s = self._by_label[label]
        except KeyError:
            raise MissingLabel(f"label ({label.n_q},{label.n_ph}) not in kept subspace")
        if s.ambiguous:
            raise MissingLabel(
                f"label ({label.n_q},{label.n_ph}) is ambiguous (overlap {s.overlap:.3f})"
            )
        return s

    def energy(self, label: StateLabel) -> float:
        return self.state(label).energy


@dataclass(frozen=True)
class TransitionLine:
    """A (possibly composite) spectral line: sum of labeled transitions."""

    kind: str
    frequency: float
    constituents: tuple[tuple[StateLabel, StateLabel], ...]


# Composite Raman lines seen in two-tone spectroscopy: each is the 01
# transition plus a cavity-assisted transition into a higher transmon level.
RAMAN_CONSTITUENTS = {
    "raman_a": (
        (StateLabel(0, 0), StateLabel(1, 0)),
        (StateLabel(0, 1), StateLabel(3, 0)),
    ),
    "raman_b": (
        (StateLabel(0, 0), StateLabel(1, 0)),
        (StateLabel(1, 1), StateLabel(4, 0)),
    ),
    "raman_c": (
        (StateLabel(0, 0), StateLabel(1, 0)),
        (StateLabel(2, 1), StateLabel(5, 0)),
    ),
}


def build_dressed_hamiltonian(
    te: TransmonEigens, n_q_levels: int, cav: CavityParams
) -> np.ndarray:
    """Dense symmetric dressed Hamiltonian in the product basis, GHz.

    Basis index is transmon-major: k = i * (n_ph_max + 1) + n.
    """
    if n_q_levels > te.n_levels:
        raise DimensionError(
            f"n_q_levels={n_q_levels} exceeds available transmon levels {te.n_levels}"
        )
    n_ph = cav.n_ph_max + 1
    e_q = te.energies[:n_q_levels]
    n_el = te.n_elements[:n_q_levels, :n_q_levels]
    x = np.zeros((n_ph, n_ph))
    rng = np.arange(1, n_ph)
    x[rng - 1, rng] = np.sqrt(rng)  # a
    x += x.T  # a + a^dagger
    h = np.kron(np.diag(e_q), np.eye(n_ph))
    h += np.kron(np.eye(n_q_levels), cav.omega_c * np.diag(np.arange(n_ph, dtype=float)))
    h += cav.g * np.kron(n_el, x)
    return h


def label_dressed_states(
    energies: np.ndarray,
    vectors: np.ndarray,
    n_q_levels: int,
    tp: TransmonParams,
    cav: CavityParams,
    warn_ambiguous: bool = True,
) -> DressedSpectrum:
    """Assign bare product labels to dressed eigenpairs.

    Global greedy assignment on descending overlap weight |<bare|dressed>|^2,
    injective in both eigenstates and labels.  Energies are gauged so the
    (0, 0) state sits at zero.
    """
    dim = len(energies)
    if vectors.shape != (dim, dim):
        raise DimensionError("eigenvector matrix shape does not match energies")
    n_ph = cav.n_ph_max + 1
    weights = vectors**2  # [bare, eigen]
    label_of_eigen: dict[int, tuple[int, float]] = {}
    best = np.argmax(weights, axis=0)
    if len(set(best.tolist())) == dim:
        # Fast path: per-eigenstate argmax already forms a bijection.
        for k in range(dim):
            label_of_eigen[k] = (int(best[k]), float(weights[best[k], k]))
    else:
        order = np.dstack(
            np.unravel_index(np.argsort(weights, axis=None)[::-1], weights.shape)
        )[0]
        taken_bare: set[int] = set()
        for bare, k in order:
            if k in label_of_eigen or bare in taken_bare:
                continue
            label_of_eigen[int(k)] = (int(bare), float(weights[bare, k]))
            taken_bare.add(int(bare))
            if len(label_of_eigen) == dim:
                break
    states = []
    for k in range(dim):
        bare, w = label_of_eigen[k]
        label = StateLabel(n_q=bare // n_ph, n_ph=bare % n_ph)
        ambiguous = w <= 0.5
        if ambiguous and warn_ambiguous:
            warnings.warn(
                f"state ({label.n_q},{label.n_ph}) labeled with overlap {w:.3f}",
                LabelingAmbiguous,
                stacklevel=2,
            )
        states.append(DressedState(label=label, energy=float(energies[k]), overlap=w, ambiguous=ambiguous))
    ground = next(s.energy for s in states if s.label == StateLabel(0, 0))
    states = [
        DressedState(s.label, s.energy - ground, s.overlap, s.ambiguous) for s in states
    ]
    return DressedSpectrum(states=tuple(states), transmon=tp, cavity=cav)


def solve_dressed(
    tp: TransmonParams,
    cav: CavityParams,
    cfg: ChargeBasisConfig | None = None,
    n_q_levels: int = 6,
    check_cutoff: bool = True,
    warn_ambiguous: bool = True,
) -> DressedSpectrum:
    """Full pipeline: transmon solve, dressed build, diagonalize, label."""
    te = solve_transmon(tp, cfg, n_levels=n_q_levels, check_cutoff=check_cutoff)
    h = build_dressed_hamiltonian(te, n_q_levels, cav)
    energies, vectors = np.linalg.eigh(h)
    return label_dressed_states(
        energies, vectors, n_q_levels, tp, cav, warn_ambiguous=warn_ambiguous
    )


def transition_frequency(ds: DressedSpectrum, frm: StateLabel, to: StateLabel) -> float:
    """E(to) - E(frm) in GHz; negative for downward transitions."""
    return ds.energy(to) - ds.energy(frm)


def raman_lines(ds: DressedSpectrum) -> list[TransitionLine]:
    """The three composite Raman lines computed from labeled dressed energies."""
    lines = []
    for kind, pairs in RAMAN_CONSTITUENTS.items():
        freq = sum(transition_frequency(ds, a, b) for a, b in pairs)
        lines.append(TransitionLine(kind=kind, frequency=freq, constituents=pairs))
    return lines


def parse_line_request(request: str) -> tuple[tuple[StateLabel, StateLabel], ...]:
    """Parse a line request string into constituent (from, to) label pairs.

    Formats: ``"0,0->1,0"`` for a single transition, sums joined with ``+``
    for composite lines, or the shorthands ``raman_a``, ``raman_b``,
    ``raman_c``.
    """
    key = request.strip().lower()
    if key in RAMAN_CONSTITUENTS:
        return RAMAN_CONSTITUENTS[key]
    pairs = []
    for term in key.split("+"):
        try:
            frm, to = term.split("->")
            fq, fp = (int(v) for v in frm.split(","))
            tq, tp_ = (int(v) for v in to.split(","))
        except ValueError:
            raise ValueError(f"cannot parse line request {request!r}")
        pairs.append((StateLabel(fq, fp), StateLabel(tq, tp_)))
    return tuple(pairs)


def line_frequency(ds: DressedSpectrum, request: str) -> float:
    """Frequency of a requested (possibly composite) line, GHz."""
    return sum(transition_frequency(ds, a, b) for a, b in parse_line_request(request))


@dataclass(frozen=True)
class SweepPoint:
    """One row of a flux sweep: a single line evaluated at one current."""

    current: float
    flux_ratio: float
    line_kind: str
    frequency: float  # NaN when status != "ok"
    status: str  # "ok" or an error marker


def flux_sweep_spectrum(
    squid: SquidParams,
    cal: FluxCalibration,
    tp_base: TransmonParams,
    cav: CavityParams,
    currents,
    lines: list[str],
    cfg: ChargeBasisConfig | None = None,
    n_q_levels: int = 6,
    check_cutoff: bool = False,
) -> list[SweepPoint]:
    """Evaluate requested line frequencies at each coil current.

    Points are independent; a failure at one current is recorded with an
    error status rather than aborting the sweep, so outputs stay aligned
    index-wise with the input current list.  Output ordering is by current
    list position, then by line request order.
    """
    rows: list[SweepPoint] = []
    for current in currents:
        phi = flux_from_current(cal, current)
        try:
            ej = ej_of_flux(squid, phi)
            tp = TransmonParams(e_c=tp_base.e_c, e_j=ej, n_g=tp_base.n_g)
            ds = solve_dressed(
                tp, cav, cfg, n_q_levels=n_q_levels,
                check_cutoff=check_cutoff, warn_ambiguous=False,
            )
        except Exception as exc:
            marker = f"error:{type(exc).__name__}"
            rows.extend(
                SweepPoint(current, phi, line, float("nan"), marker) for line in lines
            )
            continue
        for line in lines:
            try:
                freq = line_frequency(ds, line)
            except MissingLabel:
                rows.append(SweepPoint(current, phi, line, float("nan"), "error:MissingLabel"))
            else:
                rows.append(SweepPoint(current, phi, line, freq, "ok"))
    return rows
