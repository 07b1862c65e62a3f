"""Flux-tunable transmon-cavity spectroscopy toolkit.

Models a SQUID-based transmon coupled to a 3D cavity: exact diagonalization
of the dressed Hamiltonian, flux-dependent transition lines (including
composite Raman lines), spectroscopy peak extraction and model fitting,
Ambegaokar-Baratoff junction consistency checks, and exponential T1 fits.
"""

from .decay import DecayFit, DecayTrace, ExponentialDecayModel, fit_exponential_decay
from .dressed import (
    CavityParams,
    DressedSpectrum,
    DressedState,
    StateLabel,
    SweepPoint,
    TransitionLine,
    build_dressed_hamiltonian,
    flux_sweep_spectrum,
    label_dressed_states,
    line_frequency,
    parse_line_request,
    raman_lines,
    solve_dressed,
    transition_frequency,
)
from .errors import (
    BoundaryStuck,
    ConvergenceError,
    CutoffError,
    DimensionError,
    EmptyColumn,
    FluxmonError,
    InsufficientData,
    LabelingAmbiguous,
    MissingLabel,
    NoConvergence,
    NonDecaying,
)
from .fitting import THETA_NAMES, FitParams, FitResult, SpectrumModel, fit_spectrum
from .junction import (
    FluxCalibration,
    JunctionDC,
    SquidParams,
    ab_inferred_gap,
    ab_josephson_energy,
    ej_of_flux,
    flux_from_current,
)
from .peaks import Peak, SpectroscopyDataset, assign_peaks_to_lines, extract_peaks
from .synth import synthesize_decay, synthesize_map, synthesize_peaks
from .transmon import (
    ChargeBasisConfig,
    TransmonEigens,
    TransmonParams,
    asymptotic_f01,
    build_charge_hamiltonian,
    solve_transmon,
)

__version__ = "0.1.0"
