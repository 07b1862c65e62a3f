"""Peak extraction from spectroscopy maps and peak-to-line assignment.

A spectroscopy map is a rectangular grid of response magnitudes over
(coil current, probe frequency).  Each current column is searched
independently: smooth, subtract the column median, find prominent maxima of
the absolute deviation, and refine each maximum by parabolic interpolation.
Prominence is measured as a fraction of the column's dynamic range, so the
extraction is invariant under affine rescaling of the magnitudes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from .errors import EmptyColumn


@dataclass(frozen=True)
class SpectroscopyDataset:
    """Grid of (current, frequency, magnitude); axes strictly monotone."""

    currents: np.ndarray  # A, ascending
    frequencies: np.ndarray  # GHz, ascending
    magnitudes: np.ndarray  # arbitrary units, shape (n_currents, n_frequencies)

    def __post_init__(self):
        currents = np.asarray(self.currents, dtype=float)
        frequencies = np.asarray(self.frequencies, dtype=float)
        magnitudes = np.asarray(self.magnitudes, dtype=float)
        object.__setattr__(self, "currents", currents)
        object.__setattr__(self, "frequencies", frequencies)
        object.__setattr__(self, "magnitudes", magnitudes)
        if magnitudes.shape != (len(currents), len(frequencies)):
            raise ValueError(
                f"grid shape {magnitudes.shape} does not match axes "
                f"({len(currents)}, {len(frequencies)})"
            )
        if len(currents) > 1 and not np.all(np.diff(currents) > 0):
            raise ValueError("currents must be strictly ascending")
        if len(frequencies) > 1 and not np.all(np.diff(frequencies) > 0):
            raise ValueError("frequencies must be strictly ascending")


@dataclass(frozen=True)
class Peak:
    """One extracted peak, optionally assigned to a model line."""

    current: float  # A
    frequency: float  # GHz
    prominence: float  # fraction of the column dynamic range
    line_kind: str | None = None


def _refine_parabolic(freqs: np.ndarray, signal: np.ndarray, i: int) -> float:
    """Vertex of the parabola through the 3 samples around a maximum."""
    if i == 0 or i == len(signal) - 1:
        return float(freqs[i])
    denom = signal[i - 1] - 2.0 * signal[i] + signal[i + 1]
    if denom == 0:
        return float(freqs[i])
    delta = 0.5 * (signal[i - 1] - signal[i + 1]) / denom
    delta = float(np.clip(delta, -0.5, 0.5))
    step = 0.5 * (freqs[i + 1] - freqs[i - 1])
    return float(freqs[i] + delta * step)


def extract_peaks(
    ds: SpectroscopyDataset,
    smoothing_window: int = 3,
    min_prominence: float = 0.2,
) -> list[Peak]:
    """Find prominent spectral peaks in every current column.

    smoothing_window : odd moving-average width in samples (1 = no smoothing).
    min_prominence   : required prominence as a fraction of the column's
                       dynamic range, in (0, 1].

    Columns that are entirely NaN are skipped with a warning.  Raises
    EmptyColumn when the frequency axis has fewer than 3 samples.
    """
    if smoothing_window < 1 or smoothing_window % 2 == 0:
        raise ValueError(f"smoothing_window must be odd and >= 1, got {smoothing_window}")
    if not 0 < min_prominence <= 1:
        raise ValueError(f"min_prominence must be in (0, 1], got {min_prominence}")
    if len(ds.frequencies) < 3:
        raise EmptyColumn(f"need >= 3 frequency samples, got {len(ds.frequencies)}")

    peaks: list[Peak] = []
    for row, current in enumerate(ds.currents):
        column = ds.magnitudes[row]
        if np.all(np.isnan(column)):
            warnings.warn(f"column at current {current:g} A is all-NaN, skipped", stacklevel=2)
            continue
        smoothed = uniform_filter1d(column, size=smoothing_window, mode="nearest")
        signal = np.abs(smoothed - np.median(smoothed))
        dyn = float(np.max(signal) - np.min(signal))
        if dyn == 0:
            continue
        idx, props = find_peaks(signal, prominence=min_prominence * dyn)
        for i, prom in zip(idx, props["prominences"]):
            peaks.append(
                Peak(
                    current=float(current),
                    frequency=_refine_parabolic(ds.frequencies, signal, int(i)),
                    prominence=float(prom) / dyn,
                )
            )
    return peaks


def assign_peaks_to_lines(
    peaks: list[Peak],
    predictions: dict[float, dict[str, float]],
    max_distance: float,
) -> list[Peak]:
    """Assign each peak to the nearest predicted line within ``max_distance``.

    ``predictions`` maps current -> {line kind -> predicted frequency GHz} and
    must cover every peak's current.  At most one peak is assigned per line
    per current; the nearest peak wins, ties broken by lower peak index.
    Unmatched peaks come back with ``line_kind=None``.
    """
    out = [replace(p, line_kind=None) for p in peaks]
    by_current: dict[float, list[int]] = {}
    for i, p in enumerate(peaks):
        by_current.setdefault(p.current, []).append(i)
    for current, indices in by_current.items():
        if current not in predictions:
            raise KeyError(f"no model prediction at current {current!r}")
        lines = {
            kind: freq
            for kind, freq in predictions[current].items()
            if np.isfinite(freq)
        }
        candidates = sorted(
            (abs(peaks[i].frequency - freq), i, kind)
            for i in indices
            for kind, freq in lines.items()
            if abs(peaks[i].frequency - freq) <= max_distance
        )
        used_lines: set[str] = set()
        used_peaks: set[int] = set()
        for _dist, i, kind in candidates:
            if kind in used_lines or i in used_peaks:
                continue
            out[i] = replace(peaks[i], line_kind=kind)
            used_lines.add(kind)
            used_peaks.add(i)
    return out
