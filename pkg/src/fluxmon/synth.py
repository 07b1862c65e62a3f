"""Synthetic spectroscopy-map and decay-trace generation for round-trip tests.

Model lines are rendered as Gaussian lineshapes of configurable width onto a
magnitude grid; Gaussian noise is added with a seeded generator so outputs
are bit-reproducible.
"""

from __future__ import annotations

import numpy as np

from .decay import DecayTrace
from .fitting import SpectrumModel
from .peaks import SpectroscopyDataset


def synthesize_map(
    model: SpectrumModel,
    currents,
    frequencies,
    linewidth: float = 0.01,
    noise: float = 0.0,
    freq_noise: float = 0.0,
    seed: int = 0,
) -> SpectroscopyDataset:
    """Render the model's lines onto a (current, frequency) magnitude grid.

    Each line contributes a unit-amplitude Gaussian of standard deviation
    ``linewidth`` (GHz); ``noise`` is the standard deviation of additive
    magnitude noise (so the signal-to-noise ratio is 1/noise) and
    ``freq_noise`` jitters each line center, GHz.
    """
    currents = np.asarray(currents, dtype=float)
    frequencies = np.asarray(frequencies, dtype=float)
    if linewidth <= 0:
        raise ValueError(f"linewidth must be positive, got {linewidth}")
    if noise < 0 or freq_noise < 0:
        raise ValueError("noise levels must be nonnegative")
    predictions = model.predict(currents)
    rng = np.random.default_rng(seed)
    grid = np.zeros((len(currents), len(frequencies)))
    for i, current in enumerate(currents):
        for freq in predictions[current].values():
            if np.isfinite(freq):
                if freq_noise > 0:
                    freq = freq + freq_noise * rng.standard_normal()
                grid[i] += np.exp(-0.5 * ((frequencies - freq) / linewidth) ** 2)
    if noise > 0:
        grid += noise * rng.standard_normal(grid.shape)
    return SpectroscopyDataset(currents=currents, frequencies=frequencies, magnitudes=grid)


def synthesize_peaks(
    model: SpectrumModel,
    currents,
    freq_noise: float = 0.0,
    seed: int = 0,
):
    """Model line positions as a peak list, with optional frequency jitter.

    Cheaper than rendering a full map; used for Monte-Carlo fit validation.
    """
    from .peaks import Peak

    currents = np.asarray(currents, dtype=float)
    predictions = model.predict(currents)
    rng = np.random.default_rng(seed)
    peaks = []
    for current in currents:
        for freq in predictions[current].values():
            if np.isfinite(freq):
                jitter = freq_noise * rng.standard_normal() if freq_noise > 0 else 0.0
                peaks.append(Peak(current=float(current), frequency=float(freq + jitter), prominence=1.0))
    return peaks


def synthesize_decay(
    amplitude: float,
    offset: float,
    t1: float,
    delays,
    noise: float = 0.0,
    seed: int = 0,
) -> DecayTrace:
    """Exponential decay trace with optional additive Gaussian noise."""
    delays = np.asarray(delays, dtype=float)
    values = amplitude * np.exp(-delays / t1) + offset
    if noise > 0:
        rng = np.random.default_rng(seed)
        values = values + noise * rng.standard_normal(len(delays))
    return DecayTrace(delays=delays, values=values)
