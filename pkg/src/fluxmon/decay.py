"""Exponential energy-relaxation fits: A*exp(-t/T1) + B.

Initialization is deterministic (tail mean for the offset, head mean for the
amplitude, log-linear regression for the time constant) and the optimization
runs in time units normalized to the trace span, so scaling all delays by a
factor scales the fitted T1 by exactly that factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares
from sklearn.base import BaseEstimator

from .errors import InsufficientData, NonDecaying

# T1 upper bound in units of the trace span; hitting it means the trace
# does not decay on the measured window.
T1_UPPER_SPAN = 1e3
T1_LOWER_SPAN = 1e-6


@dataclass(frozen=True)
class DecayTrace:
    """Measured relaxation trace: delays in microseconds, ascending."""

    delays: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        delays = np.asarray(self.delays, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "values", values)
        if delays.shape != values.shape or delays.ndim != 1:
            raise ValueError("delays and values must be 1-D arrays of equal length")
        if len(delays) and (np.any(delays < 0) or np.any(np.diff(delays) <= 0)):
            raise ValueError("delays must be nonnegative and strictly ascending")


@dataclass(frozen=True)
class DecayFit:
    """Best-fit amplitude, offset, time constant, and 1-sigma uncertainty on T1."""

    amplitude: float
    offset: float
    t1: float  # microseconds
    t1_sigma: float
    residual_rms: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "amplitude": float(self.amplitude),
            "offset": float(self.offset),
            "t1_us": float(self.t1),
            "t1_sigma_us": float(self.t1_sigma),
            "residual_rms": float(self.residual_rms),
            "n_points": int(self.n_points),
        }


def _initial_guess(t: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    n = len(t)
    n_tail = max(2, n // 5)
    offset = float(np.mean(y[-n_tail:]))
    amplitude = float(np.mean(y[:n_tail]) - offset)
    span = t[-1] - t[0]
    t1 = span / 3.0
    if amplitude != 0:
        shifted = (y - offset) / amplitude
        good = shifted > 1e-3
        if np.sum(good) >= 2:
            slope = np.polyfit(t[good], np.log(shifted[good]), 1)[0]
            if slope < 0:
                t1 = -1.0 / slope
    return amplitude, offset, float(np.clip(t1, T1_LOWER_SPAN * span, T1_UPPER_SPAN * span))


class ExponentialDecayModel(BaseEstimator):
    """Scikit-learn style estimator for single-exponential decay traces."""

    def fit(self, delays, values) -> "ExponentialDecayModel":
        trace = DecayTrace(np.asarray(delays, float), np.asarray(values, float))
        n = len(trace.delays)
        if n < 4:
            raise InsufficientData(f"need >= 4 points, got {n}")
        span = float(trace.delays[-1] - trace.delays[0])
        if span <= 0:
            raise InsufficientData("delays span zero time")

        # Normalize time so the optimizer tolerances are scale-free.
        t = (trace.delays - trace.delays[0]) / span
        y = trace.values
        a0, b0, t1_0 = _initial_guess(t, y)
        y_scale = max(abs(a0), np.ptp(y), 1e-30)

        def residuals(p):
            a, b, t1 = p
            return (a * np.exp(-t / t1) + b - y) / y_scale

        lower = [-np.inf, -np.inf, T1_LOWER_SPAN]
        upper = [np.inf, np.inf, T1_UPPER_SPAN]
        res = least_squares(
            residuals,
            [a0, b0, np.clip(t1_0, 2 * T1_LOWER_SPAN, T1_UPPER_SPAN / 2)],
            bounds=(lower, upper),
            xtol=1e-14,
            ftol=1e-14,
            gtol=1e-14,
        )
        a, b, t1_norm = res.x
        if t1_norm >= 0.99 * T1_UPPER_SPAN or a <= 0:
            raise NonDecaying("trace does not decay over the measured window")

        jac = res.jac
        dof = max(n - 3, 1)
        s2 = 2.0 * res.cost / dof
        try:
            cov = np.linalg.inv(jac.T @ jac) * s2
            t1_sigma = float(np.sqrt(cov[2, 2]))
        except np.linalg.LinAlgError:
            t1_sigma = float("nan")

        shift = trace.delays[0]
        # Un-normalize: model was a*exp(-(t-t0)/T1)+b in normalized time.
        self.amplitude_ = float(a * np.exp(shift / (t1_norm * span)))
        self.offset_ = float(b)
        self.t1_ = float(t1_norm * span)
        self.t1_sigma_ = t1_sigma * span
        self.residual_rms_ = float(np.sqrt(np.mean((res.fun * y_scale) ** 2)))
        self.n_points_ = n
        self.result_ = DecayFit(
            amplitude=self.amplitude_,
            offset=self.offset_,
            t1=self.t1_,
            t1_sigma=self.t1_sigma_,
            residual_rms=self.residual_rms_,
            n_points=n,
        )
        return self

    def predict(self, delays) -> np.ndarray:
        d = np.asarray(delays, dtype=float)
        return self.amplitude_ * np.exp(-d / self.t1_) + self.offset_


def fit_exponential_decay(trace: DecayTrace) -> DecayFit:
    """Fit A*exp(-t/T1) + B to a relaxation trace."""
    return ExponentialDecayModel().fit(trace.delays, trace.values).result_
