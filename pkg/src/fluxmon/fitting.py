"""Fit the dressed transmon-cavity model to flux-dependent spectroscopy peaks.

The estimator follows the scikit-learn convention (constructor parameters,
``fit``/``predict``, ``get_params``) so it composes with the wider ecosystem.
The fit is a nested loop: assign peaks to predicted lines, run bounded
least squares over the free parameters, reassign, and repeat until the
assignment is stable.  Uncertainties come from the Gauss-Newton curvature at
the optimum.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares
from sklearn.base import BaseEstimator

from .dressed import CavityParams, flux_sweep_spectrum
from .errors import BoundaryStuck, InsufficientData, NoConvergence
from .junction import FluxCalibration, SquidParams
from .peaks import Peak, assign_peaks_to_lines
from .transmon import ChargeBasisConfig, TransmonParams

THETA_NAMES = (
    "e_c",
    "ej_sum",
    "d",
    "omega_c",
    "g",
    "current_at_zero_flux",
    "current_per_flux_quantum",
)

DEFAULT_BOUNDS = {
    "e_c": (1e-3, 2.0),
    "ej_sum": (0.1, 100.0),
    "d": (0.0, 0.99),
    "omega_c": (0.1, 50.0),
    "g": (0.0, 2.0),
    "current_at_zero_flux": (-10.0, 10.0),
    "current_per_flux_quantum": (1e-9, 10.0),
}

# Residual substituted when the model cannot produce a requested line
# (truncated or ambiguous label); keeps the optimizer away without NaNs.
MISSING_LINE_PENALTY = 1.0

# Smallest tolerated ratio of singular values of the Jacobian before the
# fit is declared degenerate.
RCOND_LIMIT = 1e-10


@dataclass(frozen=True)
class FitParams:
    """Initial parameter vector with per-parameter bounds and a frozen mask."""

    theta: np.ndarray  # length 7, THETA_NAMES order
    lower: np.ndarray
    upper: np.ndarray
    frozen: np.ndarray  # bool, frozen parameters stay at theta

    @classmethod
    def from_values(cls, bounds: dict | None = None, frozen=(), **values) -> "FitParams":
        theta = np.array([float(values[name]) for name in THETA_NAMES])
        merged = dict(DEFAULT_BOUNDS)
        merged.update(bounds or {})
        lower = np.array([merged[name][0] for name in THETA_NAMES])
        upper = np.array([merged[name][1] for name in THETA_NAMES])
        mask = np.array([name in frozen for name in THETA_NAMES])
        fp = cls(theta=theta, lower=lower, upper=upper, frozen=mask)
        fp.validate()
        return fp

    def validate(self):
        if not 0 <= self.theta[THETA_NAMES.index("d")] < 1:
            raise ValueError("d must be in [0, 1)")
        bad = (self.theta < self.lower) | (self.theta > self.upper)
        if np.any(bad):
            names = [THETA_NAMES[i] for i in np.flatnonzero(bad)]
            raise ValueError(f"initial values outside bounds: {names}")

    def as_dict(self) -> dict:
        return dict(zip(THETA_NAMES, self.theta))


@dataclass(frozen=True)
class FitResult:
    """Best-fit parameters, residuals, and convergence diagnostics."""

    theta: np.ndarray
    sigma: np.ndarray  # 1-sigma per parameter, NaN for frozen parameters
    residuals: np.ndarray  # GHz, one per assigned peak
    residual_rms: float
    n_outer: int
    n_evaluations: int
    optimality: float
    status: int
    message: str
    assigned_peaks: tuple[Peak, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "theta": dict(zip(THETA_NAMES, (float(v) for v in self.theta))),
            "sigma": dict(zip(THETA_NAMES, (float(v) for v in self.sigma))),
            "residual_rms": float(self.residual_rms),
            "diagnostics": {
                "n_outer": int(self.n_outer),
                "n_evaluations": int(self.n_evaluations),
                "optimality": float(self.optimality),
                "status": int(self.status),
                "message": self.message,
                "n_residuals": int(len(self.residuals)),
            },
        }


class SpectrumModel(BaseEstimator):
    """Dressed-spectrum line model with scikit-learn style fit/predict.

    Physics parameters double as the initial guess for :meth:`fit`; after
    fitting they hold the best-fit values and ``result_`` carries residuals
    and uncertainties.
    """

    def __init__(
        self,
        e_c: float = 0.2,
        ej_sum: float = 10.0,
        d: float = 0.0,
        omega_c: float = 7.0,
        g: float = 0.05,
        current_at_zero_flux: float = 0.0,
        current_per_flux_quantum: float = 1e-3,
        n_g: float = 0.0,
        n_cut: int = 20,
        n_q_levels: int = 6,
        n_ph_max: int = 5,
        lines: tuple = ("0,0->1,0", "0,0->0,1"),
        max_distance: float = 0.05,
        bounds: dict | None = None,
        frozen: tuple = (),
        max_outer: int = 10,
        max_inner: int = 200,
        step_tol: float = 1e-9,
        f_scale: float = 0.005,
        bootstrap_lines: tuple = (),
    ):
        self.e_c = e_c
        self.ej_sum = ej_sum
        self.d = d
        self.omega_c = omega_c
        self.g = g
        self.current_at_zero_flux = current_at_zero_flux
        self.current_per_flux_quantum = current_per_flux_quantum
        self.n_g = n_g
        self.n_cut = n_cut
        self.n_q_levels = n_q_levels
        self.n_ph_max = n_ph_max
        self.lines = lines
        self.max_distance = max_distance
        self.bounds = bounds
        self.frozen = frozen
        self.max_outer = max_outer
        self.max_inner = max_inner
        self.step_tol = step_tol
        self.f_scale = f_scale
        self.bootstrap_lines = bootstrap_lines

    # -- model evaluation ------------------------------------------------

    def _theta(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in THETA_NAMES], dtype=float)

    def predict_theta(
        self, theta: np.ndarray, currents, lines: list[str] | None = None
    ) -> dict[float, dict[str, float]]:
        """Line frequencies at an explicit parameter vector.

        Returns {current: {line kind: frequency GHz}}; NaN where the model
        cannot produce the line.
        """
        e_c, ej_sum, d, omega_c, g, zero, per = theta
        rows = flux_sweep_spectrum(
            SquidParams(ej_sum=ej_sum, d=d),
            FluxCalibration(zero, per),
            TransmonParams(e_c=e_c, e_j=ej_sum, n_g=self.n_g),
            CavityParams(omega_c=omega_c, g=g, n_ph_max=self.n_ph_max),
            currents,
            list(lines if lines is not None else self.lines),
            ChargeBasisConfig(self.n_cut),
            n_q_levels=self.n_q_levels,
            check_cutoff=False,
        )
        out: dict[float, dict[str, float]] = {}
        for row in rows:
            out.setdefault(row.current, {})[row.line_kind] = row.frequency
        return out

    def predict(self, currents) -> dict[float, dict[str, float]]:
        """Line frequencies at the current parameter values."""
        return self.predict_theta(self._theta(), currents)

    def residual_vector(self, theta: np.ndarray, assigned: list[Peak]) -> np.ndarray:
        """Predicted minus observed frequency for each assigned peak, GHz."""
        currents = sorted({p.current for p in assigned})
        kinds = sorted({p.line_kind for p in assigned})
        pred = self.predict_theta(theta, currents, lines=kinds)
        res = np.array(
            [pred[p.current].get(p.line_kind, np.nan) - p.frequency for p in assigned]
        )
        return np.nan_to_num(res, nan=MISSING_LINE_PENALTY)

    # -- fitting ---------------------------------------------------------

    def fit(self, peaks: list[Peak], init: FitParams | None = None) -> "SpectrumModel":
        """Fit free parameters to a peak list; stores ``result_``.

        Peaks may arrive unassigned; assignment against the model prediction
        is (re)run inside the outer loop.
        """
        if init is None:
            init = FitParams.from_values(
                bounds=self.bounds, frozen=self.frozen, **dict(zip(THETA_NAMES, self._theta()))
            )
        init.validate()
        theta = init.theta.copy()
        free = ~init.frozen
        n_free = int(np.sum(free))
        if n_free == 0:
            raise ValueError("all parameters frozen, nothing to fit")

        # When the requested line set goes beyond the widely separated
        # bootstrap lines, fit those first: closely spaced composite lines
        # are easy to cross-assign while the calibration is still rough.
        boot = [l for l in self.bootstrap_lines if l in self.lines]
        # The bootstrap lines carry almost no coupling information, so g is
        # held at its initial value during that stage.
        g_mask = np.array([name == "g" for name in THETA_NAMES])
        stages: list[tuple[list[str], list[tuple[float, str]], np.ndarray]] = []
        if boot and set(boot) != set(self.lines) and np.any(free & ~g_mask):
            stages.append((boot, [(8.0, "soft_l1"), (3.0, "soft_l1")], free & ~g_mask))
            stages.append((list(self.lines), [(3.0, "soft_l1")], free))
        else:
            stages.append((list(self.lines), [(8.0, "soft_l1"), (3.0, "soft_l1")], free))

        res = None
        assigned: list[Peak] = []
        n_outer_total = 0
        n_evals = 0
        currents = sorted({p.current for p in peaks})
        for lines, widen, free_stage in stages:
            n_free_stage = int(np.sum(free_stage))
            prev_assignment = None
            for n_outer in range(1, self.max_outer + 1):
                n_outer_total += 1
                factor, loss = widen[n_outer - 1] if n_outer <= len(widen) else (1.0, "linear")
                predictions = self.predict_theta(theta, currents, lines=lines)
                with_lines = assign_peaks_to_lines(
                    peaks, predictions, factor * self.max_distance
                )
                assigned = [p for p in with_lines if p.line_kind is not None]
                assignment = tuple(
                    (i, p.line_kind) for i, p in enumerate(with_lines) if p.line_kind
                )
                if len(assigned) < n_free_stage:
                    raise InsufficientData(
                        f"{len(assigned)} assigned peaks for {n_free_stage} free parameters"
                    )
                if loss == "linear" and assignment == prev_assignment:
                    break
                prev_assignment = assignment if loss == "linear" else None

                def residuals_free(x):
                    full = theta.copy()
                    full[free_stage] = x
                    return self.residual_vector(full, assigned)

                x0 = np.clip(theta[free_stage], init.lower[free_stage], init.upper[free_stage])
                res = least_squares(
                    residuals_free,
                    x0,
                    bounds=(init.lower[free_stage], init.upper[free_stage]),
                    method="trf",
                    loss=loss,
                    f_scale=self.f_scale,
                    x_scale=np.maximum(np.abs(x0), 1e-6),
                    xtol=self.step_tol,
                    ftol=1e-12,
                    gtol=1e-12,
                    max_nfev=self.max_inner * (n_free_stage + 1),
                )
                n_evals += res.nfev
                if res.status == 0:
                    raise NoConvergence(
                        f"iteration limit reached (nfev={res.nfev}, "
                        f"optimality={res.optimality:.3g})"
                    )
                theta[free_stage] = res.x

        if res is None:
            raise InsufficientData("no peaks could be assigned to model lines")

        sigma = self._uncertainties(res, free, init)
        at_bound = free & (
            np.isclose(theta, init.lower, atol=0) | np.isclose(theta, init.upper, atol=0)
        )
        if np.any(at_bound):
            names = [THETA_NAMES[i] for i in np.flatnonzero(at_bound)]
            warnings.warn(f"optimum pinned at bound for {names}", BoundaryStuck, stacklevel=2)

        rms = float(np.sqrt(np.mean(res.fun**2))) if len(res.fun) else 0.0
        self.result_ = FitResult(
            theta=theta,
            sigma=sigma,
            residuals=res.fun.copy(),
            residual_rms=rms,
            n_outer=n_outer_total,
            n_evaluations=n_evals,
            optimality=float(res.optimality),
            status=int(res.status),
            message=str(res.message),
            assigned_peaks=tuple(assigned),
        )
        for name, value in zip(THETA_NAMES, theta):
            setattr(self, name, float(value))
        return self

    @staticmethod
    def _uncertainties(res, free: np.ndarray, init: FitParams) -> np.ndarray:
        jac = res.jac
        m, n = jac.shape
        sv = np.linalg.svd(jac, compute_uv=False)
        if sv[0] == 0 or sv[-1] / sv[0] < RCOND_LIMIT:
            raise NoConvergence(
                "degenerate fit: Jacobian is rank-deficient (underdetermined data)"
            )
        dof = max(m - n, 1)
        s2 = 2.0 * res.cost / dof
        cov = np.linalg.inv(jac.T @ jac) * s2
        sigma = np.full(len(THETA_NAMES), np.nan)
        sigma[free] = np.sqrt(np.diag(cov))
        return sigma


def fit_spectrum(peaks: list[Peak], init: FitParams, **model_options) -> FitResult:
    """Functional wrapper: fit the dressed model to peaks from an initial guess."""
    model = SpectrumModel(**dict(zip(THETA_NAMES, init.theta)), **model_options)
    model.fit(peaks, init=init)
    return model.result_
