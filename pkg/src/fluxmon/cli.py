"""Command-line front end: simulate, fit, abcheck, t1fit, synth.

Run configuration is a YAML (or JSON) document; any key can be overridden on
the command line with ``--set section.key=value``.  Exit codes are a stable
contract for scripting: 0 success, 2 configuration error, 3 data/solver
error, 4 convergence or fit-quality failure.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np
import yaml

from . import io as fio
from .decay import fit_exponential_decay
from .dressed import CavityParams, flux_sweep_spectrum
from .errors import (
    ConvergenceError,
    CutoffError,
    DimensionError,
    InsufficientData,
    MissingLabel,
    NoConvergence,
    NonDecaying,
)
from .fitting import THETA_NAMES, FitParams, SpectrumModel
from .junction import FluxCalibration, JunctionDC, SquidParams, ab_inferred_gap, ab_josephson_energy
from .peaks import extract_peaks
from .synth import synthesize_map
from .transmon import ChargeBasisConfig, TransmonParams

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_QUALITY = 4

# Reference gap voltages for the abcheck discrepancy report (volts).
GAP_AL = 162e-6
GAP_TAS2 = 390e-6


class ConfigError(Exception):
    pass


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config(path: str | None, overrides: tuple[str, ...]) -> dict:
    config: dict = {}
    if path:
        try:
            with open(path) as fh:
                config = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        node = config
        parts = key.strip().split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set path {key!r} collides with a scalar")
        node[parts[-1]] = yaml.safe_load(raw)
    return config


def _require(config: dict, section: str, key: str):
    try:
        return config[section][key]
    except (KeyError, TypeError):
        raise ConfigError(f"missing config key {section}.{key}")


def _build_model(config: dict) -> SpectrumModel:
    squid = config.get("squid", {})
    transmon = config.get("transmon", {})
    cavity = config.get("cavity", {})
    cal = config.get("calibration", {})
    try:
        return SpectrumModel(
            e_c=float(_require(config, "transmon", "e_c")),
            ej_sum=float(_require(config, "squid", "ej_sum")),
            d=float(squid.get("d", 0.0)),
            omega_c=float(_require(config, "cavity", "omega_c")),
            g=float(_require(config, "cavity", "g")),
            current_at_zero_flux=float(cal.get("current_at_zero_flux", 0.0)),
            current_per_flux_quantum=float(_require(config, "calibration", "current_per_flux_quantum")),
            n_g=float(transmon.get("n_g", 0.0)),
            n_cut=int(transmon.get("n_cut", 30)),
            n_q_levels=int(transmon.get("n_levels", 6)),
            n_ph_max=int(cavity.get("n_ph_max", 5)),
            lines=tuple(config.get("lines", ["0,0->1,0", "0,0->0,1"])),
            max_distance=float(config.get("fit", {}).get("max_distance", 0.05)),
            bounds=config.get("fit", {}).get("bounds"),
            frozen=tuple(config.get("fit", {}).get("frozen", ())),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc))


def _sweep_currents(config: dict) -> np.ndarray:
    sweep = config.get("sweep", {})
    if "currents" in sweep:
        currents = np.asarray(sweep["currents"], dtype=float)
    else:
        try:
            currents = np.linspace(
                float(sweep["start"]), float(sweep["stop"]), int(sweep["points"])
            )
        except (KeyError, TypeError, ValueError):
            raise ConfigError("sweep requires either 'currents' or 'start'/'stop'/'points'")
    if len(currents) == 0:
        raise ConfigError("sweep current list is empty")
    return currents


def _plot_sweep(rows, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    kinds = sorted({r.line_kind for r in rows})
    for kind in kinds:
        pts = [(r.current, r.frequency) for r in rows if r.line_kind == kind and r.status == "ok"]
        if pts:
            x, y = zip(*pts)
            ax.plot(np.asarray(x) * 1e3, y, ".", ms=3, label=kind)
    ax.set_xlabel("coil current (mA)")
    ax.set_ylabel("frequency (GHz)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


@click.group()
def main():
    """Flux-tunable transmon-cavity modelling and fitting toolkit."""


@main.command()
@click.option("--config", "-c", "config_path", type=click.Path(), help="YAML run configuration.")
@click.option("--set", "overrides", multiple=True, help="Override config key: section.key=value.")
@click.option("--output", "-o", help="Sweep CSV path (overrides config 'output').")
@click.option("--plot", help="Optional SVG/PDF plot path.")
def simulate(config_path, overrides, output, plot):
    """Diagonalize the dressed model over a flux sweep and write line frequencies."""
    try:
        config = _load_config(config_path, overrides)
        model = _build_model(config)
        currents = _sweep_currents(config)
        out_path = output or config.get("output")
        if not out_path:
            raise ConfigError("no output path given (config 'output' or --output)")
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        rows = flux_sweep_spectrum(
            SquidParams(model.ej_sum, model.d),
            FluxCalibration(model.current_at_zero_flux, model.current_per_flux_quantum),
            TransmonParams(e_c=model.e_c, e_j=model.ej_sum, n_g=model.n_g),
            CavityParams(model.omega_c, model.g, model.n_ph_max),
            currents,
            list(model.lines),
            ChargeBasisConfig(model.n_cut),
            n_q_levels=model.n_q_levels,
        )
        fio.write_sweep_csv(out_path, rows)
        plot_path = plot or config.get("plot")
        if plot_path:
            _plot_sweep(rows, plot_path)
    except (ConvergenceError, CutoffError, DimensionError, MissingLabel, OSError) as exc:
        _fail(EXIT_DATA, str(exc))
    n_bad = sum(1 for r in rows if r.status != "ok")
    if n_bad:
        click.echo(f"warning: {n_bad}/{len(rows)} sweep rows failed (see status column)", err=True)
    click.echo(f"wrote {len(rows)} rows to {out_path}")


@main.command()
@click.option("--config", "-c", "config_path", type=click.Path(), help="YAML run configuration.")
@click.option("--set", "overrides", multiple=True, help="Override config key: section.key=value.")
@click.option("--output", "-o", help="Spectroscopy CSV path (overrides config 'output').")
def synth(config_path, overrides, output):
    """Render a synthetic spectroscopy map from the model (seeded, reproducible)."""
    try:
        config = _load_config(config_path, overrides)
        model = _build_model(config)
        currents = _sweep_currents(config)
        s = config.get("synth", {})
        frequencies = np.linspace(
            float(s.get("fmin", 1.0)), float(s.get("fmax", 10.0)), int(s.get("n_freq", 901))
        )
        linewidth = float(s.get("linewidth", 0.01))
        noise = float(s.get("noise", 0.0))
        freq_noise = float(s.get("freq_noise", 0.0))
        seed = int(s.get("seed", 0))
        out_path = output or config.get("output")
        if not out_path:
            raise ConfigError("no output path given (config 'output' or --output)")
        if linewidth <= 0 or noise < 0:
            raise ConfigError("synth.linewidth must be > 0 and synth.noise >= 0")
    except (ConfigError, ValueError, TypeError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        ds = synthesize_map(
            model, currents, frequencies,
            linewidth=linewidth, noise=noise, freq_noise=freq_noise, seed=seed,
        )
        fio.write_spectroscopy_csv(out_path, ds)
    except OSError as exc:
        _fail(EXIT_DATA, str(exc))
    click.echo(f"wrote {len(currents)}x{len(frequencies)} grid to {out_path}")


@main.command()
@click.option("--config", "-c", "config_path", type=click.Path(), help="YAML run configuration.")
@click.option("--set", "overrides", multiple=True, help="Override config key: section.key=value.")
@click.option("--input", "-i", "input_path", help="Spectroscopy CSV (overrides config fit.input).")
@click.option("--output", "-o", help="Fit-result JSON path (overrides config fit.output).")
@click.option("--residuals", help="Per-peak residual CSV path.")
def fit(config_path, overrides, input_path, output, residuals):
    """Extract peaks from a spectroscopy CSV and fit the dressed model."""
    try:
        config = _load_config(config_path, overrides)
        model = _build_model(config)
        fit_cfg = config.get("fit", {})
        in_path = input_path or fit_cfg.get("input")
        if not in_path:
            raise ConfigError("no input path given (config fit.input or --input)")
        out_path = output or fit_cfg.get("output")
        res_path = residuals or fit_cfg.get("residuals")
        smoothing = int(fit_cfg.get("smoothing_window", 3))
        prominence = float(fit_cfg.get("min_prominence", 0.2))
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        ds = fio.read_spectroscopy_csv(in_path)
        peaks = extract_peaks(ds, smoothing_window=smoothing, min_prominence=prominence)
    except (OSError, ValueError) as exc:
        _fail(EXIT_DATA, str(exc))
    try:
        init = FitParams.from_values(
            bounds=model.bounds, frozen=model.frozen,
            **{name: getattr(model, name) for name in THETA_NAMES},
        )
        model.fit(peaks, init=init)
    except (InsufficientData, NoConvergence) as exc:
        _fail(EXIT_QUALITY, str(exc))
    except (ConvergenceError, CutoffError, ValueError) as exc:
        _fail(EXIT_DATA, str(exc))
    result = model.result_
    payload = result.to_dict()
    click.echo(json.dumps(payload, indent=2, sort_keys=True))
    if out_path:
        fio.write_json(out_path, payload)
    if res_path:
        import csv as _csv

        with open(res_path, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["current_A", "line_kind", "observed_GHz", "residual_GHz"])
            for peak, r in zip(result.assigned_peaks, result.residuals):
                writer.writerow(
                    [repr(float(peak.current)), peak.line_kind, repr(float(peak.frequency)), repr(float(r))]
                )


@main.command()
@click.option("--r-n", "r_n", type=float, required=True, help="Normal-state resistance, ohm.")
@click.option("--ej", type=float, help="Josephson energy E_J/h, GHz.")
@click.option("--delta-uv", type=float, help="Superconducting gap, microvolt.")
def abcheck(r_n, ej, delta_uv):
    """Junction DC consistency check: infer gap from E_J or E_J from gap."""
    if (ej is None) == (delta_uv is None):
        _fail(EXIT_CONFIG, "give exactly one of --ej or --delta-uv")
    try:
        if ej is not None:
            gap = ab_inferred_gap(r_n, ej)
        else:
            gap = delta_uv * 1e-6
            ej = ab_josephson_energy(JunctionDC(r_n=r_n, delta_v=gap))
    except ValueError as exc:
        _fail(EXIT_CONFIG, str(exc))
    report = {
        "r_n_ohm": r_n,
        "ej_ghz": ej,
        "inferred_gap_uv": gap * 1e6,
        "gap_ratio_al": GAP_AL / gap,
        "gap_ratio_tas2": GAP_TAS2 / gap,
    }
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command()
@click.argument("path", type=click.Path())
@click.option("--output", "-o", help="DecayFit JSON path (default: stdout only).")
def t1fit(path, output):
    """Fit an exponential decay trace (CSV: delay_us, population)."""
    try:
        trace = fio.read_decay_csv(path)
        result = fit_exponential_decay(trace)
    except (OSError, ValueError, InsufficientData) as exc:
        _fail(EXIT_DATA, str(exc))
    except (NonDecaying, NoConvergence) as exc:
        _fail(EXIT_QUALITY, str(exc))
    payload = result.to_dict()
    click.echo(json.dumps(payload, indent=2, sort_keys=True))
    if output:
        fio.write_json(output, payload)


if __name__ == "__main__":
    main()
