"""File formats: spectroscopy grids, decay traces, sweep tables, fit JSON.

Spectroscopy grid CSV: first row is the frequency axis in GHz (first cell is
a label), each following row is a coil current in A followed by the response
magnitudes.  Decay CSV: two columns, delay_us and population.  Sweep CSV:
current_A, flux_ratio, line_kind, frequency_GHz, status.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .decay import DecayTrace
from .dressed import SweepPoint
from .peaks import SpectroscopyDataset

GRID_CORNER_LABEL = "current_A\\frequency_GHz"
SWEEP_COLUMNS = ("current_A", "flux_ratio", "line_kind", "frequency_GHz", "status")


def _parse_cell(cell: str) -> float:
    cell = cell.strip()
    if cell == "":
        return float("nan")
    return float(cell)


def write_spectroscopy_csv(path, ds: SpectroscopyDataset) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([GRID_CORNER_LABEL] + [repr(float(f)) for f in ds.frequencies])
        for current, row in zip(ds.currents, ds.magnitudes):
            writer.writerow([repr(float(current))] + [repr(float(v)) for v in row])


def read_spectroscopy_csv(path) -> SpectroscopyDataset:
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if len(rows) < 2:
        raise ValueError(f"{path}: expected a header row and at least one data row")
    try:
        frequencies = np.array([_parse_cell(c) for c in rows[0][1:]])
        currents = np.array([_parse_cell(r[0]) for r in rows[1:]])
        magnitudes = np.array([[_parse_cell(c) for c in r[1:]] for r in rows[1:]])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed spectroscopy grid: {exc}") from exc
    return SpectroscopyDataset(currents=currents, frequencies=frequencies, magnitudes=magnitudes)


def write_decay_csv(path, trace: DecayTrace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["delay_us", "population"])
        for t, v in zip(trace.delays, trace.values):
            writer.writerow([repr(float(t)), repr(float(v))])


def read_decay_csv(path) -> DecayTrace:
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]  # optional header
    try:
        data = np.array([[float(r[0]), float(r[1])] for r in rows])
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed decay trace: {exc}") from exc
    if len(data) == 0:
        raise ValueError(f"{path}: empty decay trace")
    return DecayTrace(delays=data[:, 0], values=data[:, 1])


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def write_sweep_csv(path, rows: list[SweepPoint]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for r in rows:
            writer.writerow(
                [repr(float(r.current)), repr(float(r.flux_ratio)), r.line_kind, repr(float(r.frequency)), r.status]
            )


def read_sweep_csv(path) -> list[SweepPoint]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SWEEP_COLUMNS:
            raise ValueError(f"{path}: unexpected sweep header {header}")
        return [
            SweepPoint(float(r[0]), float(r[1]), r[2], float(r[3]), r[4]) for r in reader if r
        ]


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
