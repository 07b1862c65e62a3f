"""Shared fixtures: device parameters from the measured device and helpers."""

import numpy as np
import pytest

from fluxmon import CavityParams, SquidParams, TransmonParams

# Verdict lines recorded by tests/test_acceptance.py, echoed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Device values used throughout: E_C/h = 0.14 GHz, E_JSigma/h = 11.6 GHz,
# d = 0.35, maximum qubit frequency ~3.46 GHz.
E_C = 0.14
EJ_SUM = 11.6
D_ASYM = 0.35


@pytest.fixture
def device_transmon() -> TransmonParams:
    return TransmonParams(e_c=E_C, e_j=EJ_SUM)


@pytest.fixture
def device_squid() -> SquidParams:
    return SquidParams(ej_sum=EJ_SUM, d=D_ASYM)


@pytest.fixture
def dispersive_cavity() -> CavityParams:
    # Cavity far detuned from the qubit: g / |omega_q - omega_c| ~ 0.02.
    return CavityParams(omega_c=7.0, g=0.07, n_ph_max=5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
