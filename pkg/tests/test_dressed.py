"""Dressed transmon-cavity spectrum: build, label, lines, flux sweeps."""

import numpy as np
import pytest

from fluxmon import (
    CavityParams,
    FluxCalibration,
    LabelingAmbiguous,
    MissingLabel,
    SquidParams,
    StateLabel,
    TransmonParams,
    build_dressed_hamiltonian,
    ej_of_flux,
    flux_sweep_spectrum,
    label_dressed_states,
    line_frequency,
    parse_line_request,
    raman_lines,
    solve_dressed,
    solve_transmon,
    transition_frequency,
)
from fluxmon.dressed import RAMAN_CONSTITUENTS
from fluxmon.transmon import TransmonEigens


class TestBuildDressedHamiltonian:
    def test_dimension(self, device_transmon, dispersive_cavity):
        te = solve_transmon(device_transmon)
        h = build_dressed_hamiltonian(te, 6, dispersive_cavity)
        assert h.shape == (36, 36)
        np.testing.assert_allclose(h, h.T, atol=1e-12)

    def test_decoupled_is_diagonal(self, device_transmon):
        te = solve_transmon(device_transmon)
        cav = CavityParams(omega_c=7.0, g=0.0, n_ph_max=3)
        h = build_dressed_hamiltonian(te, 6, cav)
        expected = np.add.outer(te.energies, 7.0 * np.arange(4)).ravel()
        np.testing.assert_array_equal(h, np.diag(expected))

    def test_jaynes_cummings_oracle(self):
        # Two-level atom at resonance: the n-excitation manifold splits by
        # 2 g sqrt(n), with counter-rotating corrections bounded by (g/w)^2.
        wq, g = 7.0, 1e-3
        te = TransmonEigens(
            energies=np.array([0.0, wq]),
            n_elements=np.array([[0.0, 1.0], [1.0, 0.0]]),
        )
        cav = CavityParams(omega_c=wq, g=g, n_ph_max=4)
        w = np.linalg.eigvalsh(build_dressed_hamiltonian(te, 2, cav))
        tol = 2 * (g / wq) ** 2 * wq
        assert w[1] == pytest.approx(wq - g, abs=tol)
        assert w[2] == pytest.approx(wq + g, abs=tol)
        assert w[3] == pytest.approx(2 * wq - g * np.sqrt(2), abs=tol)
        assert w[4] == pytest.approx(2 * wq + g * np.sqrt(2), abs=tol)

    def test_too_many_levels_rejected(self, device_transmon, dispersive_cavity):
        from fluxmon import DimensionError

        te = solve_transmon(device_transmon, n_levels=4)
        with pytest.raises(DimensionError):
            build_dressed_hamiltonian(te, 6, dispersive_cavity)


class TestLabeling:
    def test_decoupled_labels_exact(self, device_transmon):
        cav = CavityParams(omega_c=7.0, g=0.0, n_ph_max=3)
        ds = solve_dressed(device_transmon, cav)
        for s in ds.states:
            assert s.overlap == pytest.approx(1.0, abs=1e-12)
            assert not s.ambiguous

    def test_small_g_overlaps_large(self, device_transmon, dispersive_cavity):
        ds = solve_dressed(device_transmon, dispersive_cavity, warn_ambiguous=False)
        # Low-lying dispersive states stay close to their bare parents.
        for n_q in range(3):
            for n_ph in range(2):
                assert ds.state(StateLabel(n_q, n_ph)).overlap > 0.99

    def test_exact_crossing_flagged_ambiguous(self, device_transmon):
        # Hand-built 50/50 mixing of the (0,1) and (1,0) bare states.
        cav = CavityParams(omega_c=1.0, g=0.0, n_ph_max=1)
        energies = np.array([0.0, 1.0, 1.0, 2.2])
        r = 1 / np.sqrt(2)
        vectors = np.array(
            [
                [1, 0, 0, 0],
                [0, r, r, 0],
                [0, r, -r, 0],
                [0, 0, 0, 1],
            ],
            dtype=float,
        ).T
        with pytest.warns(LabelingAmbiguous):
            ds = label_dressed_states(energies, vectors.T, 2, device_transmon, cav)
        ambiguous = [s for s in ds.states if s.ambiguous]
        assert len(ambiguous) == 2
        for s in ambiguous:
            assert s.overlap == pytest.approx(0.5)
            with pytest.raises(MissingLabel):
                ds.state(s.label)

    def test_missing_label_raises(self, device_transmon, dispersive_cavity):
        ds = solve_dressed(device_transmon, dispersive_cavity, warn_ambiguous=False)
        with pytest.raises(MissingLabel):
            ds.state(StateLabel(99, 0))


class TestTransitionsAndRaman:
    def test_decoupled_transitions(self, device_transmon):
        cav = CavityParams(omega_c=7.0, g=0.0, n_ph_max=3)
        ds = solve_dressed(device_transmon, cav)
        f01 = solve_transmon(device_transmon).energies[1]
        assert transition_frequency(ds, StateLabel(0, 0), StateLabel(1, 0)) == pytest.approx(
            f01, abs=1e-9
        )
        assert transition_frequency(ds, StateLabel(0, 0), StateLabel(0, 1)) == pytest.approx(
            7.0, abs=1e-9
        )

    def test_dispersive_shift_vs_perturbative_oracle(self, device_transmon, dispersive_cavity):
        ds = solve_dressed(device_transmon, dispersive_cavity, warn_ambiguous=False)
        two_chi = transition_frequency(
            ds, StateLabel(0, 0), StateLabel(0, 1)
        ) - transition_frequency(ds, StateLabel(1, 0), StateLabel(1, 1))
        te = solve_transmon(device_transmon)
        g, wc = dispersive_cavity.g, dispersive_cavity.omega_c

        def lamb_shift(i):
            # Second-order level repulsion including counter-rotating terms.
            total = 0.0
            for j in range(te.n_levels):
                if j == i:
                    continue
                wij = te.energies[i] - te.energies[j]
                total += g**2 * te.n_elements[i, j] ** 2 * (
                    1.0 / (wij - wc) + 1.0 / (wij + wc)
                )
            return total

        two_chi_oracle = lamb_shift(0) - lamb_shift(1)
        assert two_chi == pytest.approx(two_chi_oracle, rel=0.10)

    def test_raman_identities(self, device_transmon, dispersive_cavity):
        ds = solve_dressed(device_transmon, dispersive_cavity, warn_ambiguous=False)
        for line in raman_lines(ds):
            total = sum(transition_frequency(ds, a, b) for a, b in line.constituents)
            assert line.frequency == pytest.approx(total, abs=1e-9)
            assert line.constituents == RAMAN_CONSTITUENTS[line.kind]

    def test_raman_a_decoupled_algebra(self, device_transmon):
        cav = CavityParams(omega_c=7.0, g=0.0, n_ph_max=3)
        ds = solve_dressed(device_transmon, cav)
        te = solve_transmon(device_transmon)
        a = next(l for l in raman_lines(ds) if l.kind == "raman_a")
        assert a.frequency == pytest.approx(te.energies[1] + te.energies[3] - 7.0, abs=1e-9)

    def test_raman_continuity_in_flux(self, device_squid, dispersive_cavity):
        phis = np.linspace(0.05, 0.40, 36)
        freqs = {kind: [] for kind in RAMAN_CONSTITUENTS}
        for phi in phis:
            tp = TransmonParams(e_c=0.14, e_j=ej_of_flux(device_squid, phi))
            ds = solve_dressed(tp, dispersive_cavity, check_cutoff=False, warn_ambiguous=False)
            for line in raman_lines(ds):
                freqs[line.kind].append(line.frequency)
        for kind, values in freqs.items():
            values = np.asarray(values)
            first = np.abs(np.diff(values))
            second = np.abs(np.diff(values, 2))
            # Smooth curve on a uniform grid: curvature term stays far below
            # the local slope term (no jumps between neighboring points).
            assert np.max(second) < 0.2 * np.max(first) + 1e-9, kind


class TestParseLineRequest:
    def test_single_transition(self):
        assert parse_line_request("0,0->1,0") == ((StateLabel(0, 0), StateLabel(1, 0)),)

    def test_composite_sum(self):
        pairs = parse_line_request("0,0->1,0 + 0,1->3,0")
        assert pairs == RAMAN_CONSTITUENTS["raman_a"]

    def test_shorthands(self):
        for kind, pairs in RAMAN_CONSTITUENTS.items():
            assert parse_line_request(kind) == pairs
            assert parse_line_request(kind.upper()) == pairs

    def test_line_frequency_composite(self, device_transmon, dispersive_cavity):
        ds = solve_dressed(device_transmon, dispersive_cavity, warn_ambiguous=False)
        a = next(l for l in raman_lines(ds) if l.kind == "raman_a")
        assert line_frequency(ds, "raman_a") == pytest.approx(a.frequency, abs=1e-12)
        assert line_frequency(ds, "0,0->1,0 + 0,1->3,0") == pytest.approx(a.frequency, abs=1e-12)

    def test_malformed(self):
        for bad in ("nonsense", "0,0->", "0->1", "0,0-1,0", ""):
            with pytest.raises(ValueError):
                parse_line_request(bad)


class TestFluxSweep:
    def test_single_point_matches_direct_solve(self, device_squid, dispersive_cavity):
        cal = FluxCalibration(0.0, 1e-3)
        tp = TransmonParams(e_c=0.14, e_j=11.6)
        rows = flux_sweep_spectrum(
            device_squid, cal, tp, dispersive_cavity, [0.0], ["0,0->1,0", "raman_a"]
        )
        ds = solve_dressed(tp, dispersive_cavity, check_cutoff=False, warn_ambiguous=False)
        assert rows[0].frequency == pytest.approx(line_frequency(ds, "0,0->1,0"), abs=1e-12)
        assert rows[1].frequency == pytest.approx(line_frequency(ds, "raman_a"), abs=1e-12)
        assert all(r.status == "ok" for r in rows)

    def test_period_extremes_and_symmetry(self, device_squid, dispersive_cavity):
        cal = FluxCalibration(0.0, 1e-3)
        tp = TransmonParams(e_c=0.14, e_j=11.6)
        currents = np.linspace(-5e-4, 5e-4, 101)
        rows = flux_sweep_spectrum(
            device_squid, cal, tp, dispersive_cavity, currents, ["0,0->1,0"]
        )
        f01 = np.array([r.frequency for r in rows])
        assert np.max(f01) == pytest.approx(3.46, rel=0.01)
        assert np.argmax(f01) == 50  # integer flux at zero current
        # Minimum sits at half-integer flux where E_J = d * E_J_sum.
        tp_min = TransmonParams(e_c=0.14, e_j=0.35 * 11.6)
        ds_min = solve_dressed(tp_min, dispersive_cavity, check_cutoff=False, warn_ambiguous=False)
        assert np.min(f01) == pytest.approx(line_frequency(ds_min, "0,0->1,0"), abs=1e-9)
        assert np.min(f01) == pytest.approx(1.99, rel=0.05)
        np.testing.assert_allclose(f01, f01[::-1], atol=1e-9)

    def test_row_ordering_and_flux_column(self, device_squid, dispersive_cavity):
        cal = FluxCalibration(2e-4, 1e-3)
        tp = TransmonParams(e_c=0.14, e_j=11.6)
        currents = [0.0, 2e-4]
        rows = flux_sweep_spectrum(
            device_squid, cal, tp, dispersive_cavity, currents, ["0,0->1,0", "0,0->0,1"]
        )
        assert [(r.current, r.line_kind) for r in rows] == [
            (0.0, "0,0->1,0"),
            (0.0, "0,0->0,1"),
            (2e-4, "0,0->1,0"),
            (2e-4, "0,0->0,1"),
        ]
        assert rows[0].flux_ratio == pytest.approx(-0.2)
        assert rows[2].flux_ratio == pytest.approx(0.0)

    def test_unresolvable_line_marked_not_raised(self, device_squid, dispersive_cavity):
        cal = FluxCalibration(0.0, 1e-3)
        tp = TransmonParams(e_c=0.14, e_j=11.6)
        rows = flux_sweep_spectrum(
            device_squid, cal, tp, dispersive_cavity, [0.0, 1e-4], ["0,0->9,0", "0,0->1,0"]
        )
        bad = [r for r in rows if r.line_kind == "0,0->9,0"]
        good = [r for r in rows if r.line_kind == "0,0->1,0"]
        assert all(r.status == "error:MissingLabel" and np.isnan(r.frequency) for r in bad)
        assert all(r.status == "ok" and np.isfinite(r.frequency) for r in good)


class TestCutoffs:
    def test_photon_cutoff_5_vs_10(self, device_transmon):
        lines = ["0,0->1,0", "0,0->0,1", "raman_a", "raman_b", "raman_c"]
        cav5 = CavityParams(omega_c=7.0, g=0.07, n_ph_max=5)
        cav10 = CavityParams(omega_c=7.0, g=0.07, n_ph_max=10)
        ds5 = solve_dressed(device_transmon, cav5, warn_ambiguous=False)
        ds10 = solve_dressed(device_transmon, cav10, warn_ambiguous=False)
        for line in lines:
            delta = abs(line_frequency(ds5, line) - line_frequency(ds10, line))
            assert delta < 1e-6, line  # 1 kHz

    def test_decoupling_random_draws(self, rng):
        for _ in range(20):
            e_c = rng.uniform(0.1, 0.3)
            tp = TransmonParams(e_c=e_c, e_j=e_c * rng.uniform(30, 120))
            cav = CavityParams(omega_c=rng.uniform(4, 12), g=0.0, n_ph_max=3)
            te = solve_transmon(tp, check_cutoff=False)
            ds = solve_dressed(tp, cav, check_cutoff=False, warn_ambiguous=False)
            for s in ds.states:
                bare = te.energies[s.label.n_q] + s.label.n_ph * cav.omega_c
                scale = max(abs(bare), 1.0)
                assert abs(s.energy - bare) / scale < 1e-9
