import math

import numpy as np
import pytest

from bsvhhg import constants as const
from bsvhhg.propagation import (MediumConfig, absorption_length,
                                coherence_length, electron_mismatch,
                                ensemble_propagated, medium_length_scan,
                                onaxis_photon_number, phase_match_state)
from bsvhhg.quantum_field import FieldStateDistribution

OMEGA_800_SI = (const.angular_frequency_au(800.0) / const.TIME_AU)


def electron_mismatch_oracle(order, rho_cm3, y):
    """Independent route: dk_el = r_e lambda q rho_e (classical radius)."""
    r_e = const.E_CHARGE**2 / (4.0 * math.pi * const.EPSILON_0
                               * const.M_ELECTRON * const.C_LIGHT**2)
    lam = 2.0 * math.pi * const.C_LIGHT / OMEGA_800_SI
    return r_e * 1e2 * lam * 1e2 * order * rho_cm3 * y


class TestAbsorptionLength:
    def test_argon_preset_one_millimeter(self):
        assert absorption_length(1e-17, 1e18) == pytest.approx(0.1, rel=1e-12)

    def test_density_scaling(self):
        assert absorption_length(1e-17, 2e18) == pytest.approx(
            0.5 * absorption_length(1e-17, 1e18), rel=1e-12)

    def test_large_cross_section_limit(self):
        assert absorption_length(1e2, 1e18) < 1e-18

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            absorption_length(0.0, 1e18)
        with pytest.raises(ValueError):
            absorption_length(1e-17, -1.0)


class TestElectronMismatch:
    def test_no_ionization_no_mismatch(self):
        assert electron_mismatch(15, OMEGA_800_SI, 1e18, 0.0) == 0.0

    def test_linear_in_yield(self):
        half = electron_mismatch(15, OMEGA_800_SI, 1e18, 0.5)
        full = electron_mismatch(15, OMEGA_800_SI, 1e18, 1.0)
        assert full == pytest.approx(2.0 * half, rel=1e-12)

    def test_linear_in_density(self):
        a = electron_mismatch(15, OMEGA_800_SI, 1e18, 1.0)
        b = electron_mismatch(15, OMEGA_800_SI, 3e18, 1.0)
        assert b == pytest.approx(3.0 * a, rel=1e-12)

    def test_sign_and_regression_value(self):
        # pinned against the classical-electron-radius route
        got = electron_mismatch(15, OMEGA_800_SI, 1e18, 1.0)
        assert got < 0.0
        assert abs(got) == pytest.approx(
            electron_mismatch_oracle(15, 1e18, 1.0), rel=1e-9)
        assert abs(got) == pytest.approx(338.2, rel=1e-3)

    def test_rejects_bad_yield(self):
        with pytest.raises(ValueError):
            electron_mismatch(15, OMEGA_800_SI, 1e18, 1.5)


class TestCoherenceLength:
    def test_pi_mismatch_gives_unit_length(self):
        assert coherence_length(math.pi) == pytest.approx(1.0, rel=1e-12)

    def test_dispersion_only_value(self):
        assert coherence_length(2e-6) == pytest.approx(math.pi / 2e-6,
                                                       rel=1e-12)
        assert coherence_length(2e-6) == pytest.approx(1.5708e6, rel=1e-4)

    def test_perfect_matching_sentinel(self):
        assert coherence_length(0.0) == math.inf

    def test_decreases_with_intensity(self, pulse, argon):
        medium = MediumConfig.argon()
        lcs = [phase_match_state(pulse, const.field_au_from_intensity(i),
                                 argon, medium).coherence_length_cm
               for i in (6e13, 9e13, 1.2e14, 1.5e14)]
        assert all(b < a for a, b in zip(lcs, lcs[1:]))

    def test_dispersion_limit_at_weak_drive(self, pulse, argon):
        st = phase_match_state(pulse, const.field_au_from_intensity(1e12),
                               argon, MediumConfig.argon())
        assert st.coherence_length_cm == pytest.approx(math.pi / 2e-6,
                                                       rel=1e-3)


class TestOnaxisPhotonNumber:
    LA = 0.1
    RHO = 1e18

    def test_zero_length_zero_output(self):
        assert onaxis_photon_number(1.0, 0.0, self.LA, 0.05, self.RHO) == 0.0

    def test_infinite_length_bracket_limit(self):
        # bracket -> 1: compare against the explicit asymptote
        big = onaxis_photon_number(1.0, 40.0 * self.LA, self.LA, 0.05,
                                   self.RHO)
        asym = 4.0 * self.RHO**2 * self.LA**2 / (
            1.0 + 4.0 * math.pi**2 * (self.LA / 0.05) ** 2)
        assert big == pytest.approx(asym, rel=1e-6)

    def test_bracket_bounds(self):
        for lm in np.linspace(0.0, 1.0, 101):
            for lc in (0.01, 0.1, 1.0, math.inf):
                val = onaxis_photon_number(1.0, lm, self.LA, lc, self.RHO)
                ratio = 0.0 if math.isinf(lc) else self.LA / lc
                b = 4.0 * self.RHO**2 * self.LA**2 / (
                    1.0 + 4.0 * math.pi**2 * ratio**2)
                bracket = val / b
                ceiling = (1.0 + math.exp(-lm / (2.0 * self.LA))) ** 2
                assert -1e-12 <= bracket <= ceiling + 1e-12

    def test_absorption_limited_halfway_point(self):
        # L_c >> L_a: three absorption lengths reach >= 50% of the asymptote
        val3 = onaxis_photon_number(1.0, 3.0 * self.LA, self.LA, 1e6,
                                    self.RHO)
        asym = onaxis_photon_number(1.0, 60.0 * self.LA, self.LA, 1e6,
                                    self.RHO)
        assert val3 >= 0.5 * asym

    def test_paper_literal_variant_diverges(self):
        # printed growing-exponent form, kept for comparison only
        lit = onaxis_photon_number(1.0, 10.0 * self.LA, self.LA, 1e6,
                                   self.RHO, paper_literal=True)
        corr = onaxis_photon_number(1.0, 10.0 * self.LA, self.LA, 1e6,
                                    self.RHO)
        assert lit < 0.0 or abs(lit) > 10.0 * corr

    def test_paper_literal_printed_value(self):
        # direct transcription check at L' = 1, perfect matching
        got = onaxis_photon_number(1.0, self.LA, self.LA, math.inf, self.RHO,
                                   paper_literal=True)
        expected = (4.0 * self.RHO**2 * self.LA
                    * (1.0 + math.exp(-1.0) - 2.0 * math.exp(0.5)))
        assert got == pytest.approx(expected, rel=1e-12)

    def test_rejects_negative_length(self):
        with pytest.raises(ValueError):
            onaxis_photon_number(1.0, -0.1, self.LA, 0.05, self.RHO)


class TestMediumConfig:
    def test_loose_focusing_flag(self):
        ok = MediumConfig.argon(medium_length_cm=0.2)
        assert ok.loose_focusing_ok()
        tight = MediumConfig.argon(medium_length_cm=0.5,
                                   confocal_parameter_cm=1.0)
        assert not tight.loose_focusing_ok()

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError):
            MediumConfig.argon(atomic_density_cm3=-1.0)


@pytest.fixture(scope="module")
def scan_setup(pulse, argon):
    medium = MediumConfig.argon()
    lengths = np.linspace(0.0, 0.5, 129)
    return medium, lengths


class TestEnsemblePropagated:
    def test_coherent_reduces_to_direct_formula(self, pulse, argon):
        from bsvhhg.hhg import harmonic_photon_number, sfa_dipole, spectrum
        from bsvhhg.ionization import trajectory_yield
        medium = MediumConfig.argon(medium_length_cm=0.2)
        dist = FieldStateDistribution.coherent(1e14)
        got = ensemble_propagated(dist, pulse, argon, medium)
        e0 = const.field_au_from_intensity(1e14)
        nq = harmonic_photon_number(
            spectrum(sfa_dipole(pulse, e0, argon)), 15)
        st = phase_match_state(pulse, e0, argon, medium)
        expected = onaxis_photon_number(nq, 0.2, st.absorption_length_cm,
                                        st.coherence_length_cm,
                                        medium.atomic_density_cm3)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_coherent_scan_oscillates_when_dephased(self, pulse, argon,
                                                    scan_setup):
        # L_c < L_a at saturation: Maxwell oscillations appear
        medium, lengths = scan_setup
        e0 = const.field_au_from_intensity(1.5e14)
        st = phase_match_state(pulse, e0, argon, medium)
        assert st.coherence_length_cm < st.absorption_length_cm
        curve = medium_length_scan(FieldStateDistribution.coherent(1.5e14),
                                   pulse, argon, medium, lengths)
        signs = np.sign(np.diff(curve))
        extrema = int(np.sum(np.diff(signs[signs != 0]) != 0))
        assert extrema >= 2

    def test_bsv_scan_monotone_when_dispersion_limited(self, pulse, argon,
                                                       scan_setup):
        # sub-knee ensemble: every node keeps L_c >> L_m and the scan is
        # strictly non-decreasing
        medium, lengths = scan_setup
        curve = medium_length_scan(FieldStateDistribution.bsv(1e13),
                                   pulse, argon, medium, lengths)
        assert curve[0] == 0.0
        drops = np.diff(curve)
        assert np.all(drops >= -1e-6 * np.max(curve))

    def test_scan_rejects_non_increasing_grid(self, pulse, argon):
        with pytest.raises(ValueError):
            medium_length_scan(FieldStateDistribution.coherent(1e14), pulse,
                               argon, MediumConfig.argon(),
                               np.array([0.0, 0.2, 0.1]))

    def test_ensemble_convexity(self, pulse, argon):
        from bsvhhg.quantum_field import build_ensemble
        from bsvhhg.hhg import harmonic_photon_number, sfa_dipole, spectrum
        from bsvhhg.ionization import trajectory_yield
        medium = MediumConfig.argon(medium_length_cm=0.2)
        dist = FieldStateDistribution.bsv(1e14)
        avg = ensemble_propagated(dist, pulse, argon, medium, node_count=16)
        ens = build_ensemble(dist, 16)
        omega_si = pulse.carrier_frequency_au / const.TIME_AU
        vals = []
        for e in ens.nodes:
            st = phase_match_state(pulse, abs(e), argon, medium)
            nq = harmonic_photon_number(
                spectrum(sfa_dipole(pulse, abs(e), argon)), 15)
            vals.append(onaxis_photon_number(
                nq, 0.2, st.absorption_length_cm, st.coherence_length_cm,
                medium.atomic_density_cm3))
        assert min(vals) <= avg <= max(vals)
