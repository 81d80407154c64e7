"""On-axis phase-matched buildup of a harmonic in an absorbing gas column.

The medium enters through three lengths: the absorption length
L_a = 1/(sigma1 rho), the coherence length L_c = pi/|dk| with
dk = dk_medium + dk_electrons(Y_i), and the column length L_m. The
emitted photon number follows the absorption-limited form

    N_out = B N_q [1 + e^{-L'} - 2 cos(pi L_m / L_c) e^{-L'/2}],
    B = 4 rho^2 L_a^2 / (1 + 4 pi^2 (L_a / L_c)^2),  L' = L_m / L_a,

which vanishes identically at L_m = 0 and saturates for L_m >> L_a. A
`paper_literal` switch reproduces, for comparison only, the variant with a
growing exponent e^{+L'/2} and a single power of L_a in B; that variant
diverges with L_m and is never used by scenarios.

Free-electron dispersion: dk_el = -e^2 w_q rho Y / (2 eps0 c m_e w^2),
linear in density and in the end-of-pulse ionization yield.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .hhg import ensemble_spectrum_from_nodes
from .ionization import AtomSpecies, trajectory_yield
from .quantum_field import (DriverPulse, FieldStateDistribution,
                            build_ensemble)

# Argon preset around the 15th harmonic of 800 nm.
ARGON_MEDIUM_DEFAULTS = dict(
    atomic_density_cm3=1e18,
    xuv_cross_section_cm2=1e-17,
    dispersion_mismatch_rad_cm=2e-6,
    spot_area_cm2=1.3e-6,
    confocal_parameter_cm=10.0,
)


@dataclass(frozen=True)
class MediumConfig:
    """Gas-column parameters for one harmonic order."""

    atomic_density_cm3: float
    medium_length_cm: float
    xuv_cross_section_cm2: float
    dispersion_mismatch_rad_cm: float
    spot_area_cm2: float
    confocal_parameter_cm: float

    def __post_init__(self):
        if self.atomic_density_cm3 <= 0:
            raise ValueError("atomic density must be > 0")
        if self.medium_length_cm < 0:
            raise ValueError("medium length must be >= 0")

    @classmethod
    def argon(cls, medium_length_cm=0.2, **overrides):
        params = dict(ARGON_MEDIUM_DEFAULTS)
        params.update(overrides)
        return cls(medium_length_cm=medium_length_cm, **params)

    def loose_focusing_ok(self):
        """Validity flag: confocal parameter should dominate the column."""
        return self.confocal_parameter_cm >= 10.0 * self.medium_length_cm

    @property
    def absorption_length_cm(self):
        return absorption_length(self.xuv_cross_section_cm2,
                                 self.atomic_density_cm3)


@dataclass(frozen=True)
class PhaseMatchState:
    """Derived phase-matching quantities at one drive intensity."""

    dk_electron_rad_cm: float
    dk_total_rad_cm: float
    coherence_length_cm: float
    absorption_length_cm: float
    prefactor: float
    scaled_length: float


def absorption_length(xuv_cross_section_cm2, atomic_density_cm3):
    """L_a = 1 / (sigma1 rho) in cm."""
    if xuv_cross_section_cm2 <= 0:
        raise ValueError("cross-section must be > 0")
    if atomic_density_cm3 <= 0:
        raise ValueError("density must be > 0")
    return 1.0 / (xuv_cross_section_cm2 * atomic_density_cm3)


def electron_mismatch(order, omega_rad_s, atomic_density_cm3,
                      ionization_yield):
    """Free-electron phase mismatch in rad/cm (non-positive).

    dk_el = -e^2 (q w) rho_e / (2 eps0 c m_e w^2) with rho_e the electron
    density rho_at * Y_i. Linear in both density and yield.
    """
    if not 0.0 <= ionization_yield <= 1.0:
        raise ValueError(f"yield must be in [0, 1], got {ionization_yield}")
    omega_q = order * omega_rad_s
    density_m3 = atomic_density_cm3 * 1e6 * ionization_yield
    dk_per_m = -(const.E_CHARGE**2 * omega_q * density_m3
                 / (2.0 * const.EPSILON_0 * const.C_LIGHT
                    * const.M_ELECTRON * omega_rad_s**2))
    return dk_per_m / 100.0


def coherence_length(dk_total_rad_cm):
    """L_c = pi / |dk|; +inf sentinel at exact phase matching."""
    if dk_total_rad_cm == 0.0:
        return math.inf
    return math.pi / abs(dk_total_rad_cm)


def onaxis_photon_number(nq_single, medium_length_cm, absorption_length_cm,
                         coherence_length_cm, atomic_density_cm3,
                         paper_literal=False):
    """Relative on-axis photon number after the gas column.

    Corrected absorption-limited form by default (decaying e^{-L'/2},
    L_a^2 in B). With paper_literal=True the printed growing-exponent
    variant is evaluated instead, for comparison only.
    """
    if medium_length_cm < 0 or absorption_length_cm <= 0:
        raise ValueError("lengths must be positive (L_m >= 0)")
    if coherence_length_cm <= 0:
        raise ValueError("coherence length must be > 0")
    la = absorption_length_cm
    ratio = 0.0 if math.isinf(coherence_length_cm) else la / coherence_length_cm
    scaled = medium_length_cm / la
    phase = (0.0 if math.isinf(coherence_length_cm)
             else math.pi * medium_length_cm / coherence_length_cm)
    if paper_literal:
        prefactor = 4.0 * atomic_density_cm3**2 * la / (
            1.0 + 4.0 * math.pi**2 * ratio**2)
        bracket = (1.0 + math.exp(-scaled)
                   - 2.0 * math.cos(phase) * math.exp(+scaled / 2.0))
    else:
        prefactor = 4.0 * atomic_density_cm3**2 * la**2 / (
            1.0 + 4.0 * math.pi**2 * ratio**2)
        bracket = (1.0 + math.exp(-scaled)
                   - 2.0 * math.cos(phase) * math.exp(-scaled / 2.0))
    return prefactor * nq_single * bracket


def phase_match_state(pulse: DriverPulse, peak_field_au, species: AtomSpecies,
                      medium: MediumConfig, order=15) -> PhaseMatchState:
    """Phase-matching state at one drive amplitude (end-of-pulse yield)."""
    y_final = trajectory_yield(pulse, peak_field_au, species).final_yield
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    dk_el = electron_mismatch(order, omega_si, medium.atomic_density_cm3,
                              y_final)
    dk_total = medium.dispersion_mismatch_rad_cm + dk_el
    lc = coherence_length(dk_total)
    la = medium.absorption_length_cm
    ratio = 0.0 if math.isinf(lc) else la / lc
    prefactor = 4.0 * medium.atomic_density_cm3**2 * la**2 / (
        1.0 + 4.0 * math.pi**2 * ratio**2)
    return PhaseMatchState(
        dk_electron_rad_cm=dk_el, dk_total_rad_cm=dk_total,
        coherence_length_cm=lc, absorption_length_cm=la,
        prefactor=prefactor,
        scaled_length=medium.medium_length_cm / la)


def _node_propagation_data(dist: FieldStateDistribution, pulse: DriverPulse,
                           species: AtomSpecies, medium: MediumConfig,
                           order, node_count, paper_literal=False,
                           **sfa_kwargs):
    """Per-unique-|E| single-atom N_q and coherence length."""
    from .hhg import harmonic_photon_number, sfa_dipole, spectrum

    ens = build_ensemble(dist, node_count)
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    cache = {}
    for e_k in ens.nodes:
        key = abs(e_k)
        if key in cache:
            continue
        nq = harmonic_photon_number(
            spectrum(sfa_dipole(pulse, key, species, **sfa_kwargs)), order)
        y_final = trajectory_yield(pulse, key, species).final_yield
        dk = medium.dispersion_mismatch_rad_cm + electron_mismatch(
            order, omega_si, medium.atomic_density_cm3, y_final)
        cache[key] = (nq, coherence_length(dk))
    return ens, cache


def ensemble_propagated(dist: FieldStateDistribution, pulse: DriverPulse,
                        species: AtomSpecies, medium: MediumConfig,
                        order=15, node_count=64, paper_literal=False,
                        **sfa_kwargs):
    """Husimi-averaged on-axis photon number after the column.

    Per node: end-of-pulse yield -> dk -> L_c, single-atom N_q, on-axis
    formula; then the fixed-order weighted sum.
    """
    ens, cache = _node_propagation_data(dist, pulse, species, medium, order,
                                        node_count, **sfa_kwargs)
    la = medium.absorption_length_cm
    total = 0.0
    for e_k, w_k in zip(ens.nodes, ens.weights):
        nq, lc = cache[abs(e_k)]
        total += w_k * onaxis_photon_number(
            nq, medium.medium_length_cm, la, lc, medium.atomic_density_cm3,
            paper_literal=paper_literal)
    return total


def medium_length_scan(dist: FieldStateDistribution, pulse: DriverPulse,
                       species: AtomSpecies, medium: MediumConfig,
                       lengths_cm, order=15, node_count=64,
                       paper_literal=False, **sfa_kwargs):
    """<N_q>(L_m) over an increasing grid of column lengths."""
    lengths = np.asarray(lengths_cm, dtype=float)
    if np.any(np.diff(lengths) <= 0):
        raise ValueError("length grid must be strictly increasing")
    ens, cache = _node_propagation_data(dist, pulse, species, medium, order,
                                        node_count, **sfa_kwargs)
    la = medium.absorption_length_cm
    out = np.zeros_like(lengths)
    for e_k, w_k in zip(ens.nodes, ens.weights):
        nq, lc = cache[abs(e_k)]
        out += w_k * np.array([
            onaxis_photon_number(nq, lm, la, lc, medium.atomic_density_cm3,
                                 paper_literal=paper_literal)
            for lm in lengths])
    return out
