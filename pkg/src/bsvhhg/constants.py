"""Physical constants and unit conversions.

All fixed constants live here (CODATA 2018). Internal computation is in
Hartree atomic units; SI values appear only at the I/O boundary. Every
conversion in the package routes through this table so that a single
source of truth controls the unit system.
"""

import math

# CODATA 2018
HBAR = 1.054571817e-34          # J s
C_LIGHT = 2.99792458e8          # m/s
EPSILON_0 = 8.8541878128e-12    # F/m
E_CHARGE = 1.602176634e-19      # C
M_ELECTRON = 9.1093837015e-31   # kg
BOHR_RADIUS = 5.29177210903e-11  # m

# Atomic units
FIELD_AU = 5.14220674763e11     # V/m per atomic unit of field
TIME_AU = 2.4188843265857e-17   # s per atomic unit of time
ENERGY_AU = 4.3597447222071e-18  # J per hartree

# Intensity of a linearly polarized wave with peak field 1 a.u.,
# I = (c eps0 / 2) E^2, expressed in W/cm^2.
INTENSITY_AU_WCM2 = 0.5 * C_LIGHT * EPSILON_0 * FIELD_AU**2 / 1e4

C_LIGHT_CMS = C_LIGHT * 1e2     # cm/s


def field_au_from_intensity(intensity_wcm2):
    """Peak field in a.u. for a given cycle-averaged intensity in W/cm^2."""
    if intensity_wcm2 < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity_wcm2}")
    return math.sqrt(intensity_wcm2 / INTENSITY_AU_WCM2)


def intensity_wcm2_from_field_au(field_au):
    """Cycle-averaged intensity in W/cm^2 for a peak field in a.u."""
    return field_au**2 * INTENSITY_AU_WCM2


def field_au_from_v_per_cm(field_v_cm):
    """Convert field from V/cm to atomic units."""
    return field_v_cm * 1e2 / FIELD_AU


def v_per_cm_from_field_au(field_au):
    """Convert field from atomic units to V/cm."""
    return field_au * FIELD_AU / 1e2


def angular_frequency_au(wavelength_nm):
    """Carrier angular frequency in a.u. for a vacuum wavelength in nm."""
    if wavelength_nm <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_nm}")
    return 2.0 * math.pi * C_LIGHT / (wavelength_nm * 1e-9) * TIME_AU


def photon_energy_joule(wavelength_nm):
    """Photon energy in joules for a vacuum wavelength in nm."""
    return HBAR * 2.0 * math.pi * C_LIGHT / (wavelength_nm * 1e-9)


def au_time_from_fs(t_fs):
    return t_fs * 1e-15 / TIME_AU


def fs_from_au_time(t_au):
    return t_au * TIME_AU / 1e15
