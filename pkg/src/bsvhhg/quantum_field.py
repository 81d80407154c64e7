"""Driver pulses and the quantum-optical amplitude distribution of the field.

A squeezed-vacuum driver has a vanishing mean field; its intensity is
carried entirely by fluctuations. All observables downstream are averages
of single-trajectory results over the field-amplitude marginal of the
Husimi distribution, a zero-mean Gaussian whose variance is fixed either
by the squeezing parameter r (natural units, variance 1 + e^{2r}) or, for
scenario work, directly by the target mean intensity. A coherent driver
is the single-point degenerate case.

The ensemble used for averaging is a Gauss-Hermite quadrature rule mapped
onto that Gaussian: deterministic, symmetric about E = 0, and exact for
polynomial moments up to degree 2N - 1.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import roots_hermite

from . import constants as const


class Envelope(Enum):
    SIN_SQUARED = "sin2"


class DistributionKind(Enum):
    COHERENT = "coherent"
    BSV = "bsv"


MIN_SAMPLES_PER_CYCLE = 40
DEFAULT_SAMPLES_PER_CYCLE = 160
MIN_BSV_NODES = 16
DEFAULT_NODES = 64


@dataclass(frozen=True)
class DriverPulse:
    """Classical pulse template E(t) = E f(t) cos(w t + theta), f = sin^2.

    Times are atomic units spanning [0, tau]; the grid must resolve the
    carrier with at least MIN_SAMPLES_PER_CYCLE points per optical cycle.
    """

    wavelength_nm: float
    duration_fs: float
    carrier_phase: float = 0.0
    samples_per_cycle: int = DEFAULT_SAMPLES_PER_CYCLE
    envelope: Envelope = Envelope.SIN_SQUARED

    def __post_init__(self):
        if self.duration_fs <= 0:
            raise ValueError(f"duration must be > 0, got {self.duration_fs}")
        if self.samples_per_cycle < MIN_SAMPLES_PER_CYCLE:
            raise ValueError(
                f"need >= {MIN_SAMPLES_PER_CYCLE} samples per optical cycle, "
                f"got {self.samples_per_cycle}")

    @property
    def carrier_frequency_au(self):
        return const.angular_frequency_au(self.wavelength_nm)

    @property
    def optical_cycle_au(self):
        return 2.0 * math.pi / self.carrier_frequency_au

    @property
    def duration_au(self):
        return const.au_time_from_fs(self.duration_fs)

    def time_grid(self):
        """Uniform grid over [0, tau] inclusive."""
        n = int(round(self.duration_au / self.optical_cycle_au
                      * self.samples_per_cycle)) + 1
        return np.linspace(0.0, self.duration_au, n)

    def envelope_values(self, t):
        return np.sin(np.pi * t / self.duration_au) ** 2

    def ponderomotive_energy_au(self, peak_field_au):
        """Up = E^2 / (4 w^2), cycle-averaged quiver energy at peak field."""
        return peak_field_au**2 / (4.0 * self.carrier_frequency_au**2)


def sample_field(pulse: DriverPulse, peak_field_au: float):
    """Field trace E(t) and vector potential A(t) = -int_0^t E dt' (A(0)=0).

    Returns (t, E, A), all in atomic units. The vector potential is the
    cumulative trapezoid of -E so that the pair is consistent with the
    grid actually used downstream.
    """
    if peak_field_au < 0:
        raise ValueError(f"peak field must be >= 0, got {peak_field_au}")
    t = pulse.time_grid()
    e_t = (peak_field_au * pulse.envelope_values(t)
           * np.cos(pulse.carrier_frequency_au * t + pulse.carrier_phase))
    a_t = -cumulative_trapezoid(e_t, t)
    return t, e_t, a_t


def cumulative_trapezoid(y, x):
    """Cumulative trapezoid integral with a leading zero."""
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def husimi_marginal(r: float, e_natural: float):
    """Field-amplitude marginal of the squeezed-vacuum Husimi density.

    In natural quadrature units the two-dimensional density factorizes
    into Gaussians of variance (1 + e^{2r}) along the anti-squeezed
    quadrature and (1 + e^{-2r}) along the squeezed one. The scalar
    amplitude distribution used for ensemble averages is the normalized
    marginal along the anti-squeezed axis:

        Q(E) = exp(-E^2 / (2 (1 + e^{2r}))) / sqrt(2 pi (1 + e^{2r}))
    """
    if not (math.isfinite(r) and math.isfinite(e_natural)):
        raise ValueError("r and E must be finite")
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    var = husimi_marginal_variance(r)
    return math.exp(-e_natural**2 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def husimi_marginal_variance(r: float):
    """Variance 1 + e^{2r} of the anti-squeezed marginal, natural units."""
    return 1.0 + math.exp(2.0 * r)


def intensity_from_squeezing(r: float, volume_cm3: float, omega_rad_s: float):
    """Mean intensity c hbar w sinh^2(r) / V in W/cm^2.

    The (r, V) pairing determines the mean photon number sinh^2(r) of the
    squeezed mode and hence the mean intensity in the quantization volume.
    """
    if r < 0 or not math.isfinite(r):
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {r}")
    if volume_cm3 <= 0:
        raise ValueError(f"quantization volume must be > 0, got {volume_cm3}")
    if omega_rad_s <= 0:
        raise ValueError(f"mode frequency must be > 0, got {omega_rad_s}")
    n_mean = math.sinh(r) ** 2
    return const.C_LIGHT_CMS * const.HBAR * omega_rad_s * n_mean / volume_cm3


def squeezing_from_intensity(intensity_wcm2: float, volume_cm3: float,
                             omega_rad_s: float):
    """Inverse of intensity_from_squeezing: r = asinh(sqrt(I V / (c hbar w)))."""
    if intensity_wcm2 < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity_wcm2}")
    if volume_cm3 <= 0:
        raise ValueError(f"quantization volume must be > 0, got {volume_cm3}")
    n_mean = intensity_wcm2 * volume_cm3 / (
        const.C_LIGHT_CMS * const.HBAR * omega_rad_s)
    return math.asinh(math.sqrt(n_mean))


@dataclass(frozen=True)
class FieldStateDistribution:
    """Amplitude distribution Q(E) of the driver.

    Coherent: point mass at peak_field_au. BSV: zero-mean Gaussian whose
    variance in field units reproduces the mean intensity exactly,
    sigma_E^2 = <I> / I_au. The squeezing parameter consistent with the
    configured quantization volume is carried as metadata.
    """

    kind: DistributionKind
    mean_intensity_wcm2: float
    wavelength_nm: float
    peak_field_au: float = 0.0          # coherent only
    squeezing_r: float = 0.0            # metadata for BSV
    quantization_volume_cm3: float = 1e-14

    @classmethod
    def coherent(cls, mean_intensity_wcm2, wavelength_nm=800.0):
        """Coherent state whose cycle-averaged peak intensity is <I>."""
        e0 = const.field_au_from_intensity(mean_intensity_wcm2)
        return cls(kind=DistributionKind.COHERENT,
                   mean_intensity_wcm2=mean_intensity_wcm2,
                   wavelength_nm=wavelength_nm, peak_field_au=e0)

    @classmethod
    def coherent_from_field_v_cm(cls, peak_field_v_cm, wavelength_nm=800.0):
        e0 = const.field_au_from_v_per_cm(peak_field_v_cm)
        return cls(kind=DistributionKind.COHERENT,
                   mean_intensity_wcm2=const.intensity_wcm2_from_field_au(e0),
                   wavelength_nm=wavelength_nm, peak_field_au=e0)

    @classmethod
    def bsv(cls, mean_intensity_wcm2, wavelength_nm=800.0,
            quantization_volume_cm3=1e-14):
        """BSV of given mean intensity; r derived for the configured volume."""
        omega = const.photon_energy_joule(wavelength_nm) / const.HBAR
        r = squeezing_from_intensity(mean_intensity_wcm2,
                                     quantization_volume_cm3, omega)
        dist = cls(kind=DistributionKind.BSV,
                   mean_intensity_wcm2=mean_intensity_wcm2,
                   wavelength_nm=wavelength_nm, squeezing_r=r,
                   quantization_volume_cm3=quantization_volume_cm3)
        dist.check_consistency()
        return dist

    @classmethod
    def bsv_from_squeezing(cls, r, wavelength_nm=800.0,
                           quantization_volume_cm3=1e-14):
        """BSV from (r, V); the mean intensity follows from <n> = sinh^2 r."""
        omega = const.photon_energy_joule(wavelength_nm) / const.HBAR
        i_mean = intensity_from_squeezing(r, quantization_volume_cm3, omega)
        dist = cls(kind=DistributionKind.BSV, mean_intensity_wcm2=i_mean,
                   wavelength_nm=wavelength_nm, squeezing_r=r,
                   quantization_volume_cm3=quantization_volume_cm3)
        dist.check_consistency()
        return dist

    def check_consistency(self):
        """BSV invariant: <n> = sinh^2 r and <I> = c hbar w <n> / V together."""
        if self.kind is not DistributionKind.BSV:
            return
        omega = const.photon_energy_joule(self.wavelength_nm) / const.HBAR
        i_back = intensity_from_squeezing(
            self.squeezing_r, self.quantization_volume_cm3, omega)
        if self.mean_intensity_wcm2 > 0:
            rel = abs(i_back - self.mean_intensity_wcm2) / self.mean_intensity_wcm2
            if rel > 1e-9:
                raise ValueError(
                    f"(r, V, <I>) inconsistent: <I> from r is {i_back:.6g}, "
                    f"configured {self.mean_intensity_wcm2:.6g}")

    @property
    def field_sigma_au(self):
        """Gaussian width of the marginal in field a.u. (BSV only)."""
        return math.sqrt(self.mean_intensity_wcm2 / const.INTENSITY_AU_WCM2)


@dataclass(frozen=True)
class QuadratureEnsemble:
    """Deterministic amplitude ensemble: nodes E_k (a.u.) and weights w_k."""

    kind: DistributionKind
    squeezing_r: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def node_count(self):
        return len(self.nodes)

    def second_moment(self):
        return float(np.sum(self.weights * self.nodes**2))

    def to_json(self):
        return json.dumps({
            "kind": self.kind.value,
            "r": self.squeezing_r,
            "nodes": [[float(e), float(w)]
                      for e, w in zip(self.nodes, self.weights)],
        })


def build_ensemble(dist: FieldStateDistribution,
                   node_count: int = DEFAULT_NODES) -> QuadratureEnsemble:
    """Quadrature ensemble over Q(E).

    Coherent distributions collapse to the single node (E0, 1). BSV maps
    Gauss-Hermite abscissas onto the marginal's Gaussian, E_k = sqrt(2)
    sigma x_k, w_k = w_k^GH / sqrt(pi); nodes are symmetric about zero and
    the weighted second moment equals sigma^2 to quadrature precision.
    """
    if node_count < 1:
        raise ValueError(f"node count must be >= 1, got {node_count}")
    if dist.kind is DistributionKind.COHERENT:
        return QuadratureEnsemble(
            kind=dist.kind, squeezing_r=0.0,
            nodes=np.array([dist.peak_field_au]), weights=np.array([1.0]))
    if node_count < MIN_BSV_NODES:
        raise ValueError(
            f"BSV ensembles need >= {MIN_BSV_NODES} nodes, got {node_count}")
    x, w = roots_hermite(node_count)
    sigma = dist.field_sigma_au
    return QuadratureEnsemble(
        kind=dist.kind, squeezing_r=dist.squeezing_r,
        nodes=np.sqrt(2.0) * sigma * x, weights=w / math.sqrt(math.pi))
