"""Photon loss of the squeezed driver as a Gaussian beam-splitter channel.

Quadrature convention: X1 = a^dag + a, X2 = -i(a^dag - a), vacuum variance
normalized to 1 everywhere. A lossless squeezed vacuum has variances
(e^{2r}, e^{-2r}); transmitting a fraction t of the photons mixes in
vacuum,

    Var_out = t Var_in + (1 - t),

so the lossy state has (t e^{2r} + 1 - t, t e^{-2r} + 1 - t). Normally
ordered autocorrelators scale as <a^dag^n a^n> -> t^n <a^dag^n a^n>, which
leaves g2(0) invariant for any t > 0 and makes loss invisible to intensity
correlations; squeezing, by contrast, degrades monotonically, and the
variance product exceeds the Heisenberg floor for every intermediate t.

The absorbed fraction A = 1 - t doubles as the quantumness bookkeeping for
the gas column: A <= 1/8 is the retained-quantumness verdict (boundary
inclusive), and inverting A = 1/8 under the saturated-shot absorption
model yields the maximum column length L = 5 N_IR / (16 n rho S).
"""

import math
from dataclasses import dataclass

import numpy as np

SATURATED_FRACTION_DEFAULT = 0.4   # Q(E) mass with I > I_sat in the budget model
QUANTUMNESS_THRESHOLD = 1.0 / 8.0  # absorbed fraction, boundary inclusive


@dataclass(frozen=True)
class LossChannel:
    """Beam-splitter loss with transmission t; absorbed fraction A = 1 - t."""

    transmission: float

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError(
                f"transmission must be in [0, 1], got {self.transmission}")

    @property
    def absorbed_fraction(self):
        return 1.0 - self.transmission

    def compose(self, other: "LossChannel") -> "LossChannel":
        """Sequential losses multiply transmissions (semigroup)."""
        return LossChannel(self.transmission * other.transmission)


@dataclass(frozen=True)
class GaussianStateSummary:
    """Variances and mean photon number of a (possibly lossy) state."""

    var_x1: float
    var_x2: float
    mean_photons: float

    @property
    def heisenberg_excess(self):
        return self.var_x1 * self.var_x2 - 1.0


def lossy_variances(r: float, transmission: float):
    """(Var X1, Var X2) of a squeezed vacuum after loss."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    if not 0.0 <= transmission <= 1.0:
        raise ValueError(
            f"transmission must be in [0, 1], got {transmission}")
    t = transmission
    return (t * math.exp(2.0 * r) + 1.0 - t,
            t * math.exp(-2.0 * r) + 1.0 - t)


def lossy_state(r: float, transmission: float) -> GaussianStateSummary:
    v1, v2 = lossy_variances(r, transmission)
    return GaussianStateSummary(
        var_x1=v1, var_x2=v2,
        mean_photons=transmission * math.sinh(r) ** 2)


def heisenberg_excess(r: float, transmission: float):
    """Var X1 * Var X2 - 1.

    Equals t(1-t)(2 cosh 2r - 2): zero exactly at t in {0, 1} (pure
    squeezed vacuum or vacuum) and strictly positive between, for r > 0.
    """
    v1, v2 = lossy_variances(r, transmission)
    return v1 * v2 - 1.0


def wigner_lossy_bsv(r: float, transmission: float, x1_grid, x2_grid):
    """Wigner function of the lossy squeezed vacuum on a quadrature mesh.

    Zero-mean Gaussian with covariance diag(Var X1, Var X2) in the
    vacuum-variance-1 normalization; integrates to 1 over dX1 dX2.
    Returns a (len(x2), len(x1)) array (rows follow x2).
    """
    x1 = np.asarray(x1_grid, dtype=float)
    x2 = np.asarray(x2_grid, dtype=float)
    if x1.size < 2 or x2.size < 2:
        raise ValueError("Wigner grid needs at least 2 points per axis")
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(x2))):
        raise ValueError("Wigner grid must be finite")
    v1, v2 = lossy_variances(r, transmission)
    xx1, xx2 = np.meshgrid(x1, x2)
    norm = 1.0 / (2.0 * math.pi * math.sqrt(v1 * v2))
    return norm * np.exp(-xx1**2 / (2.0 * v1) - xx2**2 / (2.0 * v2))


def wigner_to_csv(path, x1_grid, x2_grid, w):
    """Matrix CSV with axis headers: first row X1, first column X2."""
    lines = ["x2\\x1," + ",".join(repr(float(v)) for v in x1_grid)]
    for x2v, row in zip(x2_grid, w):
        lines.append(repr(float(x2v)) + "," +
                     ",".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def autocorrelator_scaling(n: int, transmission: float):
    """<a^dag^n a^n>_lossy / <a^dag^n a^n>_0 = t^n."""
    if n < 1:
        raise ValueError(f"autocorrelator order must be >= 1, got {n}")
    if not 0.0 <= transmission <= 1.0:
        raise ValueError(
            f"transmission must be in [0, 1], got {transmission}")
    return transmission ** n


def g2_invariance_ratio(transmission: float):
    """g2(0)_lossy / g2(0)_0, identically 1; undefined at t = 0.

    At t = 0 both <a^dag^2 a^2> and <a^dag a> vanish and the ratio has no
    meaning, so that case raises instead of returning a number.
    """
    if transmission == 0.0:
        raise ValueError("g2(0) is ill-defined at zero transmission")
    return (autocorrelator_scaling(2, transmission)
            / autocorrelator_scaling(1, transmission) ** 2)


def absorbed_photons(atomic_density_cm3, spot_area_cm2, medium_length_cm,
                     photons_per_ionization,
                     saturated_fraction=SATURATED_FRACTION_DEFAULT):
    """Absorbed driver photons: fraction * n * rho * S * L_m.

    The saturated fraction is the Q(E) mass whose shots ionize essentially
    every atom in the focal volume; it is a scenario parameter here.
    """
    for name, v in (("density", atomic_density_cm3),
                    ("spot area", spot_area_cm2),
                    ("length", medium_length_cm),
                    ("photon order", photons_per_ionization),
                    ("saturated fraction", saturated_fraction)):
        if v < 0:
            raise ValueError(f"{name} must be >= 0, got {v}")
    return (saturated_fraction * photons_per_ionization
            * atomic_density_cm3 * spot_area_cm2 * medium_length_cm)


def max_quantum_length(n_ir_photons, photons_per_ionization,
                       atomic_density_cm3, spot_area_cm2):
    """Column length at which the absorbed fraction reaches 1/8.

    L = 5 N_IR / (16 n rho S); with the 0.4 saturated-fraction absorption
    model, A(L) = 1/8 exactly by construction.
    """
    for name, v in (("photon number", n_ir_photons),
                    ("photon order", photons_per_ionization),
                    ("density", atomic_density_cm3),
                    ("spot area", spot_area_cm2)):
        if v <= 0:
            raise ValueError(f"{name} must be > 0, got {v}")
    return 5.0 * n_ir_photons / (16.0 * photons_per_ionization
                                 * atomic_density_cm3 * spot_area_cm2)


def quantumness_verdict(absorbed_fraction: float) -> bool:
    """True if the squeezed driver retains its quantum character.

    Threshold A = 1/8, boundary inclusive: the stated border value counts
    as preserved.
    """
    if not 0.0 <= absorbed_fraction <= 1.0:
        raise ValueError(
            f"absorbed fraction must be in [0, 1], got {absorbed_fraction}")
    return absorbed_fraction <= QUANTUMNESS_THRESHOLD
