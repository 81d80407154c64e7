"""Declarative scenario runner producing the figure-level datasets.

Each scenario id maps to one dataset: ionization curves, single-atom and
propagated harmonic yields, coherence/absorption lengths, medium-length
scans, decoherence curves, density scans, post-propagation spectra, and
the photon-budget estimate. Outputs are CSV files (header row plus a
'# units:' annotation row), a per-scenario meta.json, and a manifest.json
carrying the config hash and per-file checksums. Runs are deterministic:
identical configs produce byte-identical CSVs regardless of thread count.
"""

import concurrent.futures
import hashlib
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from . import constants as const
from .decoherence import (absorbed_photons, heisenberg_excess,
                          lossy_variances, max_quantum_length,
                          quantumness_verdict)
from .hhg import (detect_cutoff, harmonic_photon_number, NoPlateauError,
                  semiclassical_cutoff_order, sfa_dipole, spectrum,
                  HarmonicSpectrum)
from .ionization import (ARGON, AtomSpecies, PRESETS, load_species,
                         trajectory_yield)
from .propagation import (MediumConfig, coherence_length, electron_mismatch,
                          onaxis_photon_number)
from .quantum_field import (DriverPulse, FieldStateDistribution,
                            build_ensemble)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCENARIO_IDS = ("fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c",
                "fig4b", "fig4c", "fig4d", "budget")

MPI_RELIABLE_MAX_WCM2 = 5e14


class ConfigError(ValueError):
    """Blocking configuration problem (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Numerical convergence failure (CLI exit code 3)."""


@dataclass(frozen=True)
class Finding:
    severity: str   # "error" | "warning"
    fieldname: str
    message: str


@dataclass(frozen=True)
class ScenarioConfig:
    """Full parameter set for one scenario run.

    Precedence: CLI flags > config file > these defaults.
    """

    species: str = "argon"
    species_table: dict | None = None
    # pulse
    wavelength_nm: float = 800.0
    duration_fs: float = 13.0
    carrier_phase: float = 0.0
    samples_per_cycle: int = 160
    # drive
    mean_intensity_wcm2: float = 1.5e14
    quantization_volume_cm3: float = 1e-14
    # intensity grid (fig2b/fig2c/fig3a)
    intensity_min_wcm2: float = 1e13
    intensity_max_wcm2: float = 5e14
    intensity_points: int = 24
    # fig3b curve grid
    curve_min_wcm2: float = 3e13
    curve_max_wcm2: float = 4e14
    curve_points: int = 40
    # medium
    atomic_density_cm3: float = 1e18
    xuv_cross_section_cm2: float = 1e-17
    dispersion_mismatch_rad_cm: float = 2e-6
    spot_area_cm2: float = 1.3e-6
    confocal_parameter_cm: float = 10.0
    medium_length_cm: float | None = None
    # medium-length scan (fig3c)
    length_max_cm: float = 0.5
    length_points: int = 161
    # density scan (fig4c)
    density_min_cm3: float = 1e16
    density_max_cm3: float = 1e19
    density_points: int = 13
    # ensemble / hhg
    nodes: int = 64
    harmonic_order: int = 15
    cutoff_drop_db: float = 10.0
    excursion_cycles: float = 1.0
    spectral_pad_factor: int = 16
    # decoherence (fig4b)
    squeezing_r: float = 2.0
    loss_points: int = 49
    # budget
    n_ir_photons: float = 1e13
    ce_ref: float = 5e-6
    spot_ref_cm2: float = 5e-4
    spot_target_cm2: float = 2.5e-7
    ratio_coh_over_bsv: float = 100.0
    # run behavior
    paper_literal_eq4: bool = False
    threads: int = 1
    out_dir: str = "out"

    def resolve_species(self) -> AtomSpecies:
        if self.species_table is not None:
            from .ionization import parse_cross_section_log10
            t = self.species_table
            return AtomSpecies(
                name=t.get("name", "custom"),
                ionization_potential_au=float(t["ionization_potential_au"]),
                core_charge=float(t["core_charge"]),
                mpi_order=int(t["mpi_order"]),
                mpi_log10_sigma=parse_cross_section_log10(
                    t["mpi_cross_section"]))
        if self.species not in PRESETS:
            raise ConfigError(f"unknown species preset '{self.species}'")
        return PRESETS[self.species]

    def pulse(self) -> DriverPulse:
        return DriverPulse(wavelength_nm=self.wavelength_nm,
                           duration_fs=self.duration_fs,
                           carrier_phase=self.carrier_phase,
                           samples_per_cycle=self.samples_per_cycle)

    def medium(self, medium_length_cm=None, atomic_density_cm3=None):
        rho = (self.atomic_density_cm3 if atomic_density_cm3 is None
               else atomic_density_cm3)
        la = 1.0 / (self.xuv_cross_section_cm2 * rho)
        lm = medium_length_cm
        if lm is None:
            lm = self.medium_length_cm if self.medium_length_cm is not None \
                else 2.0 * la
        return MediumConfig(
            atomic_density_cm3=rho, medium_length_cm=lm,
            xuv_cross_section_cm2=self.xuv_cross_section_cm2,
            dispersion_mismatch_rad_cm=self.dispersion_mismatch_rad_cm,
            spot_area_cm2=self.spot_area_cm2,
            confocal_parameter_cm=self.confocal_parameter_cm)

    def canonical_dict(self):
        d = asdict(self)
        d.pop("out_dir")
        d.pop("threads")   # must not influence results
        return d

    def config_hash(self):
        payload = json.dumps(self.canonical_dict(), sort_keys=True,
                             separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


def load_config(path) -> ScenarioConfig:
    """Read a TOML config file into a ScenarioConfig."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse failure in {path}: {exc}") from exc
    flat = {}
    for section, values in raw.items():
        if isinstance(values, dict):
            if section == "species":
                flat["species_table"] = values
            else:
                flat.update(values)
        else:
            flat[section] = values
    known = set(ScenarioConfig.__dataclass_fields__)
    unknown = set(flat) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    return ScenarioConfig(**flat)


def apply_overrides(config: ScenarioConfig, **overrides) -> ScenarioConfig:
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **overrides) if overrides else config


def validate_config(config: ScenarioConfig):
    """Blocking errors and advisory warnings for a config."""
    findings = []
    if config.atomic_density_cm3 <= 0:
        findings.append(Finding("error", "atomic_density_cm3",
                                "atomic density must be > 0"))
    if config.mean_intensity_wcm2 <= 0:
        findings.append(Finding("error", "mean_intensity_wcm2",
                                "mean intensity must be > 0"))
    if config.intensity_min_wcm2 >= config.intensity_max_wcm2:
        findings.append(Finding("error", "intensity_min_wcm2",
                                "intensity grid must be increasing"))
    if config.nodes < 16:
        findings.append(Finding(
            "error", "nodes",
            "squeezed-vacuum ensembles need at least 16 quadrature nodes"))
    if config.duration_fs <= 0:
        findings.append(Finding("error", "duration_fs",
                                "pulse duration must be > 0"))
    try:
        config.resolve_species()
    except (ConfigError, KeyError, ValueError) as exc:
        findings.append(Finding("error", "species", str(exc)))
    medium_len = config.medium_length_cm
    if medium_len is not None and medium_len < 0:
        findings.append(Finding("error", "medium_length_cm",
                                "medium length must be >= 0"))
    if medium_len is not None and \
            config.confocal_parameter_cm < 10.0 * medium_len:
        findings.append(Finding(
            "warning", "confocal_parameter_cm",
            f"loose-focusing assumption marginal: confocal parameter "
            f"{config.confocal_parameter_cm} cm < 10 x medium length"))
    if config.mean_intensity_wcm2 > MPI_RELIABLE_MAX_WCM2 or \
            config.intensity_max_wcm2 > MPI_RELIABLE_MAX_WCM2:
        findings.append(Finding(
            "warning", "mean_intensity_wcm2",
            "perturbative multiphoton treatment is unreliable above "
            "5e14 W/cm2"))
    return findings


@dataclass(frozen=True)
class ResultBundle:
    scenario_id: str
    out_dir: Path
    csv_paths: list[Path] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    manifest_path: Path | None = None


def _fmt(value):
    return repr(float(value))


def write_csv(path: Path, columns, units, rows):
    lines = [",".join(columns), "# units: " + ",".join(units)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _sha256(path: Path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _ordered_map(fn, items, threads):
    """Map preserving input order; thread count never changes results."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _node_values(config, quantity_fn, intensity_wcm2):
    """sum_k w_k quantity(|E_k|) over the BSV ensemble at one <I>."""
    dist = FieldStateDistribution.bsv(
        intensity_wcm2, config.wavelength_nm, config.quantization_volume_cm3)
    ens = build_ensemble(dist, config.nodes)
    unique = sorted({abs(e) for e in ens.nodes})
    values = dict(zip(unique, _ordered_map(quantity_fn, unique,
                                           config.threads)))
    return ens, values


def _ensemble_average(ens, values):
    return float(sum(w * values[abs(e)]
                     for e, w in zip(ens.nodes, ens.weights)))


# --- scenario implementations -------------------------------------------

def _scn_fig2b(config, out_dir):
    """Mean ionization yield vs <I>: SFI/MPI split, coherent and BSV."""
    pulse = config.pulse()
    species = config.resolve_species()
    grid = np.logspace(math.log10(config.intensity_min_wcm2),
                       math.log10(config.intensity_max_wcm2),
                       config.intensity_points)

    def split_yields(e_abs):
        rec = trajectory_yield(pulse, e_abs, species)
        return rec.final_yield_sfi_only, rec.final_yield_mpi_only

    rows = []
    for i_mean in grid:
        e0 = const.field_au_from_intensity(i_mean)
        coh_sfi, coh_mpi = split_yields(e0)
        ens, vals = _node_values(config, split_yields, i_mean)
        bsv_sfi = float(sum(w * vals[abs(e)][0]
                            for e, w in zip(ens.nodes, ens.weights)))
        bsv_mpi = float(sum(w * vals[abs(e)][1]
                            for e, w in zip(ens.nodes, ens.weights)))
        rows.append((i_mean, coh_sfi, coh_mpi, bsv_sfi, bsv_mpi))
    path = out_dir / "fig2b.csv"
    write_csv(path,
              ["mean_intensity_wcm2", "sfi_coherent", "mpi_coherent",
               "sfi_bsv", "mpi_bsv"],
              ["W/cm^2", "probability", "probability", "probability",
               "probability"], rows)
    meta = {"intensity_points": len(grid),
            "species": species.name,
            "note": "SFI-only and MPI-only pulse-integrated yields"}
    return [path], meta


def _scn_fig2c(config, out_dir):
    """<N_15> vs <I> for coherent and BSV drivers (single-atom level)."""
    pulse = config.pulse()
    species = config.resolve_species()
    order = config.harmonic_order
    grid = np.logspace(math.log10(config.intensity_min_wcm2),
                       math.log10(config.intensity_max_wcm2),
                       config.intensity_points)

    def nq_of(e_abs):
        trace = sfa_dipole(pulse, e_abs, species,
                           excursion_cycles=config.excursion_cycles)
        return harmonic_photon_number(
            spectrum(trace, pad_factor=config.spectral_pad_factor), order)

    rows = []
    for i_mean in grid:
        coh = nq_of(const.field_au_from_intensity(i_mean))
        ens, vals = _node_values(config, nq_of, i_mean)
        rows.append((i_mean, coh, _ensemble_average(ens, vals)))
    path = out_dir / "fig2c.csv"
    write_csv(path,
              ["mean_intensity_wcm2", f"n{order}_coherent", f"n{order}_bsv"],
              ["W/cm^2", "arb", "arb"], rows)
    meta = {"harmonic_order": order, "species": species.name}
    return [path], meta


def _ensemble_power(config, pulse, species, intensity_wcm2):
    def spec_of(e_abs):
        return spectrum(sfa_dipole(pulse, e_abs, species,
                                   excursion_cycles=config.excursion_cycles),
                        pad_factor=config.spectral_pad_factor)
    ens, vals = _node_values(config, spec_of, intensity_wcm2)
    ref = vals[abs(ens.nodes[0])]
    power = np.zeros_like(ref.power)
    for e, w in zip(ens.nodes, ens.weights):
        power += w * vals[abs(e)].power
    avg = HarmonicSpectrum(harmonic_order=ref.harmonic_order, power=power,
                           carrier_frequency_au=ref.carrier_frequency_au,
                           pad_factor=ref.pad_factor)
    return avg, ens, vals


def _scn_fig2d(config, out_dir):
    """Ensemble harmonic power spectra, coherent vs BSV, at <I>."""
    pulse = config.pulse()
    species = config.resolve_species()
    i_mean = config.mean_intensity_wcm2
    e0 = const.field_au_from_intensity(i_mean)
    coh_spec = spectrum(sfa_dipole(pulse, e0, species,
                                   excursion_cycles=config.excursion_cycles),
                        pad_factor=config.spectral_pad_factor)
    bsv_spec, _, _ = _ensemble_power(config, pulse, species, i_mean)
    keep = coh_spec.harmonic_order <= 80.0
    rows = list(zip(coh_spec.harmonic_order[keep], coh_spec.power[keep],
                    bsv_spec.power[keep]))
    path = out_dir / "fig2d.csv"
    write_csv(path, ["harmonic_order", "power_coherent", "power_bsv"],
              ["dimensionless", "arb", "arb"], rows)
    meta = {"mean_intensity_wcm2": i_mean,
            "cutoff_drop_db": config.cutoff_drop_db,
            "semiclassical_cutoff_order": semiclassical_cutoff_order(
                pulse, e0, species.ionization_potential_au)}
    for name, spec in (("coherent", coh_spec), ("bsv", bsv_spec)):
        try:
            meta[f"cutoff_{name}"] = detect_cutoff(spec,
                                                   config.cutoff_drop_db)
        except NoPlateauError:
            meta[f"cutoff_{name}"] = None
    return [path], meta


def _scn_fig3a(config, out_dir):
    """Coherence length and absorption length vs drive intensity."""
    pulse = config.pulse()
    species = config.resolve_species()
    medium = config.medium()
    la = medium.absorption_length_cm
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    grid = np.logspace(math.log10(config.intensity_min_wcm2),
                       math.log10(config.intensity_max_wcm2),
                       config.intensity_points)
    rows = []
    for i in grid:
        y = trajectory_yield(pulse, const.field_au_from_intensity(i),
                             species).final_yield
        dk = medium.dispersion_mismatch_rad_cm + electron_mismatch(
            config.harmonic_order, omega_si, medium.atomic_density_cm3, y)
        lc = coherence_length(dk)
        rows.append((i, min(lc, 1e30), la))
    path = out_dir / "fig3a.csv"
    write_csv(path,
              ["intensity_wcm2", "coherence_length_cm",
               "absorption_length_cm"],
              ["W/cm^2", "cm", "cm"], rows)
    meta = {"harmonic_order": config.harmonic_order,
            "atomic_density_cm3": medium.atomic_density_cm3}
    return [path], meta


def _propagation_node_data(config, pulse, species, intensity_wcm2):
    """(N_q, Y) per unique |E| of the BSV ensemble at one <I>."""
    order = config.harmonic_order

    def node_fn(e_abs):
        nq = harmonic_photon_number(
            spectrum(sfa_dipole(pulse, e_abs, species,
                                excursion_cycles=config.excursion_cycles),
                     pad_factor=config.spectral_pad_factor),
            order)
        y = trajectory_yield(pulse, e_abs, species).final_yield
        return nq, y

    return _node_values(config, node_fn, intensity_wcm2)


def _propagated_value(config, medium, nq, y, omega_si, lm):
    dk = medium.dispersion_mismatch_rad_cm + electron_mismatch(
        config.harmonic_order, omega_si, medium.atomic_density_cm3, y)
    return onaxis_photon_number(
        nq, lm, medium.absorption_length_cm, coherence_length(dk),
        medium.atomic_density_cm3, paper_literal=config.paper_literal_eq4)


def _scn_fig3b(config, out_dir):
    """Propagated N_15(I) at L_m = 10 L_a plus ensemble markers."""
    pulse = config.pulse()
    species = config.resolve_species()
    medium = config.medium()
    la = medium.absorption_length_cm
    lm = 10.0 * la
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    order = config.harmonic_order
    grid = np.logspace(math.log10(config.curve_min_wcm2),
                       math.log10(config.curve_max_wcm2),
                       config.curve_points)

    def point(i):
        e_abs = const.field_au_from_intensity(i)
        nq = harmonic_photon_number(
            spectrum(sfa_dipole(pulse, e_abs, species,
                                excursion_cycles=config.excursion_cycles),
                     pad_factor=config.spectral_pad_factor),
            order)
        y = trajectory_yield(pulse, e_abs, species).final_yield
        return _propagated_value(config, medium, nq, y, omega_si, lm)

    curve = _ordered_map(point, list(grid), config.threads)
    rows = list(zip(grid, curve))
    path = out_dir / "fig3b.csv"
    write_csv(path, ["intensity_wcm2", f"n{order}_propagated"],
              ["W/cm^2", "arb"], rows)

    i_mean = config.mean_intensity_wcm2
    ens, vals = _propagation_node_data(config, pulse, species, i_mean)
    bsv_marker = float(sum(
        w * _propagated_value(config, medium, *vals[abs(e)], omega_si, lm)
        for e, w in zip(ens.nodes, ens.weights)))
    coh_marker = point(i_mean)
    meta = {"medium_length_cm": lm, "mean_intensity_wcm2": i_mean,
            "peak_intensity_wcm2": float(grid[int(np.argmax(curve))]),
            "bsv_marker": bsv_marker, "coherent_marker": coh_marker}
    return [path], meta


def _scn_fig3c(config, out_dir):
    """<N_15> vs medium length for BSV and coherent drivers."""
    pulse = config.pulse()
    species = config.resolve_species()
    medium = config.medium()
    la = medium.absorption_length_cm
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    i_mean = config.mean_intensity_wcm2
    lengths = np.linspace(0.0, config.length_max_cm, config.length_points)

    ens, vals = _propagation_node_data(config, pulse, species, i_mean)
    e0 = const.field_au_from_intensity(i_mean)
    nq_coh = harmonic_photon_number(
        spectrum(sfa_dipole(pulse, e0, species,
                            excursion_cycles=config.excursion_cycles),
                 pad_factor=config.spectral_pad_factor),
        config.harmonic_order)
    y_coh = trajectory_yield(pulse, e0, species).final_yield

    rows = []
    for lm in lengths:
        coh = _propagated_value(config, medium, nq_coh, y_coh, omega_si, lm)
        bsv = float(sum(
            w * _propagated_value(config, medium, *vals[abs(e)], omega_si, lm)
            for e, w in zip(ens.nodes, ens.weights)))
        rows.append((lm, coh, bsv))
    path = out_dir / "fig3c.csv"
    order = config.harmonic_order
    write_csv(path,
              ["medium_length_cm", f"n{order}_coherent", f"n{order}_bsv"],
              ["cm", "arb", "arb"], rows)
    arr = np.array(rows)
    idx2 = int(np.argmin(np.abs(arr[:, 0] - 2.0 * la)))
    meta = {"absorption_length_cm": la, "mean_intensity_wcm2": i_mean,
            "ratio_coh_over_bsv_at_2la":
                float(arr[idx2, 1] / arr[idx2, 2]) if arr[idx2, 2] else None,
            "marker_5_2_la_cm": 2.5 * la}
    return [path], meta


def _scn_fig4b(config, out_dir):
    """Heisenberg excess vs absorbed fraction at fixed squeezing."""
    r = config.squeezing_r
    a_grid = np.linspace(0.0, 1.0, config.loss_points)
    rows = []
    for a in a_grid:
        v1, v2 = lossy_variances(r, 1.0 - a)
        rows.append((a, v1, v2, heisenberg_excess(r, 1.0 - a),
                     1.0 if quantumness_verdict(a) else 0.0))
    path = out_dir / "fig4b.csv"
    write_csv(path,
              ["absorbed_fraction", "var_x1", "var_x2", "heisenberg_excess",
               "quantum"],
              ["dimensionless", "vacuum units", "vacuum units",
               "dimensionless", "bool"], rows)
    meta = {"squeezing_r": r, "threshold": 0.125}
    return [path], meta


def _scn_fig4c(config, out_dir):
    """Coherent/BSV propagated yield ratio vs atomic density at L_m=2L_a."""
    pulse = config.pulse()
    species = config.resolve_species()
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    i_mean = config.mean_intensity_wcm2
    ens, vals = _propagation_node_data(config, pulse, species, i_mean)
    e0 = const.field_au_from_intensity(i_mean)
    nq_coh = harmonic_photon_number(
        spectrum(sfa_dipole(pulse, e0, species,
                            excursion_cycles=config.excursion_cycles),
                 pad_factor=config.spectral_pad_factor),
        config.harmonic_order)
    y_coh = trajectory_yield(pulse, e0, species).final_yield

    densities = np.logspace(math.log10(config.density_min_cm3),
                            math.log10(config.density_max_cm3),
                            config.density_points)
    rows = []
    for rho in densities:
        medium = config.medium(atomic_density_cm3=rho,
                               medium_length_cm=2.0 /
                               (config.xuv_cross_section_cm2 * rho))
        lm = medium.medium_length_cm
        coh = _propagated_value(config, medium, nq_coh, y_coh, omega_si, lm)
        bsv = float(sum(
            w * _propagated_value(config, medium, *vals[abs(e)], omega_si, lm)
            for e, w in zip(ens.nodes, ens.weights)))
        rows.append((rho, coh / bsv if bsv else math.inf))
    path = out_dir / "fig4c.csv"
    write_csv(path, ["atomic_density_cm3", "ratio_coh_over_bsv"],
              ["1/cm^3", "dimensionless"], rows)
    meta = {"medium_length": "2 x absorption length at each density",
            "mean_intensity_wcm2": i_mean}
    return [path], meta


def _scn_fig4d(config, out_dir):
    """Post-propagation spectra: BSV at 2 L_a, coherent at 2.5 L_a."""
    pulse = config.pulse()
    species = config.resolve_species()
    medium = config.medium()
    la = medium.absorption_length_cm
    omega_si = pulse.carrier_frequency_au / const.TIME_AU
    i_mean = config.mean_intensity_wcm2

    def transfer(power_axis_q, y, lm):
        out = np.zeros_like(power_axis_q)
        for i, q in enumerate(power_axis_q):
            if q < 1.0:
                continue
            dk = medium.dispersion_mismatch_rad_cm + electron_mismatch(
                q, omega_si, medium.atomic_density_cm3, y)
            out[i] = onaxis_photon_number(
                1.0, lm, la, coherence_length(dk),
                medium.atomic_density_cm3,
                paper_literal=config.paper_literal_eq4)
        return out

    def spec_of(e_abs):
        return spectrum(sfa_dipole(pulse, e_abs, species,
                                   excursion_cycles=config.excursion_cycles),
                        pad_factor=config.spectral_pad_factor)

    e0 = const.field_au_from_intensity(i_mean)
    coh_spec = spec_of(e0)
    keep = coh_spec.harmonic_order <= 80.0
    q_axis = coh_spec.harmonic_order[keep]
    y_coh = trajectory_yield(pulse, e0, species).final_yield
    coh_power = coh_spec.power[keep] * transfer(q_axis, y_coh, 2.5 * la)

    ens, vals = _node_values(config, spec_of, i_mean)
    bsv_power = np.zeros_like(q_axis)
    y_cache = {}
    for e, w in zip(ens.nodes, ens.weights):
        key = abs(e)
        if key not in y_cache:
            y_cache[key] = trajectory_yield(pulse, key, species).final_yield
        bsv_power += w * vals[key].power[keep] * transfer(
            q_axis, y_cache[key], 2.0 * la)
    rows = list(zip(q_axis, coh_power, bsv_power))
    path = out_dir / "fig4d.csv"
    write_csv(path, ["harmonic_order", "power_coherent", "power_bsv"],
              ["dimensionless", "arb", "arb"], rows)
    meta = {"coherent_length_cm": 2.5 * la, "bsv_length_cm": 2.0 * la,
            "mean_intensity_wcm2": i_mean}
    return [path], meta


def estimate_photon_budget(n_ir_photons, spot_ref_cm2, spot_target_cm2,
                           ce_ref, ratio_coh_over_bsv):
    """Plateau-harmonic photons per pulse from the conversion-budget chain.

    Conversion efficiency scales with focal spot area:
    CE_target = CE_ref (S_target / S_ref); the squeezed-driver output is
    the coherent-equivalent CE_target N_IR reduced by the propagated
    coherent/BSV yield ratio.
    """
    for name, v in (("photon number", n_ir_photons),
                    ("reference spot", spot_ref_cm2),
                    ("target spot", spot_target_cm2),
                    ("reference CE", ce_ref),
                    ("yield ratio", ratio_coh_over_bsv)):
        if v <= 0:
            raise ValueError(f"{name} must be > 0, got {v}")
    ce_target = ce_ref * (spot_target_cm2 / spot_ref_cm2)
    photons = ce_target * n_ir_photons / ratio_coh_over_bsv
    return ce_target, photons


def _scn_budget(config, out_dir):
    """Photon-budget chain: conversion efficiency and photons per pulse."""
    ce_target, photons = estimate_photon_budget(
        config.n_ir_photons, config.spot_ref_cm2, config.spot_target_cm2,
        config.ce_ref, config.ratio_coh_over_bsv)
    lmax = max_quantum_length(config.n_ir_photons,
                              config.resolve_species().mpi_order,
                              config.atomic_density_cm3,
                              config.spot_area_cm2)
    n_abs = absorbed_photons(config.atomic_density_cm3, config.spot_area_cm2,
                             lmax, config.resolve_species().mpi_order)
    rows = [(config.ce_ref, ce_target, config.n_ir_photons,
             config.ratio_coh_over_bsv, photons, lmax,
             n_abs / config.n_ir_photons)]
    path = out_dir / "budget.csv"
    write_csv(path,
              ["ce_ref", "ce_target", "n_ir_photons", "ratio_coh_over_bsv",
               "photons_per_pulse", "max_quantum_length_cm",
               "absorbed_fraction_at_lmax"],
              ["dimensionless", "dimensionless", "photons", "dimensionless",
               "photons", "cm", "dimensionless"], rows)
    meta = {"ce_target": ce_target, "photons_per_pulse": photons,
            "max_quantum_length_cm": lmax,
            "note": "ratio_coh_over_bsv is a configured input"}
    return [path], meta


_SCENARIOS = {
    "fig2b": _scn_fig2b, "fig2c": _scn_fig2c, "fig2d": _scn_fig2d,
    "fig3a": _scn_fig3a, "fig3b": _scn_fig3b, "fig3c": _scn_fig3c,
    "fig4b": _scn_fig4b, "fig4c": _scn_fig4c, "fig4d": _scn_fig4d,
    "budget": _scn_budget,
}


def run_scenario(scenario_id: str, config: ScenarioConfig) -> ResultBundle:
    """Run one scenario, writing CSVs, meta.json and manifest.json."""
    if scenario_id not in _SCENARIOS:
        raise ConfigError(
            f"unknown scenario '{scenario_id}'; valid: {', '.join(SCENARIO_IDS)}")
    findings = validate_config(config)
    errors = [f for f in findings if f.severity == "error"]
    if errors:
        msg = "; ".join(f"{f.fieldname}: {f.message}" for f in errors)
        raise ConfigError(f"invalid config: {msg}")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    csv_paths, meta = _SCENARIOS[scenario_id](config, out_dir)
    runtime = time.monotonic() - started

    meta_full = {
        "scenario": scenario_id,
        "config": config.canonical_dict(),
        "warnings": [f"{f.fieldname}: {f.message}"
                     for f in findings if f.severity == "warning"],
        **meta,
    }
    meta_path = out_dir / f"{scenario_id}.meta.json"
    meta_path.write_text(json.dumps(meta_full, indent=2, sort_keys=True,
                                    default=float) + "\n", encoding="utf-8")

    # One manifest per bundle directory. Entries for files from earlier
    # runs are kept (they still describe what is on disk); each scenario
    # records the hash of the config that produced it.
    manifest_path = out_dir / "manifest.json"
    manifest = {
        "config_hash": config.config_hash(),
        "code_version": __version__,
        "scenarios": {},
        "files": {},
    }
    if manifest_path.exists():
        try:
            existing = json.loads(manifest_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            existing = None
        if existing:
            manifest["scenarios"] = existing.get("scenarios", {})
            manifest["files"] = existing.get("files", {})
    manifest["scenarios"][scenario_id] = {
        "runtime_seconds": runtime,
        "config_hash": config.config_hash(),
    }
    for p in csv_paths:
        header, units_row = p.read_text(encoding="utf-8").splitlines()[:2]
        manifest["files"][p.name] = {
            "sha256": _sha256(p),
            "columns": header.split(","),
            "units": units_row.removeprefix("# units: ").split(","),
            "rows": sum(1 for _ in p.open()) - 2,
        }
    manifest["files"][meta_path.name] = {"sha256": _sha256(meta_path)}
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True)
                             + "\n", encoding="utf-8")
    return ResultBundle(scenario_id=scenario_id, out_dir=out_dir,
                        csv_paths=csv_paths, meta=meta_full,
                        manifest_path=manifest_path)
