"""Bright-squeezed-vacuum and coherent-pulse HHG simulation toolkit."""

__version__ = "0.1.0"

from .quantum_field import (DriverPulse, FieldStateDistribution,
                            QuadratureEnsemble, build_ensemble,
                            husimi_marginal, intensity_from_squeezing,
                            sample_field, squeezing_from_intensity)
from .ionization import (ARGON, AtomSpecies, adk_rate, ensemble_yield,
                         mpi_enhancement, mpi_rate, trajectory_yield)
from .hhg import (DipoleTrace, HarmonicSpectrum, depletion_factor,
                  detect_cutoff, ensemble_spectrum, harmonic_photon_number,
                  modified_field, semiclassical_cutoff_order, sfa_dipole,
                  spectrum)
from .propagation import (MediumConfig, PhaseMatchState, absorption_length,
                          coherence_length, electron_mismatch,
                          ensemble_propagated, medium_length_scan,
                          onaxis_photon_number, phase_match_state)
from .decoherence import (LossChannel, absorbed_photons,
                          autocorrelator_scaling, heisenberg_excess,
                          lossy_variances, max_quantum_length,
                          quantumness_verdict, wigner_lossy_bsv)
from .scenarios import (ScenarioConfig, estimate_photon_budget, run_scenario,
                        validate_config)
