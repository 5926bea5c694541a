"""Casimir-style interaction thermodynamics of mediated oscillator pairs.

Two harmonic oscillators couple indirectly through one or many mediator
modes, either by coordinates (tm kinds) or by momenta (te kinds).  The
package computes the induced interaction free energy, internal energy
and entropy from a Matsubara sum, checks them against exact mode-sum
oracles, and covers the analogous retarded dipole pair.
"""

from .config import ConfigError, RunConfig, emit_config, parse_config
from .dipole import (DipolePair, KernelValues, correspondence_check,
                     dyadic_decomposition_check, kernels, pair_free_energy)
from .models import (InteractionQuantities, OscillatorModel, StabilityError,
                     d_factors, describe, log_interaction_terms,
                     q_determinant_direct, ResponseFactor, response_factor,
                     scattering_form_factor, te3, te_bath, tm3, tm_bath,
                     uniform_bath, validate_stability)
from .spectrum import (ModeSpectrum, exact_free_energy, mode_spectrum,
                       oracle_coupling_free_energy, oracle_entropy,
                       oracle_interaction_free_energy, oracle_internal_energy)
from .thermo import (ConvergenceError, MatsubaraGrid, NegativeEntropyInterval,
                     ThermoCurve, ThermoPoint, entropy, interaction_free_energy,
                     internal_energy, negative_entropy_intervals, sweep)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvergenceError", "DipolePair", "InteractionQuantities",
    "KernelValues", "MatsubaraGrid", "ModeSpectrum", "NegativeEntropyInterval",
    "OscillatorModel", "RunConfig", "StabilityError", "ThermoCurve", "ThermoPoint",
    "correspondence_check", "d_factors", "describe", "dyadic_decomposition_check",
    "emit_config", "entropy", "exact_free_energy", "interaction_free_energy",
    "internal_energy", "kernels", "log_interaction_terms", "mode_spectrum",
    "negative_entropy_intervals", "oracle_coupling_free_energy", "oracle_entropy",
    "oracle_interaction_free_energy", "oracle_internal_energy", "pair_free_energy",
    "parse_config", "q_determinant_direct", "ResponseFactor", "response_factor",
    "scattering_form_factor", "sweep", "te3", "te_bath", "tm3", "tm_bath",
    "uniform_bath", "validate_stability",
]
