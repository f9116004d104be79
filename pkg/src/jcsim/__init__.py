"""Exact simulation and analytics for a two-level atom resonantly coupled to
a single bosonic mode: dephasing of atomic coherence by photon-number spread,
decoherence-time scaling, Ramsey interrogation, and stationary statistics."""

__version__ = "0.1.0"

from .analytics import (LongTimeStats, McStats, decoherence_time,
                        decoherence_time_gt, longtime_stats,
                        phase_state_coherence, phase_state_coherence_gt,
                        random_phase_mc, thermal_coherence_series,
                        thermal_series_gt, time_average_stats,
                        time_average_stats_gt)
from .initial_states import (CoherentSpec, PhaseStateSpec, ThermalSpec,
                             build_coherent, build_phase_state, build_thermal,
                             coherent_field_amps, coherent_truncation,
                             thermal_q, thermal_truncation, thermal_weights)
from .propagation import (FrameConvention, coherence_series_gt,
                          coherence_trace, evolve_exact, evolve_exact_gt,
                          evolve_oracle)
from .ramsey import (CrossingQuery, NoCrossingError, RamseyScan,
                     contrast_sweep_gt, contrast_vs_alpha, find_crossing,
                     find_crossing_gt, ramsey_fringe, scan_at_crossing)
from .states import (AtomDensityMatrix, AtomState, JointPureState,
                     ModelParams, WeightedEnsemble, marginal_purity,
                     reduce_atom, reduce_atom_ensemble, support_dimension)

__all__ = [
    "__version__",
    "AtomDensityMatrix", "AtomState", "JointPureState", "ModelParams",
    "WeightedEnsemble", "marginal_purity", "reduce_atom",
    "reduce_atom_ensemble", "support_dimension",
    "FrameConvention", "coherence_series_gt", "coherence_trace",
    "evolve_exact", "evolve_exact_gt", "evolve_oracle",
    "CoherentSpec", "PhaseStateSpec", "ThermalSpec", "build_coherent",
    "build_phase_state", "build_thermal", "coherent_field_amps",
    "coherent_truncation", "thermal_q", "thermal_truncation",
    "thermal_weights",
    "LongTimeStats", "McStats", "decoherence_time", "decoherence_time_gt",
    "longtime_stats", "phase_state_coherence", "phase_state_coherence_gt",
    "random_phase_mc", "thermal_coherence_series", "thermal_series_gt",
    "time_average_stats", "time_average_stats_gt",
    "CrossingQuery", "NoCrossingError", "RamseyScan", "contrast_sweep_gt",
    "contrast_vs_alpha", "find_crossing", "find_crossing_gt",
    "ramsey_fringe", "scan_at_crossing",
]
