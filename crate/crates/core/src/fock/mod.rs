//! Fock-state amplitudes and concurrences.

mod amplitude;
mod concurrence;
mod states;
mod thermal;

pub use amplitude::{output_probability_total, transition_amplitude};
pub use concurrence::{
    coherence_rank, concurrence_sum, concurrence_sum_by_definition, concurrence_summary,
    elementary_symmetric, elementary_symmetric_all, k_concurrence, k_concurrences, majorizes,
    ConcurrenceSummary,
};
pub use states::{
    concurrence_mixed, Measure, MixedStateDecomposition, PureState, NORMALIZATION_TOL,
};
pub use thermal::{
    minimal_cutoff, thermal_concurrence, ThermalReport, ThermalSpec, DEFAULT_RESIDUAL_TOL,
    MAX_THERMAL_VECTORS,
};
