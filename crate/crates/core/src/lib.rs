//! Convergence-rate analysis of spectral regularization methods on
//! finite discrete spectral measures.

pub mod builtin;
pub mod check;
pub mod distance;
pub mod error;
pub mod interp;
pub mod noisy;
pub mod num;
pub mod rate;
pub mod regularizers;
pub mod special;
pub mod spectral;
pub mod sup;
pub mod verify;

pub use builtin::{build, random_element, ExampleId};
pub use check::Check;
pub use distance::{
    conjugate_equivalence_check, d_e_identity, distance, ConjugateReport, DeIdentity, DistancePoint, DistanceProfile,
};
pub use error::{Error, Result};
pub use interp::{
    hilbert_norm, interp_norm, k_functional, n_theta, sandwich_report, tail_bound_check, triple_norm, variational_sup,
    SandwichReport, SupResult, TailReport, VariationalSup,
};
pub use noisy::{
    apriori_alpha, discrepancy_stop, make_noise, noisy_sweep, optimal_alpha, quasiopt_ratio, rate_exponent_fit,
    ChoiceRule, DiscrepancyStop, Fit, NoiseStrategy, NoisySweep, QuasiOptReport, SweepRow,
};
pub use rate::{
    beta_ratio, beta_ratio_limit, c1_constant, c2_constant, cutoff_rate, delta_rate, delta_values,
    landweber_fixed_k_bound, saturation_check, tikhonov_more_precise_bound, tikhonov_rate, RateReport,
    SaturationReport, C1, C2,
};
pub use regularizers::{
    default_sigma, landweber_closed, landweber_run, regularization_error, tikhonov_solve_noisy, FilterSpec,
    LandweberStep, MethodKind, NoisyData,
};
pub use special::log_gamma;
pub use spectral::{measure_from_atoms, operator_norm, DiscreteSpectralMeasure, SpectralElement, SpectralProblem};
pub use verify::{run_suite, Suite, SuiteReport};
