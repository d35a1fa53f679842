//! EPR correlations of two spin-½ particles computed three ways:
//!
//! * [`quantum`]: exact expectation values in the singlet (or any two-spin state);
//! * [`local`]: a local but signed distribution over hidden spin directions;
//! * [`nonlocal`]: a positive distribution over ±1 outcomes that depends on
//!   both analyzer settings.
//!
//! [`bell`] evaluates the three-setting Bell sum for any of them and
//! enumerates the deterministic local strategies that bound it.
//!
//! The library is generic over the scalar type ([`Scalar`], [`Real`]); the
//! aliases below fix it to `f64`, the precision all documented tolerances
//! refer to.

pub mod bell;
pub mod direction;
pub mod error;
pub mod local;
pub mod nonlocal;
pub mod quadrature;
pub mod quantum;
pub mod sampling;
pub mod scalar;

pub use bell::{
    bell_sum, lhv_bruteforce_max, mixture_bell_value, reduced_trine_expression, trine_config,
    Correlation, CorrelationModel, DeterministicStrategy, ExactQuantum, FixedMatrix, LhvEnumeration,
    LocalGhost, LocalGhostMonteCarlo, LocalGhostQuadrature, NonlocalEmpirical, NonlocalGhost,
};
pub use error::{GhostError, Result};
pub use local::{
    malus_correlation_closed, malus_correlation_quadrature, marginal_density, naive_field, quasi_field,
    signed_mc_correlation, signed_mc_correlation_with, single_malus_expectation, PointDensity,
};
pub use nonlocal::{
    conditional_from_state, correlation_from_matrix, empirical_correlation, generate_sequences,
    generate_sequences_with, marginal_outcome, singlet_conditional, singlet_conditional_from_cosine,
    OutcomeSequencePair,
};
pub use quadrature::build_quadrature;
pub use quantum::{
    joint_expectation, joint_outcome_table, malus_spin_projection, pauli_projection, single_expectation,
    Outcome, Particle, SpinState,
};
pub use sampling::{McPlan, RunningStats};
pub use scalar::{Real, Scalar};

/// Exact rational used for the conditional-matrix algebra.
pub type Rational = num_rational::Ratio<i64>;

pub type Direction = direction::Direction3<f64>;
pub type TwoSpinState = quantum::TwoSpinState<f64>;
pub type SpinObservable = quantum::SpinObservable<f64>;
pub type OutcomeTable = quantum::OutcomeTable<f64>;
pub type ComplexAmplitude = quantum::ComplexAmplitude<f64>;
pub type SignedSphereDistribution = local::SignedSphereDistribution<f64>;
pub type SphereQuadrature = quadrature::SphereQuadrature<f64>;
pub type MCEstimate = sampling::MCEstimate<f64>;
pub type ConditionalMatrix = nonlocal::ConditionalMatrix<f64>;
pub type BellConfig = bell::BellConfig<f64>;
pub type BellReport = bell::BellReport<f64>;
