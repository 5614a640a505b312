//! Ontological-model toolkit for finite-dimensional quantum systems.
//!
//! * [`qstate`]: pure states, density operators, Bloch geometry, Schmidt
//!   decomposition and partial trace.
//! * [`ensembles`]: pure-state decompositions of density operators.
//! * [`onticmodel`]: discretized ontological models of a qubit, supports,
//!   overlaps and degree of epistemicity.
//! * [`pncheck`]: exact preparation-noncontextuality feasibility engine.
//! * [`steering`]: remote state preparation on a shared pure state and
//!   nonlocality witnesses built from it.

pub mod ensembles;
pub mod error;
pub mod exact;
pub mod onticmodel;
pub mod pncheck;
pub mod qstate;
pub mod scalar;
pub mod steering;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar used by certificates.
pub type Rational = num_rational::BigRational;

/// Feasibility report decided in exact rational arithmetic.
pub type ExactReport = pncheck::FeasibilityReport<Rational>;

/// Feasibility report decided in tolerant `f64` arithmetic.
pub type FloatReport = pncheck::FeasibilityReport<f64>;

/// Instance over exact rational weights.
pub type ExactInstance = pncheck::PncInstance<Rational>;

/// Instance over `f64` weights.
pub type FloatInstance = pncheck::PncInstance<f64>;
