//! Exact wavelet-frame verification on the local field `F_q((t))`.
//!
//! Everything is a finite table: field elements are finite Laurent
//! expansions, functions are step functions on cosets of `𝔅^k`, and masks are
//! finite character sums, so every frame identity reduces to a finite sum
//! that is evaluated directly.

pub mod algebra;
pub mod error;
pub mod exec;
pub mod framekit;
pub mod harmonic;
pub mod periodic;
pub mod report;
pub mod stepfn;
pub mod suite;
pub mod system;

pub use algebra::{FieldConfig, FieldElement, GfScalar, LambdaIndex};
pub use error::{Error, Result};
pub use exec::Exec;
pub use stepfn::{PeriodicStepFunction, StepFunction};
pub use system::{Direction, Normalization, SystemConfig};

/// Default tolerances.
pub mod tol {
    /// Identities that involve no transform: norms, translations, partitions.
    pub const STRUCTURAL: f64 = 1e-12;
    /// Identities computed through transforms or long coefficient sums.
    pub const IDENTITY: f64 = 1e-9;
    /// Verdict threshold for the mask Gram matrix.
    pub const GRAM: f64 = 1e-10;
    /// Values at or below this count as outside a support.
    pub const SUPPORT: f64 = 1e-12;
}
