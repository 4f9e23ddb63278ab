//! Exact representation data for the unitary Virasoro minimal models, finite
//! fusion rings, and the fusion rules of commutant subalgebras obtained by
//! factorizing a branching decomposition.
//!
//! The crate is organized bottom-up:
//!
//! - [`kac`]: central charges, conformal weights and the Kac table.
//! - [`fusion`]: fusion rings, the admissible-triple criterion and ring-axiom checks.
//! - [`modular`]: S-matrices, quantum dimensions and the Verlinde oracle.
//! - [`commutant`]: branching tables and the product rule for commutant fusion.
//! - [`qseries`]: exact truncated q-series, eta and E8 theta series.
//! - [`characters`]: minimal-model characters and character-identity checks.
//! - [`threec`]: the bundled 3C-algebra dataset and the derived 15-module ring.

pub mod characters;
pub mod commutant;
pub mod error;
pub mod fusion;
pub mod kac;
pub mod modular;
pub mod qseries;
pub mod ratio;
pub mod threec;

pub use error::{Error, Result};
pub use fusion::{AxiomReport, FusionRing};
pub use kac::{MinimalModel, PrimaryField};
pub use modular::ModularData;
pub use num_rational::BigRational;
pub use qseries::FormalQSeries;
