//! Multipartite correlation measures on finite-dimensional density matrices.
//!
//! The crate computes the dual total correlation
//! `I_n(ρ) = Σ_k S(ρ_k̄) − (n−1) S(ρ)` together with several ways of writing it
//! (or failing to write it) as a quantum relative entropy:
//!
//! * [`correlations::dtc_relent_sum`] and [`correlations::dtc_relent_tensor`]
//!   are subsystem-matched relative-entropy forms that agree with `I_n`.
//! * [`correlations::j_n`] and [`correlations::jtilde_n`] compare `ρ^{⊗(n−1)}`
//!   against a product of marginals. They do not agree with `I_n` for `n ≥ 3`.
//!
//! Modules:
//!
//! * [`states`]: density-matrix algebra (tensor, partial trace, permutation,
//!   local channels, random ensembles, the JSON state file format).
//! * [`entropy`]: spectra, supports, von Neumann and relative entropy.
//! * [`correlations`]: the correlation quantities and the gap report.
//! * [`lab`]: demos, seeded sweeps and JSON-lines reports used by the CLI.
//!
//! ```
//! use multicorr::correlations::{dual_total_correlation, dtc_relent_sum, j_n};
//! use multicorr::states::ghz;
//! use multicorr::Settings;
//!
//! let settings = Settings::default();
//! let rho = ghz(3, 2)?;
//! let dtc = dual_total_correlation(&rho, &settings)?.value;
//! assert!((dtc - 3.0).abs() < 1e-9);
//! assert!((dtc_relent_sum(&rho, &settings)?.finite().unwrap() - dtc).abs() < 1e-9);
//! assert!(j_n(&rho, &settings)?.is_infinite());
//! # Ok::<(), multicorr::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod correlations;
pub mod entropy;
mod error;
pub mod lab;
pub(crate) mod linalg;
mod settings;
pub mod states;

pub use error::{Error, Result};
pub use settings::{LogBase, Settings};

/// Complex scalar used throughout.
pub use faer::c64;

/// Dense square complex matrix.
pub type ComplexMatrix = faer::Mat<c64>;
