//! Classical/nonclassical decomposition of quantum observables and numerically verified
//! exact uncertainty relations.
//!
//! States live on uniform cell-centered grids ([`grid_state`]). An observable's
//! classical component is its best estimate given a measurement of the conjugate
//! observable ([`decomp`]); the Fisher length of the conjugate distribution
//! ([`fisher_stats`]) times the spread of the nonclassical remainder is exactly `ħ/2`
//! for pure states. [`relations`] turns these and related statements into
//! [`relations::RelationCheck`] records, [`wigner`] covers the phase-space route and
//! [`finite_dim`] the finite-dimensional forms. [`cli_report`] runs named scenarios
//! and writes reports.
//!
//! ```
//! use exact_uncertainty::grid_state::{build_state, Grid1D, StateSpec};
//! use exact_uncertainty::numerics::Numerics;
//! use exact_uncertainty::relations::exact_ur_position;
//!
//! let grid = Grid1D::covering(-12.0, 12.0, 1024)?;
//! let spec = StateSpec::Gaussian { mean: 0.5, sigma: 1.2, momentum: 1.0, chirp: 0.2 };
//! let state = build_state(&spec, &grid, 1.0)?;
//! let r = exact_ur_position(&state, &Numerics::default());
//! assert!(r.exact.passed());
//! # Ok::<(), exact_uncertainty::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli_report;
pub mod decomp;
pub mod error;
pub mod finite_dim;
pub mod fisher_stats;
pub mod grid_state;
pub mod numerics;
pub mod random;
pub mod relations;
pub mod wigner;

pub use error::{Error, Result};
