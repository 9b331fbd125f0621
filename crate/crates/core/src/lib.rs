//! Exact Hermite and W-family algebra, moment-matrix positivity certificates,
//! and a seeded Wiener-chaos simulator with exact moment oracles.
//!
//! The crate checks even-moment central-limit criteria for elements of a
//! fixed Wiener chaos: convergence of `E[X^{2k}]` to `(2k-1)!!` (with unit
//! variance) forces convergence in law to `N(0,1)`. Every symbolic quantity
//! is computed in exact rational arithmetic; Monte Carlo is used only where
//! no exact oracle exists.
//!
//! Modules, bottom-up:
//!
//! - [`exact_poly`]: rationals and dense polynomials.
//! - [`hermite`]: Hermite polynomials and Gaussian product integrals.
//! - [`wfamily`]: `W_k`, `T_k`, `Q_k`, `T_{k,l}`, expansion coefficients, `C_k`.
//! - [`moment_forms`]: moment matrices, minors, moment inequalities, `κ_6`.
//! - [`chaos_sim`]: chaos elements, exact moment oracles, sampling, `d_TV`.
//! - [`verify`]: the end-to-end verification suite.
//! - [`cli`]: the `chaos-lab` command line.

pub mod chaos_sim;
pub mod cli;
pub mod error;
pub mod exact_poly;
pub mod hermite;
pub mod moment_forms;
pub mod verify;
pub mod wfamily;

pub use error::{Error, Result};
pub use exact_poly::{DensePolynomial, Rational};
