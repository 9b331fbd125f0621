//! Moment matrices, their positivity certificates, and the moment
//! inequalities they imply for eigenfunctions of a diffusive generator.
//!
//! Everything is generic over [`MomentScalar`]: `Rational` gives exact,
//! zero-tolerance verdicts; `f64` (empirical moments) uses a relative
//! tolerance of [`FLOAT_REL_TOL`]. The mode is carried by the type, never
//! inferred from the values.

mod certificate;
mod inequalities;
mod matrix;
mod scalar;
mod sequence;

pub use certificate::{certify, Certificate};
pub use inequalities::{
    check_even_bound, check_fourth_moment_ineq, check_sixth_moment_ineq, expected_w, kappa6,
    InequalityVerdict,
};
pub use matrix::{build_moment_matrix, matrix_weight, EigenDiagnostic, MomentMatrix};
pub use scalar::{MomentScalar, ScalarValue, FLOAT_REL_TOL};
pub use sequence::{
    parse_moments_csv, parse_moments_json, read_moments_file, ExactMoments, FloatMoments,
    MomentSequence,
};
