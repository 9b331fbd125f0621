use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::scalar::{MomentScalar, ScalarValue, FLOAT_REL_TOL};
use super::sequence::MomentSequence;
use crate::error::Result;
use crate::exact_poly::{frac, int, Rational};

/// `k - ij/(i+j-1)`, with the ratio taken as zero for `(i,j) ∈ {(0,1),(1,0)}`.
pub fn matrix_weight(k: usize, i: usize, j: usize) -> Rational {
    if i + j == 1 {
        return int(k as i64);
    }
    // i + j = 0 gives 0/(-1) = 0 as well
    int(k as i64) - frac((i * j) as i64, (i + j) as i64 - 1)
}

/// The `(k+1)×(k+1)` matrix `((k - ij/(i+j-1)) m_{i+j})_{0 ≤ i,j ≤ k}`.
///
/// For an eigenfunction `X` with `-LX = pX` the quadratic form
/// `E[Q(X) (L + kp) P(X)]` on polynomials of degree `≤ k` has matrix
/// `p · M_k` in the monomial basis, so `M_k` is positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix<S> {
    order: usize,
    entries: Vec<Vec<S>>,
}

pub fn build_moment_matrix<S: MomentScalar>(
    k: usize,
    ms: &MomentSequence<S>,
) -> Result<MomentMatrix<S>> {
    ms.require(2 * k, &format!("M_{k}"))?;
    let m = ms.as_slice();
    let entries = (0..=k)
        .map(|i| {
            (0..=k)
                .map(|j| S::from_rational(&matrix_weight(k, i, j)) * m[i + j].clone())
                .collect()
        })
        .collect();
    Ok(MomentMatrix { order: k, entries })
}

impl<S: MomentScalar> MomentMatrix<S> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.order + 1
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.entries
    }

    pub fn determinant(&self) -> S {
        bareiss_determinant(self.entries.clone())
    }

    /// Determinants of the top-left `l×l` blocks, `l = 1..=k+1`.
    pub fn leading_minors(&self) -> Vec<S> {
        (1..=self.dim())
            .map(|l| {
                let block = self.entries[..l].iter().map(|row| row[..l].to_vec()).collect();
                bareiss_determinant(block)
            })
            .collect()
    }

    /// Floating symmetric eigen-decomposition. Non-negative leading minors do
    /// not certify PSD when the matrix is singular, so this is reported
    /// alongside them.
    pub fn eigen_diagnostic(&self) -> EigenDiagnostic {
        let n = self.dim();
        let m = DMatrix::from_fn(n, n, |i, j| self.entries[i][j].to_f64());
        let norm = m.norm();
        let mut eigenvalues: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        let min_eigenvalue = eigenvalues[0];
        let tolerance = FLOAT_REL_TOL * norm;
        EigenDiagnostic {
            psd: min_eigenvalue >= -tolerance,
            eigenvalues,
            min_eigenvalue,
            tolerance,
        }
    }

    pub fn to_values(&self) -> Vec<Vec<ScalarValue>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(MomentScalar::value).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenDiagnostic {
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// `1e-9 · ‖M‖_F`
    pub tolerance: f64,
    pub psd: bool,
}

/// Fraction-free (Bareiss) elimination with row pivoting on the largest
/// magnitude. Every division is exact for integer input.
fn bareiss_determinant<S: MomentScalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    if n == 0 {
        return S::one();
    }
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n - 1 {
        let pivot_row = (k..n)
            .max_by(|&r, &s| {
                a[r][k]
                    .abs()
                    .partial_cmp(&a[s][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    // prefer the earliest row on ties
                    .then(s.cmp(&r))
            })
            .expect("non-empty range");
        if a[pivot_row][k].abs() == S::zero() {
            return S::zero();
        }
        if pivot_row != k {
            a.swap(pivot_row, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone())
                    / prev.clone();
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::int;
    use crate::moment_forms::ExactMoments;

    fn seq(values: &[Rational]) -> ExactMoments {
        ExactMoments::new(values.to_vec()).unwrap()
    }

    #[test]
    fn weights_follow_convention() {
        assert_eq!(matrix_weight(2, 0, 0), int(2));
        assert_eq!(matrix_weight(2, 0, 1), int(2));
        assert_eq!(matrix_weight(2, 1, 1), int(1));
        assert_eq!(matrix_weight(2, 2, 2), frac(2, 3));
        assert_eq!(matrix_weight(3, 3, 3), frac(6, 5));
        assert_eq!(matrix_weight(3, 2, 2), frac(5, 3));
    }

    #[test]
    fn gaussian_m2_is_singular() {
        let ms = seq(&[int(1), int(0), int(1), int(0), int(3), int(0), int(15)]);
        let m = build_moment_matrix(2, &ms).unwrap();
        assert_eq!(m.determinant(), int(0));
    }

    #[test]
    fn centered_gamma_minors() {
        // ξ² - 1
        let ms = seq(&[int(1), int(0), int(2), int(8), int(60)]);
        let m = build_moment_matrix(2, &ms).unwrap();
        assert_eq!(m.leading_minors(), vec![int(2), int(4), int(0)]);
    }

    #[test]
    fn insufficient_moments() {
        let ms = seq(&[int(1), int(0), int(1)]);
        assert!(build_moment_matrix(2, &ms).is_err());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = vec![
            vec![frac(2, 3), int(1), int(-4)],
            vec![int(0), int(0), frac(1, 2)],
            vec![int(5), int(-2), int(7)],
        ];
        // cofactor along the second row: -(1/2) * (2/3·(-2) - 1·5)
        let expected = -(frac(1, 2)) * (frac(2, 3) * int(-2) - int(5));
        assert_eq!(bareiss_determinant(a), expected);
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(bareiss_determinant(singular), int(0));
        let zero_col = vec![vec![int(0), int(2)], vec![int(0), int(4)]];
        assert_eq!(bareiss_determinant(zero_col), int(0));
    }

    #[test]
    fn float_mode_agrees() {
        let ms = seq(&[int(1), int(0), int(2), int(8), int(60)]);
        let m = build_moment_matrix(2, &ms.to_float()).unwrap();
        let minors = m.leading_minors();
        assert!((minors[0] - 2.0).abs() < 1e-12);
        assert!((minors[1] - 4.0).abs() < 1e-12);
        assert!(minors[2].abs() < 1e-9);
        assert!(m.eigen_diagnostic().psd);
    }
}
