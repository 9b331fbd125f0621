use serde::ser::SerializeStruct;
use serde::Serialize;

use super::inequalities::{
    check_even_bound, check_fourth_moment_ineq, check_sixth_moment_ineq, expected_w, kappa6,
    InequalityVerdict,
};
use super::matrix::{build_moment_matrix, EigenDiagnostic, MomentMatrix};
use super::scalar::MomentScalar;
use super::sequence::MomentSequence;
use crate::error::Result;
use crate::wfamily::w_poly;

/// Everything that can be said about a moment sequence at matrix order `k`.
///
/// Inequalities whose moments are missing are omitted rather than failed.
#[derive(Clone, Debug)]
pub struct Certificate<S> {
    pub matrix: MomentMatrix<S>,
    pub leading_minors: Vec<S>,
    pub minors_nonnegative: bool,
    pub eigen: EigenDiagnostic,
    pub inequalities: Vec<InequalityVerdict<S>>,
    /// `(j, E[W_j(X)])` for `2 ≤ j ≤ k`.
    pub expected_w: Vec<(usize, S)>,
    pub expected_w_nonnegative: bool,
    /// `None` when the sequence is not centered or stops before `m6`.
    pub kappa6: Option<S>,
}

impl<S: MomentScalar> Certificate<S> {
    /// True when no check failed. `κ6` is informational and never counted.
    pub fn all_hold(&self) -> bool {
        self.minors_nonnegative
            && self.expected_w_nonnegative
            && self.inequalities.iter().all(|v| v.holds)
    }
}

pub fn certify<S: MomentScalar>(ms: &MomentSequence<S>, k: usize) -> Result<Certificate<S>> {
    let matrix = build_moment_matrix(k, ms)?;
    let leading_minors = matrix.leading_minors();
    let entry_scale = matrix
        .rows()
        .iter()
        .flatten()
        .fold(S::zero(), |acc, v| if v.abs() > acc { v.abs() } else { acc });
    // an l×l minor is a sum of l-fold products of entries
    let mut minor_scale = S::one();
    let minors_nonnegative = leading_minors.iter().all(|m| {
        minor_scale = minor_scale.clone() * entry_scale.clone();
        S::nonneg_within(m, &minor_scale)
    });
    let eigen = matrix.eigen_diagnostic();

    let mut inequalities = Vec::new();
    let has = |order: usize| ms.max_order() >= order;
    if has(4) && ms[2] > S::zero() {
        inequalities.push(check_fourth_moment_ineq(ms)?);
    }
    if has(6) {
        inequalities.push(check_sixth_moment_ineq(ms)?);
    }
    for j in 2..=ms.max_matrix_order() {
        inequalities.push(check_even_bound(ms, j)?);
    }

    let expected_w = (2..=k)
        .map(|j| expected_w(j, ms).map(|v| (j, v)))
        .collect::<Result<Vec<_>>>()?;
    let expected_w_nonnegative = expected_w
        .iter()
        .all(|(j, v)| S::nonneg_within(v, &w_scale(*j, ms)));
    let kappa6 = if has(6) { kappa6(ms).ok() } else { None };

    Ok(Certificate {
        matrix,
        leading_minors,
        minors_nonnegative,
        eigen,
        inequalities,
        expected_w,
        expected_w_nonnegative,
        kappa6,
    })
}

/// `Σ |c_i m_i|` over the coefficients of `W_j`: the size of the
/// cancellation in `E[W_j(X)]`.
fn w_scale<S: MomentScalar>(j: usize, ms: &MomentSequence<S>) -> S {
    let w = w_poly(j).expect("j ≥ 2");
    w.coeffs()
        .iter()
        .zip(ms.as_slice())
        .fold(S::zero(), |acc, (c, m)| acc + (S::from_rational(c) * m.clone()).abs())
}

impl<S: MomentScalar> Serialize for Certificate<S> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        #[derive(Serialize)]
        struct WEntry {
            k: usize,
            value: super::ScalarValue,
        }
        let mut st = s.serialize_struct("Certificate", 10)?;
        st.serialize_field("order", &self.matrix.order())?;
        st.serialize_field("exact", &S::EXACT)?;
        st.serialize_field("matrix", &self.matrix.to_values())?;
        let minors: Vec<_> = self.leading_minors.iter().map(MomentScalar::value).collect();
        st.serialize_field("leading_minors", &minors)?;
        st.serialize_field("minors_nonnegative", &self.minors_nonnegative)?;
        st.serialize_field("eigen", &self.eigen)?;
        st.serialize_field("inequalities", &self.inequalities)?;
        let ew: Vec<_> = self
            .expected_w
            .iter()
            .map(|(k, v)| WEntry { k: *k, value: v.value() })
            .collect();
        st.serialize_field("expected_w", &ew)?;
        st.serialize_field("kappa6", &self.kappa6.as_ref().map(MomentScalar::value))?;
        st.serialize_field("all_hold", &self.all_hold())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::{frac, int};
    use crate::moment_forms::ExactMoments;

    #[test]
    fn gaussian_order_three() {
        let ms = ExactMoments::new(
            [1, 0, 1, 0, 3, 0, 15].iter().map(|&v| int(v)).collect(),
        )
        .unwrap();
        let c = certify(&ms, 3).unwrap();
        assert!(c.all_hold());
        assert!(c.minors_nonnegative);
        let sixth = c.inequalities.iter().find(|v| v.name == "sixth_moment").unwrap();
        assert!(sixth.is_tight());
        assert_eq!(c.kappa6, Some(int(0)));
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["all_hold"], true);
        assert_eq!(json["matrix"][3][3]["exact"], "18");
    }

    #[test]
    fn jacobi_fails_even_bound() {
        let ms = ExactMoments::new(vec![int(1), int(0), frac(4, 45), frac(16, 945), frac(16, 945)])
            .unwrap();
        let c = certify(&ms, 2).unwrap();
        assert!(!c.all_hold());
        let even = c.inequalities.iter().find(|v| v.name == "even_bound_2").unwrap();
        assert!(!even.holds);
    }
}
