use serde::ser::SerializeStruct;
use serde::Serialize;

use super::scalar::{max_abs, MomentScalar};
use super::sequence::MomentSequence;
use crate::error::{Error, Result};
use crate::exact_poly::{big, frac, odd_double_factorial};
use crate::wfamily::w_poly;

/// Outcome of one moment inequality.
///
/// `slack` is oriented so that the inequality holds iff `slack ≥ 0`
/// (exactly for rationals, up to the relative float tolerance otherwise).
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityVerdict<S> {
    pub name: String,
    /// Human-readable form, e.g. `m4/3 - m2^2 >= m3^2/(2 m2)`.
    pub statement: String,
    pub lhs: S,
    pub rhs: S,
    pub slack: S,
    pub holds: bool,
}

impl<S: MomentScalar> InequalityVerdict<S> {
    /// Verdict for `big ≥ small`.
    fn at_least(name: &str, statement: &str, big: S, small: S) -> Self {
        let slack = big.clone() - small.clone();
        let holds = S::nonneg_within(&slack, &max_abs(&big, &small));
        Self {
            name: name.to_string(),
            statement: statement.to_string(),
            lhs: big,
            rhs: small,
            slack,
            holds,
        }
    }

    /// Verdict for `small ≤ big`, keeping `lhs` on the left as written.
    fn at_most(name: &str, statement: &str, small: S, big: S) -> Self {
        let mut v = Self::at_least(name, statement, big, small);
        std::mem::swap(&mut v.lhs, &mut v.rhs);
        v
    }

    /// Exact equality (zero slack); in float mode equality within tolerance.
    pub fn is_tight(&self) -> bool {
        S::zero_within(&self.slack, &max_abs(&self.lhs, &self.rhs))
    }
}

impl<S: MomentScalar> Serialize for InequalityVerdict<S> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let mut st = s.serialize_struct("InequalityVerdict", 6)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("statement", &self.statement)?;
        st.serialize_field("lhs", &self.lhs.value())?;
        st.serialize_field("rhs", &self.rhs.value())?;
        st.serialize_field("slack", &self.slack.value())?;
        st.serialize_field("holds", &self.holds)?;
        st.end()
    }
}

fn ratio<S: MomentScalar>(n: i64, d: i64) -> S {
    S::from_rational(&frac(n, d))
}

/// `m4/3 - m2² ≥ m3² / (2 m2)`; equality for Gaussian and centered-gamma laws.
pub fn check_fourth_moment_ineq<S: MomentScalar>(
    ms: &MomentSequence<S>,
) -> Result<InequalityVerdict<S>> {
    let m4 = ms.require(4, "fourth-moment inequality")?.clone();
    let m2 = ms[2].clone();
    let m3 = ms[3].clone();
    if !(m2 > S::zero()) {
        return Err(Error::domain(format!("fourth-moment inequality needs m2 > 0, got {m2:?}")));
    }
    let lhs = m4 * ratio(1, 3) - m2.clone() * m2.clone();
    let rhs = m3.clone() * m3 / (S::from_i64(2) * m2);
    Ok(InequalityVerdict::at_least(
        "fourth_moment",
        "m4/3 - m2^2 >= m3^2/(2 m2)",
        lhs,
        rhs,
    ))
}

/// `m4² ≤ (3/5) m6 m2`; equality for the Gaussian.
pub fn check_sixth_moment_ineq<S: MomentScalar>(
    ms: &MomentSequence<S>,
) -> Result<InequalityVerdict<S>> {
    let m6 = ms.require(6, "sixth-moment inequality")?.clone();
    let m4 = ms[4].clone();
    let m2 = ms[2].clone();
    let lhs = m4.clone() * m4;
    let rhs = ratio::<S>(3, 5) * m6 * m2;
    Ok(InequalityVerdict::at_most(
        "sixth_moment",
        "m4^2 <= (3/5) m6 m2",
        lhs,
        rhs,
    ))
}

/// `m_{2k} ≥ (2k-1)!! m2^k`
pub fn check_even_bound<S: MomentScalar>(
    ms: &MomentSequence<S>,
    k: usize,
) -> Result<InequalityVerdict<S>> {
    if k < 1 {
        return Err(Error::domain("even-moment bound needs k ≥ 1"));
    }
    let m2k = ms.require(2 * k, &format!("even bound k={k}"))?.clone();
    let m2 = ms[2].clone();
    let power = (0..k).fold(S::one(), |acc, _| acc * m2.clone());
    let rhs = S::from_rational(&big(odd_double_factorial(k as u64))) * power;
    Ok(InequalityVerdict::at_least(
        &format!("even_bound_{k}"),
        &format!("m{} >= {}!! m2^{k}", 2 * k, 2 * k - 1),
        m2k,
        rhs,
    ))
}

/// `κ6 = m6 - 15 m2 m4 - 10 m3² + 30 m2³` for a centered sequence.
pub fn kappa6<S: MomentScalar>(ms: &MomentSequence<S>) -> Result<S> {
    let m6 = ms.require(6, "kappa6")?.clone();
    let (m1, m2, m3, m4) = (ms[1].clone(), ms[2].clone(), ms[3].clone(), ms[4].clone());
    let scale = if m2 > S::zero() { m2.clone() } else { S::one() };
    if !S::zero_within(&(m1.clone() * m1.clone()), &scale) {
        return Err(Error::domain(format!("kappa6 formula needs a centered sequence, m1 = {m1:?}")));
    }
    Ok(m6 - S::from_i64(15) * m2.clone() * m4 - S::from_i64(10) * m3.clone() * m3
        + S::from_i64(30) * m2.clone() * m2.clone() * m2)
}

/// `E[W_k(X)]`, pairing the coefficients of `W_k` with the moments.
pub fn expected_w<S: MomentScalar>(k: usize, ms: &MomentSequence<S>) -> Result<S> {
    let w = w_poly(k)?;
    ms.require(2 * k, &format!("E[W_{k}]"))?;
    Ok(w
        .coeffs()
        .iter()
        .zip(ms.as_slice())
        .fold(S::zero(), |acc, (c, m)| acc + S::from_rational(c) * m.clone()))
}
