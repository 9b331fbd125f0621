//! The W-family of even polynomials and the targets expanded over it.
//!
//! For `k ≥ 2`,
//!
//! ```text
//! W_k(x) = (2k-1) ( x ∫_0^x H_k H_{k-2} dt - H_k(x) H_{k-2}(x) ),
//! ```
//!
//! an even monic polynomial of degree `2k` with `E[W_k(N)] = 0` and
//! `E[W_k(X)] ≥ 0` for every eigenfunction `X` of a diffusive Markov
//! generator. Non-negative combinations of the `W_k` give moment conditions
//! characterising convergence to `N(0,1)`. This module builds the `W_k`, the
//! targets `T_k = x^{2k} - k(2k-1)!! x^2 + (k-1)(2k-1)!!` and
//! `T_{k,l} = x^{2l} + α x^{2k} + β`, their expansions over the W-basis, the
//! closed-form expansion coefficients `α_{i,k}`, and the constants `C_k` of
//! the total-variation bound `d_TV(X, N) ≤ C_k √(E[X^{2k}]/(2k-1)!! - 1)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_poly::{
    big, binomial, factorial, format_rational, frac, int, odd_double_factorial, rational_to_f64,
    DensePolynomial, Rational,
};
use crate::hermite::hermite_table;

fn require_k(k: usize, what: &str) -> Result<()> {
    if k < 2 {
        return Err(Error::domain(format!("{what} requires k ≥ 2, got {k}")));
    }
    Ok(())
}

/// `P ↦ x ∫_0^x P(t) dt - P(x)`
pub fn integral_operator(p: &DensePolynomial) -> DensePolynomial {
    &p.integrate().shift_up() - p
}

pub fn w_poly(k: usize) -> Result<DensePolynomial> {
    require_k(k, "W_k")?;
    let table = hermite_table(k);
    Ok(w_from_table(&table, k))
}

fn w_from_table(table: &[DensePolynomial], k: usize) -> DensePolynomial {
    let product = &table[k] * &table[k - 2];
    integral_operator(&product).scale(&int(2 * k as i64 - 1))
}

/// Precomputed `W_2..=W_max`.
#[derive(Clone, Debug)]
pub struct WBasis {
    polys: Vec<DensePolynomial>,
}

impl WBasis {
    pub fn new(max: usize) -> Self {
        let table = hermite_table(max.max(2));
        let polys = (2..=max).map(|k| w_from_table(&table, k)).collect();
        Self { polys }
    }

    pub fn max_index(&self) -> usize {
        self.polys.len() + 1
    }

    /// `W_k`; panics outside `2..=max_index`.
    pub fn get(&self, k: usize) -> &DensePolynomial {
        &self.polys[k - 2]
    }
}

/// `T_k = x^{2k} - k(2k-1)!! x^2 + (k-1)(2k-1)!!`
pub fn t_poly(k: usize) -> Result<DensePolynomial> {
    require_k(k, "T_k")?;
    let df = big(odd_double_factorial(k as u64));
    let mut coeffs = vec![Rational::zero(); 2 * k + 1];
    coeffs[0] = &df * int(k as i64 - 1);
    coeffs[2] = -(&df * int(k as i64));
    coeffs[2 * k] = Rational::one();
    Ok(DensePolynomial::new(coeffs))
}

/// The even solution of `x ∫_0^x Q_k - Q_k = T_k`:
/// `Q_k = -(k-1)(2k-1)!! + Σ_{p=1}^{k-1} (2k-1)!!/(2p-1)!! x^{2p}`.
pub fn q_poly(k: usize) -> Result<DensePolynomial> {
    require_k(k, "Q_k")?;
    let df = big(odd_double_factorial(k as u64));
    let mut coeffs = vec![Rational::zero(); 2 * k - 1];
    coeffs[0] = -(&df * int(k as i64 - 1));
    for p in 1..k {
        coeffs[2 * p] = &df / big(odd_double_factorial(p as u64));
    }
    let q = DensePolynomial::new(coeffs);
    if integral_operator(&q) != t_poly(k)? {
        return Err(Error::Invariant(format!("Q_{k} does not solve its functional equation")));
    }
    Ok(q)
}

/// `P = Σ_k c_k W_k + a x^2 + b`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WExpansion {
    pub coeffs: BTreeMap<usize, Rational>,
    pub residual_a: Rational,
    pub residual_b: Rational,
}

impl WExpansion {
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn reconstruct(&self) -> DensePolynomial {
        let max = self.coeffs.keys().next_back().copied().unwrap_or(2);
        let basis = WBasis::new(max);
        let residual = DensePolynomial::new(vec![
            self.residual_b.clone(),
            Rational::zero(),
            self.residual_a.clone(),
        ]);
        self.coeffs
            .iter()
            .fold(residual, |acc, (&k, c)| &acc + &basis.get(k).scale(c))
    }

    pub fn membership(&self) -> FamilyMembershipVerdict {
        let negative_indices: Vec<usize> = self
            .coeffs
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(&k, _)| k)
            .collect();
        let in_family = negative_indices.is_empty()
            && self.residual_a.is_zero()
            && self.residual_b.is_zero();
        FamilyMembershipVerdict {
            in_family,
            negative_indices,
        }
    }
}

/// Whether a polynomial lies in the cone of non-negative W-combinations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMembershipVerdict {
    pub in_family: bool,
    pub negative_indices: Vec<usize>,
}

/// Unique expansion of an even polynomial of degree `2m ≥ 4` over
/// `{W_m, ..., W_2, x^2, 1}`.
///
/// Each `W_k` is monic of degree `2k`, so the system is unit upper-triangular
/// and is solved by back-substitution from the top degree down.
pub fn expand_in_w(p: &DensePolynomial) -> Result<WExpansion> {
    let deg = p
        .degree()
        .ok_or_else(|| Error::domain("cannot expand the zero polynomial"))?;
    if !p.is_even() {
        return Err(Error::domain(format!("polynomial {p} is not even")));
    }
    if deg < 4 {
        return Err(Error::domain(format!("degree {deg} < 4 has no W-component")));
    }
    let m = deg / 2;
    let basis = WBasis::new(m);
    let mut rest = p.clone();
    let mut coeffs = BTreeMap::new();
    for k in (2..=m).rev() {
        let c = rest.coeff(2 * k);
        if c.is_zero() {
            continue;
        }
        rest = &rest - &basis.get(k).scale(&c);
        coeffs.insert(k, c);
    }
    debug_assert!(rest.degree().is_none_or(|d| d <= 2));
    Ok(WExpansion {
        coeffs,
        residual_a: rest.coeff(2),
        residual_b: rest.coeff(0),
    })
}

/// Closed-form coefficient of `W_i` in `T_k`:
///
/// ```text
/// α_{i,k} = (2k-1)!! / (2^{i-1} (2i-1) (i-2)!) · C(k,i) · ∫_0^1 (1-u)^{-1/2} u^{i-2} (1-u/2)^{k-i} du
/// ```
///
/// With `u = 1 - t²` the integral becomes `2 ∫_0^1 (1-t²)^{i-2} ((1+t²)/2)^{k-i} dt`,
/// a polynomial integral evaluated exactly.
pub fn alpha_coeff(i: usize, k: usize) -> Result<Rational> {
    if i < 2 || i > k {
        return Err(Error::domain(format!("α_(i,k) requires 2 ≤ i ≤ k, got i={i}, k={k}")));
    }
    let one_minus_t2 = DensePolynomial::from_ints(&[1, 0, -1]);
    let half_one_plus_t2 = DensePolynomial::new(vec![frac(1, 2), int(0), frac(1, 2)]);
    let integrand = &one_minus_t2.pow((i - 2) as u32) * &half_one_plus_t2.pow((k - i) as u32);
    let integral = integrand.definite_integral(&Rational::zero(), &Rational::one()) * int(2);

    let prefactor = Rational::new(
        odd_double_factorial(k as u64),
        (num_bigint::BigInt::one() << (i - 1)) * (2 * i as u64 - 1) * factorial(i as u64 - 2),
    );
    Ok(prefactor * big(binomial(k as u64, i as u64)) * integral)
}

/// `C_k = 4 / √inner` with `inner = 2k(k-1) ∫_0^1 ((1+t²)/2)^{k-2} dt` kept exact.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinConstant {
    pub k: usize,
    pub inner: Rational,
    pub c_k: f64,
}

impl SteinConstant {
    /// `C_k √(m_{2k}/(2k-1)!! - 1)` for a unit-variance `X`; clamps a
    /// negative radicand to zero.
    pub fn tv_bound(&self, m_2k: f64) -> f64 {
        let df = rational_to_f64(&big(odd_double_factorial(self.k as u64)));
        self.c_k * (m_2k / df - 1.0).max(0.0).sqrt()
    }
}

pub fn stein_constant(k: usize) -> Result<SteinConstant> {
    require_k(k, "C_k")?;
    let half_one_plus_t2 = DensePolynomial::new(vec![frac(1, 2), int(0), frac(1, 2)]);
    let integral = half_one_plus_t2
        .pow((k - 2) as u32)
        .definite_integral(&Rational::zero(), &Rational::one());
    let inner = int(2 * (k * (k - 1)) as i64) * integral;
    let c_k = 4.0 / rational_to_f64(&inner).sqrt();
    Ok(SteinConstant { k, inner, c_k })
}

/// `T_{k,l}` with its W-expansion and membership verdict.
#[derive(Clone, Debug)]
pub struct TklDecomposition {
    pub k: usize,
    pub l: usize,
    pub poly: DensePolynomial,
    pub expansion: WExpansion,
    pub verdict: FamilyMembershipVerdict,
}

/// `T_{k,l} = x^{2l} + α x^{2k} + β` with `(α, β)` forced by
/// `φ(1) = φ'(1) = 0` for `φ(t) = E[T_{k,l}(tN)]`:
/// `α = -l(2l-1)!! / (k(2k-1)!!)`, `β = (l/k - 1)(2l-1)!!`.
pub fn t_kl_poly(k: usize, l: usize) -> Result<TklDecomposition> {
    if k < 2 || k >= l {
        return Err(Error::domain(format!("T_(k,l) requires 2 ≤ k < l, got k={k}, l={l}")));
    }
    let df_k = big(odd_double_factorial(k as u64));
    let df_l = big(odd_double_factorial(l as u64));
    // φ(1) = df_l + α df_k + β = 0 and φ'(1) = 2l df_l + 2k α df_k = 0
    let alpha = -(int(l as i64) * &df_l) / (int(k as i64) * &df_k);
    let beta = -(&df_l + &alpha * &df_k);
    let mut coeffs = vec![Rational::zero(); 2 * l + 1];
    coeffs[0] = beta;
    coeffs[2 * k] = alpha;
    coeffs[2 * l] = Rational::one();
    let poly = DensePolynomial::new(coeffs);
    let expansion = expand_in_w(&poly)?;
    let verdict = expansion.membership();
    Ok(TklDecomposition {
        k,
        l,
        poly,
        expansion,
        verdict,
    })
}

/// JSON shape for expansion reports:
/// `{"poly": {...}, "w_coeffs": {"2": "5/2"}, "residual": ["0","0"], "in_family": true}`.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub poly: DensePolynomial,
    pub w_coeffs: BTreeMap<String, String>,
    pub residual: [String; 2],
    pub in_family: bool,
    pub negative_indices: Vec<usize>,
}

impl ExpansionReport {
    pub fn new(poly: &DensePolynomial, expansion: &WExpansion) -> Self {
        let verdict = expansion.membership();
        Self {
            poly: poly.clone(),
            w_coeffs: expansion
                .coeffs
                .iter()
                .map(|(k, c)| (k.to_string(), format_rational(c)))
                .collect(),
            residual: [
                format_rational(&expansion.residual_a),
                format_rational(&expansion.residual_b),
            ],
            in_family: verdict.in_family,
            negative_indices: verdict.negative_indices,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w_coeffs(e: &WExpansion) -> Vec<(usize, Rational)> {
        e.coeffs.iter().map(|(&k, c)| (k, c.clone())).collect()
    }

    #[test]
    fn w2_w3_closed_forms() {
        assert_eq!(w_poly(2).unwrap(), DensePolynomial::from_ints(&[3, 0, -6, 0, 1]));
        assert_eq!(w_poly(3).unwrap(), DensePolynomial::from_ints(&[0, 0, 15, 0, -10, 0, 1]));
    }

    #[test]
    fn rejects_small_indices() {
        assert!(matches!(w_poly(1), Err(Error::Domain(_))));
        assert!(t_poly(0).is_err());
        assert!(q_poly(1).is_err());
        assert!(stein_constant(1).is_err());
        assert!(alpha_coeff(1, 3).is_err());
        assert!(alpha_coeff(4, 3).is_err());
        assert!(t_kl_poly(3, 3).is_err());
        assert!(t_kl_poly(4, 2).is_err());
    }

    #[test]
    fn t_poly_cases() {
        assert_eq!(t_poly(2).unwrap(), w_poly(2).unwrap());
        assert_eq!(t_poly(3).unwrap(), DensePolynomial::from_ints(&[30, 0, -45, 0, 0, 0, 1]));
        for k in 2..10 {
            assert!(t_poly(k).unwrap().gaussian_expectation().is_zero());
        }
    }

    #[test]
    fn q_poly_cases() {
        assert_eq!(q_poly(2).unwrap(), DensePolynomial::from_ints(&[-3, 0, 3]));
        assert_eq!(q_poly(3).unwrap(), DensePolynomial::from_ints(&[-30, 0, 15, 0, 5]));
        let q5 = q_poly(5).unwrap();
        assert_eq!(integral_operator(&q5), t_poly(5).unwrap());
    }

    #[test]
    fn expansion_cases() {
        let e = expand_in_w(&t_poly(3).unwrap()).unwrap();
        assert_eq!(w_coeffs(&e), vec![(2, int(10)), (3, int(1))]);
        assert!(e.residual_a.is_zero() && e.residual_b.is_zero());

        let e = expand_in_w(&w_poly(5).unwrap()).unwrap();
        assert_eq!(w_coeffs(&e), vec![(5, int(1))]);

        let e = expand_in_w(&t_poly(2).unwrap()).unwrap();
        assert_eq!(w_coeffs(&e), vec![(2, int(1))]);
    }

    #[test]
    fn expansion_rejects_bad_input() {
        assert!(expand_in_w(&DensePolynomial::from_ints(&[0, 1, 0, 0, 1])).is_err());
        assert!(expand_in_w(&DensePolynomial::from_ints(&[1, 0, 1])).is_err());
        assert!(expand_in_w(&DensePolynomial::zero()).is_err());
    }

    #[test]
    fn residual_is_reported() {
        let p = &w_poly(3).unwrap() + &DensePolynomial::from_ints(&[7, 0, -2]);
        let e = expand_in_w(&p).unwrap();
        assert_eq!(e.residual_a, int(-2));
        assert_eq!(e.residual_b, int(7));
        assert!(!e.membership().in_family);
        assert_eq!(e.reconstruct(), p);
    }

    #[test]
    fn alpha_small_cases() {
        assert_eq!(alpha_coeff(2, 2).unwrap(), int(1));
        assert_eq!(alpha_coeff(2, 3).unwrap(), int(10));
        assert_eq!(alpha_coeff(3, 3).unwrap(), int(1));
    }

    #[test]
    fn stein_small_cases() {
        let c2 = stein_constant(2).unwrap();
        assert_eq!(c2.inner, int(4));
        assert_eq!(c2.c_k, 2.0);
        let c3 = stein_constant(3).unwrap();
        assert_eq!(c3.inner, int(8));
        assert!((c3.c_k - 2f64.sqrt()).abs() < 1e-15);
        // C_2 √(m4/3 - 1) = (2/√3) √(m4 - 3)
        let m4 = 3.3;
        assert!((c2.tv_bound(m4) - 2.0 / 3f64.sqrt() * (m4 - 3.0f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tkl_cases() {
        let d = t_kl_poly(2, 3).unwrap();
        assert_eq!(
            d.poly,
            DensePolynomial::new(vec![frac(15, 2), int(0), int(0), int(0), frac(-15, 2), int(0), int(1)])
        );
        assert_eq!(w_coeffs(&d.expansion), vec![(2, frac(5, 2)), (3, int(1))]);
        assert!(d.verdict.in_family);

        let d = t_kl_poly(3, 5).unwrap();
        assert_eq!(
            w_coeffs(&d.expansion),
            vec![(2, int(30)), (3, int(129)), (4, frac(180, 7)), (5, int(1))]
        );
        assert!(d.verdict.in_family);

        // The W_3 coefficient is 45 by exact back-substitution; the
        // reconstruction below pins it independently of the solve.
        let d = t_kl_poly(4, 5).unwrap();
        assert_eq!(
            w_coeffs(&d.expansion),
            vec![(2, frac(-45, 2)), (3, int(45)), (4, frac(405, 28)), (5, int(1))]
        );
        assert_eq!(d.expansion.reconstruct(), d.poly);
        assert!(!d.verdict.in_family);
        assert_eq!(d.verdict.negative_indices, vec![2]);
    }

    #[test]
    fn report_json_shape() {
        let d = t_kl_poly(2, 3).unwrap();
        let v = serde_json::to_value(ExpansionReport::new(&d.poly, &d.expansion)).unwrap();
        assert_eq!(v["w_coeffs"]["2"], "5/2");
        assert_eq!(v["w_coeffs"]["3"], "1");
        assert_eq!(v["residual"], serde_json::json!(["0", "0"]));
        assert_eq!(v["in_family"], true);
        assert_eq!(v["poly"]["coeffs"][0], "15/2");
    }
}
