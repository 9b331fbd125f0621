//! Probabilists' Hermite polynomials and Gaussian integrals of their products.
//!
//! Only the probabilists' normalization `H_{k+1} = x H_k - k H_{k-1}` is
//! supported; `H_k` is monic and `E[H_m(N) H_n(N)] = n! δ_{mn}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact_poly::{big, binomial, factorial, int, DensePolynomial, Rational};

/// `H_k` built from the three-term recurrence.
pub fn hermite(k: usize) -> DensePolynomial {
    hermite_table(k).pop().unwrap_or_else(DensePolynomial::one)
}

/// `[H_0, H_1, ..., H_max]`
pub fn hermite_table(max: usize) -> Vec<DensePolynomial> {
    let mut table = Vec::with_capacity(max + 1);
    table.push(DensePolynomial::one());
    if max == 0 {
        return table;
    }
    table.push(DensePolynomial::x());
    for k in 1..max {
        let next = &table[k].shift_up() - &table[k - 1].scale(&int(k as i64));
        table.push(next);
    }
    table
}

/// `H_n(x)` in floating point via the recurrence.
pub fn hermite_f64(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for k in 1..n {
                let next = x * cur - k as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// A finite combination `Σ_n c_n H_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HermiteExpansion {
    coeffs: BTreeMap<usize, Rational>,
}

impl HermiteExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · H_n`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, n: usize, c: Rational) {
        let entry = self.coeffs.entry(n).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn to_polynomial(&self) -> DensePolynomial {
        let max = self.coeffs.keys().next_back().copied().unwrap_or(0);
        let table = hermite_table(max);
        self.coeffs
            .iter()
            .fold(DensePolynomial::zero(), |acc, (&n, c)| &acc + &table[n].scale(c))
    }

    /// Change of basis from monomials; top-down elimination using monicity.
    pub fn from_polynomial(p: &DensePolynomial) -> Self {
        let mut out = Self::new();
        let Some(deg) = p.degree() else {
            return out;
        };
        let table = hermite_table(deg);
        let mut rest = p.clone();
        for n in (0..=deg).rev() {
            let c = rest.coeff(n);
            if c.is_zero() {
                continue;
            }
            rest = &rest - &table[n].scale(&c);
            out.add_term(n, c);
        }
        debug_assert!(rest.is_zero());
        out
    }

    /// `E[Σ c_n H_n(N)] = c_0`
    pub fn gaussian_expectation(&self) -> Rational {
        self.coeff(0)
    }
}

/// Integer coefficients of `H_m H_n = Σ_r r! C(m,r) C(n,r) H_{m+n-2r}`.
///
/// Returned as `(index, coefficient)` pairs with `r = 0..=min(m, n)`.
pub(crate) fn linearization_terms(m: usize, n: usize) -> Vec<(usize, BigInt)> {
    (0..=m.min(n))
        .map(|r| {
            let c = factorial(r as u64) * binomial(m as u64, r as u64) * binomial(n as u64, r as u64);
            (m + n - 2 * r, c)
        })
        .collect()
}

/// Expands the product `H_m · H_n` back over the Hermite basis.
pub fn hermite_linearize(m: usize, n: usize) -> HermiteExpansion {
    let mut out = HermiteExpansion::new();
    for (idx, c) in linearization_terms(m, n) {
        out.add_term(idx, big(c));
    }
    debug_assert_eq!(out.to_polynomial(), &hermite(m) * &hermite(n));
    out
}

/// `E[H_l(N) H_m(N) H_n(N)] = l! m! n! / (s-l)! (s-m)! (s-n)!` with `2s = l+m+n`,
/// zero when `l+m+n` is odd or the triangle inequality fails.
pub fn hermite_triple_expectation(l: usize, m: usize, n: usize) -> Rational {
    if (l + m + n) % 2 == 1 {
        return Rational::zero();
    }
    let s = (l + m + n) / 2;
    if l > s || m > s || n > s {
        return Rational::zero();
    }
    let num = factorial(l as u64) * factorial(m as u64) * factorial(n as u64);
    let den = factorial((s - l) as u64) * factorial((s - m) as u64) * factorial((s - n) as u64);
    Rational::new(num, den)
}

/// `E[N^{2m} H_{2n}(N)] = (2m)! / (2^{m-n} (m-n)!)`, zero when `n > m`.
pub fn monomial_hermite_expectation(m: usize, n: usize) -> Rational {
    if n > m {
        return Rational::zero();
    }
    let num = factorial(2 * m as u64);
    let den = (BigInt::one() << (m - n)) * factorial((m - n) as u64);
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::frac;

    fn expansion(terms: &[(usize, i64)]) -> HermiteExpansion {
        let mut e = HermiteExpansion::new();
        for &(n, c) in terms {
            e.add_term(n, int(c));
        }
        e
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(hermite(0), DensePolynomial::one());
        assert_eq!(hermite(1), DensePolynomial::x());
        assert_eq!(hermite(2), DensePolynomial::from_ints(&[-1, 0, 1]));
        assert_eq!(hermite(3), DensePolynomial::from_ints(&[0, -3, 0, 1]));
        assert_eq!(hermite(4), DensePolynomial::from_ints(&[3, 0, -6, 0, 1]));
    }

    #[test]
    fn hermite_f64_matches_exact() {
        for n in 0..12 {
            let exact = hermite(n).eval_f64(1.3);
            assert!((hermite_f64(n, 1.3) - exact).abs() < 1e-9 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn orthogonal_to_constant() {
        for (k, h) in hermite_table(20).iter().enumerate().skip(1) {
            assert!(h.gaussian_expectation().is_zero(), "E[H_{k}] != 0");
        }
    }

    #[test]
    fn linearize_small_cases() {
        assert_eq!(hermite_linearize(1, 1), expansion(&[(2, 1), (0, 1)]));
        assert_eq!(hermite_linearize(1, 2), expansion(&[(3, 1), (1, 2)]));
        assert_eq!(hermite_linearize(2, 2), expansion(&[(4, 1), (2, 4), (0, 2)]));
    }

    #[test]
    fn triple_expectation_cases() {
        assert_eq!(hermite_triple_expectation(1, 1, 0), int(1));
        assert_eq!(hermite_triple_expectation(2, 2, 2), int(8));
        assert_eq!(hermite_triple_expectation(1, 2, 5), int(0));
        assert_eq!(hermite_triple_expectation(1, 1, 1), int(0));
    }

    #[test]
    fn monomial_expectation_cases() {
        assert_eq!(monomial_hermite_expectation(1, 1), int(2));
        assert_eq!(monomial_hermite_expectation(2, 0), int(3));
        assert_eq!(monomial_hermite_expectation(1, 2), int(0));
    }

    #[test]
    fn basis_change_round_trips() {
        let p = DensePolynomial::new(vec![frac(1, 3), int(-2), int(0), frac(7, 5), int(1)]);
        let e = HermiteExpansion::from_polynomial(&p);
        assert_eq!(e.to_polynomial(), p);
        assert_eq!(e.gaussian_expectation(), p.gaussian_expectation());
    }
}
