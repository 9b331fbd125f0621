use chaos_lab::exact_poly::{frac, gaussian_expectation, int, DensePolynomial, Rational};
use chaos_lab::hermite::{
    hermite, hermite_linearize, hermite_table, hermite_triple_expectation,
    monomial_hermite_expectation,
};
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(n, d)| frac(n, d))
}

fn polynomial(max_len: usize) -> impl Strategy<Value = DensePolynomial> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(DensePolynomial::new)
}

fn in_lowest_terms(r: &Rational) -> bool {
    let renormalized = Rational::new(r.numer().clone(), r.denom().clone());
    renormalized.numer() == r.numer() && renormalized.denom() == r.denom() && r.denom() > &0.into()
}

proptest! {
    #[test]
    fn gaussian_expectation_is_linear(p in polynomial(12), q in polynomial(12)) {
        prop_assert_eq!(
            gaussian_expectation(&(&p + &q)),
            gaussian_expectation(&p) + gaussian_expectation(&q)
        );
    }

    #[test]
    fn integrate_then_differentiate_is_identity(p in polynomial(15)) {
        prop_assert_eq!(p.integrate().derivative(), p);
    }

    #[test]
    fn arithmetic_stays_in_lowest_terms(p in polynomial(8), q in polynomial(8), c in rational()) {
        let r = &(&p * &q) - &p.scale(&c);
        prop_assert!(r.coeffs().iter().all(in_lowest_terms));
        prop_assert!(in_lowest_terms(&gaussian_expectation(&r)));
        prop_assert!(r.coeffs().last().is_none_or(|c| !c.is_zero()));
    }

    #[test]
    fn hermite_expansion_round_trips(p in polynomial(14)) {
        let e = chaos_lab::hermite::HermiteExpansion::from_polynomial(&p);
        prop_assert_eq!(e.to_polynomial(), p.clone());
        prop_assert_eq!(e.gaussian_expectation(), gaussian_expectation(&p));
    }
}

#[test]
fn hermite_orthogonal_to_constants() {
    for (k, h) in hermite_table(20).iter().enumerate().skip(1) {
        assert!(gaussian_expectation(h).is_zero(), "k={k}");
    }
}

#[test]
fn linearization_matches_direct_product() {
    let h = hermite_table(24);
    for m in 0..=12 {
        for n in 0..=12 {
            assert_eq!(
                hermite_linearize(m, n).to_polynomial(),
                &h[m] * &h[n],
                "m={m} n={n}"
            );
        }
    }
}

#[test]
fn triple_expectation_brute_force_and_symmetry() {
    let h = hermite_table(10);
    for l in 0..=10 {
        for m in 0..=10 {
            let hlm = &h[l] * &h[m];
            for n in 0..=10 {
                let brute = gaussian_expectation(&(&hlm * &h[n]));
                let value = hermite_triple_expectation(l, m, n);
                assert_eq!(value, brute, "({l},{m},{n})");
                for perm in [(l, n, m), (m, l, n), (m, n, l), (n, l, m), (n, m, l)] {
                    assert_eq!(hermite_triple_expectation(perm.0, perm.1, perm.2), value);
                }
            }
        }
    }
}

#[test]
fn monomial_expectation_brute_force() {
    for m in 0..=10 {
        let x2m = DensePolynomial::monomial(2 * m, int(1));
        for n in 0..=10 {
            let brute = gaussian_expectation(&(&x2m * &hermite(2 * n)));
            assert_eq!(monomial_hermite_expectation(m, n), brute, "m={m} n={n}");
        }
    }
}

#[test]
fn gaussian_moments_are_double_factorials() {
    // independent oracle: E[N^{2j}] = (2j)! / (2^j j!)
    let mut fact = vec![1u128];
    for i in 1..=30u128 {
        fact.push(fact[i as usize - 1] * i);
    }
    for j in 0..=15usize {
        let expected = fact[2 * j] / (fact[j] << j);
        let got = gaussian_expectation(&DensePolynomial::monomial(2 * j, int(1)));
        assert_eq!(got, Rational::from_integer((expected as i128).into()), "j={j}");
    }
}
