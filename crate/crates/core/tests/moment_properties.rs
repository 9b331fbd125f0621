use chaos_lab::chaos_sim::second_chaos_moments;
use chaos_lab::exact_poly::{frac, int, Rational};
use chaos_lab::moment_forms::{
    build_moment_matrix, certify, check_even_bound, check_fourth_moment_ineq, expected_w,
    kappa6, ExactMoments,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo * 12..=hi * 12, 1i64..=12).prop_map(|(n, d)| frac(n, d * 12))
}

fn eigenvalues() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(-2, 2), 1..=6)
        .prop_filter("not identically zero", |v| v.iter().any(|l| !l.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn second_chaos_sequences_are_certified(lambdas in eigenvalues()) {
        let ms = second_chaos_moments(&lambdas, 10).unwrap();
        for k in 1..=5 {
            let minors = build_moment_matrix(k, &ms).unwrap().leading_minors();
            prop_assert!(minors.iter().all(|m| !m.is_negative()), "k={} minors {:?}", k, minors);
        }
        for j in 2..=5 {
            prop_assert!(!expected_w(j, &ms).unwrap().is_negative(), "E[W_{}]", j);
        }
        prop_assert!(!kappa6(&ms).unwrap().is_negative());
        prop_assert!(certify(&ms, 5).unwrap().all_hold());
    }

    #[test]
    fn det_m2_identity(m2 in rational(-3, 3), m3 in rational(-3, 3), m4 in rational(-3, 3)) {
        let ms = ExactMoments::new(vec![int(1), int(0), m2.clone(), m3.clone(), m4.clone()]).unwrap();
        let minors = build_moment_matrix(2, &ms).unwrap().leading_minors();
        let identity = int(4) * &m2 * (&m4 / int(3) - &m2 * &m2) - int(2) * &m3 * &m3;
        prop_assert_eq!(minors[2].clone(), identity);
    }

    #[test]
    fn even_bound_two_is_the_classical_bound(m2 in rational(0, 3), m4 in rational(0, 30)) {
        let ms = ExactMoments::new(vec![int(1), int(0), m2.clone(), int(0), m4.clone()]).unwrap();
        let v = check_even_bound(&ms, 2).unwrap();
        prop_assert_eq!(v.holds, m4 >= int(3) * &m2 * &m2);
    }

    #[test]
    fn float_mode_agrees_with_exact(lambdas in eigenvalues()) {
        let exact = second_chaos_moments(&lambdas, 8).unwrap();
        let e = certify(&exact, 4).unwrap();
        let f = certify(&exact.to_float(), 4).unwrap();
        prop_assert_eq!(e.all_hold(), f.all_hold());
        for (a, b) in e.inequalities.iter().zip(&f.inequalities) {
            prop_assert_eq!(a.holds, b.holds, "{}", a.name);
        }
    }

    #[test]
    fn fourth_moment_inequality_is_scale_free(lambdas in eigenvalues(), s in 1i64..=5) {
        let ms = second_chaos_moments(&lambdas, 4).unwrap();
        let scaled: Vec<Rational> = lambdas.iter().map(|l| l * int(s)).collect();
        let ss = second_chaos_moments(&scaled, 4).unwrap();
        let (a, b) = (check_fourth_moment_ineq(&ms).unwrap(), check_fourth_moment_ineq(&ss).unwrap());
        // slack is homogeneous of degree 4 in λ
        prop_assert_eq!(b.slack, a.slack * int(s.pow(4)));
    }
}

#[test]
fn gaussian_sits_on_the_boundary() {
    let ms = ExactMoments::new([1, 0, 1, 0, 3, 0, 15, 0, 105].map(int).to_vec()).unwrap();
    let c = certify(&ms, 4).unwrap();
    assert!(c.all_hold());
    for k in 2..=4 {
        assert_eq!(build_moment_matrix(k, &ms).unwrap().determinant(), int(0), "k={k}");
        assert!(expected_w(k, &ms).unwrap().is_zero());
    }
}
