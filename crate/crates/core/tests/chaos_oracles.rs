use chaos_lab::chaos_sim::{
    cumulants_to_moments, dtv_estimate, hermite_combo_exact_moments, mixture_moments,
    sample_chaos, second_chaos_cumulant, second_chaos_moments, simulate, BinSpec, ChaosSpec,
    HermiteTerm, SimulationOptions, ZStatus, DEFAULT_TERM_BOUND,
};
use chaos_lab::exact_poly::{frac, gaussian_expectation, int, DensePolynomial, Rational};
use chaos_lab::hermite::hermite;
use chaos_lab::moment_forms::check_even_bound;
use chaos_lab::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_lambdas(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let len = rng.random_range(1..=6);
    (0..len)
        .map(|_| {
            let d = rng.random_range(1..=10);
            frac(rng.random_range(-2 * d..=2 * d), d)
        })
        .collect()
}

fn h2_combo(lambdas: &[Rational]) -> Vec<HermiteTerm> {
    lambdas
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut index = vec![0; lambdas.len()];
            index[i] = 2;
            HermiteTerm { coeff: l.clone(), index }
        })
        .collect()
}

#[test]
fn cumulant_route_matches_hermite_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let lambdas = random_lambdas(&mut rng);
        let via_cumulants = second_chaos_moments(&lambdas, 10).unwrap();
        let via_hermite = hermite_combo_exact_moments(&h2_combo(&lambdas), 10, DEFAULT_TERM_BOUND).unwrap();
        assert_eq!(via_cumulants, via_hermite, "λ = {lambdas:?}");
    }
}

#[test]
fn single_variable_moments_by_direct_integration() {
    // E[(c H_p(ξ))^j] straight from the Gaussian moment functional
    for (p, c) in [(2usize, int(1)), (3, frac(1, 2)), (4, int(-2))] {
        let x = hermite(p).scale(&c);
        let oracle = hermite_combo_exact_moments(
            &[HermiteTerm { coeff: c.clone(), index: vec![p] }],
            6,
            DEFAULT_TERM_BOUND,
        )
        .unwrap();
        for j in 0..=6u32 {
            assert_eq!(oracle[j as usize], gaussian_expectation(&x.pow(j)), "p={p} j={j}");
        }
    }
}

#[test]
fn product_chaos_by_independence() {
    // E[(N1 N2)^{2m}] = ((2m-1)!!)², odd moments vanish
    let m = ChaosSpec::product_n1n2().oracle_moments(8).unwrap().exact_sequence().unwrap();
    let gauss: Vec<Rational> = (0..=8u32)
        .map(|j| gaussian_expectation(&DensePolynomial::monomial(j as usize, int(1))))
        .collect();
    for j in 0..=8 {
        assert_eq!(m[j], &gauss[j] * &gauss[j], "j={j}");
    }
}

#[test]
fn cumulant_examples() {
    let l = [frac(1, 2), frac(-1, 2)];
    assert_eq!(second_chaos_cumulant(&[int(1)], 2), int(2));
    assert!(second_chaos_cumulant(&l, 3).is_zero());
    assert_eq!(second_chaos_cumulant(&l, 4), int(6));
    assert_eq!(second_chaos_cumulant(&l, 1), int(0));
    // N1 N2 through cumulants
    let kappas: Vec<Rational> = (1..=6).map(|r| second_chaos_cumulant(&l, r)).collect();
    assert_eq!(cumulants_to_moments(&kappas)[6], int(225));
    assert!(matches!(second_chaos_moments(&[], 4), Err(Error::Domain(_))));
}

#[test]
fn unit_variance_normalizations() {
    // H_2/√2 and H_3/√6 through scale_sq
    for (p, s) in [(2usize, frac(1, 2)), (3, frac(1, 6))] {
        let spec = ChaosSpec::scaled_hermite_combo(
            vec![HermiteTerm { coeff: int(1), index: vec![p] }],
            s,
        )
        .unwrap();
        assert_eq!(spec.oracle_moments(4).unwrap().exact(2), Some(int(1)), "p={p}");
    }
}

#[test]
fn mixture_degenerate_weights() {
    let m = mixture_moments(&int(0), 8).unwrap();
    assert_eq!(m[0], int(1));
    assert!((1..=8).all(|j| m[j].is_zero()));
    assert!(matches!(mixture_moments(&frac(-1, 3), 4), Err(Error::Domain(_))));
}

#[test]
fn even_bound_holds_on_generated_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let ms = second_chaos_moments(&random_lambdas(&mut rng), 10).unwrap();
        if ms[2].is_zero() {
            continue;
        }
        for k in 1..=5 {
            assert!(check_even_bound(&ms, k).unwrap().holds);
        }
    }
}

#[test]
fn clt_sixth_moment_formula() {
    for d in [1usize, 2, 7, 50, 333] {
        let m6 = ChaosSpec::clt_family(d).unwrap().oracle_moments(6).unwrap().exact(6).unwrap();
        let dd = int(d as i64);
        assert_eq!(m6, int(15) + int(260) / &dd + int(480) / (&dd * &dd));
    }
}

#[test]
fn sampling_is_reproducible_across_thread_counts() {
    let spec = ChaosSpec::clt_family(3).unwrap();
    let a = sample_chaos(&spec, 200_000, 9).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| sample_chaos(&spec, 200_000, 9).unwrap());
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn monte_carlo_agrees_with_oracles() {
    let specs = [
        ChaosSpec::product_n1n2(),
        ChaosSpec::centered_gamma(),
        ChaosSpec::second_chaos(vec![frac(1, 2), frac(-1, 2)]).unwrap(),
        ChaosSpec::mixture(frac(1, 2)).unwrap(),
        ChaosSpec::scaled_hermite_combo(
            vec![HermiteTerm { coeff: int(1), index: vec![3] }],
            frac(1, 6),
        )
        .unwrap(),
    ];
    for spec in &specs {
        let r = simulate(spec, 200_000, 11, &SimulationOptions::default()).unwrap();
        let checks = r.oracle.as_ref().unwrap();
        assert_eq!(checks.len(), 8);
        assert_ne!(r.worst_status(), ZStatus::Fail, "{}: {checks:?}", r.description);
    }
}

#[test]
fn dtv_of_gaussian_and_point_mass() {
    let g = sample_chaos(&ChaosSpec::mixture(int(1)).unwrap(), 1_000_000, 5).unwrap();
    assert!(dtv_estimate(&g, &BinSpec::default()).unwrap().estimate <= 0.01);
    let z = sample_chaos(&ChaosSpec::mixture(int(0)).unwrap(), 20_000, 5).unwrap();
    assert!(dtv_estimate(&z, &BinSpec::default()).unwrap().estimate >= 0.49);
}

#[test]
fn oracle_term_bound_is_a_resource_error() {
    let spec = ChaosSpec::hermite_combo(vec![
        HermiteTerm { coeff: int(1), index: vec![3, 0, 0] },
        HermiteTerm { coeff: int(1), index: vec![1, 1, 1] },
        HermiteTerm { coeff: int(1), index: vec![0, 1, 2] },
    ])
    .unwrap();
    assert!(matches!(spec.oracle_moments_bounded(8, 30), Err(Error::Resource(_))));
    assert!(spec.oracle_moments(8).is_ok());
}
