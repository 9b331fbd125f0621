//! Exact moments of chaos elements, by cumulants and by Hermite products.

use chaos_lab::chaos_sim::{lambdas, ChaosSpec, HermiteTerm};
use chaos_lab::exact_poly::int;

fn main() -> chaos_lab::Result<()> {
    let specs = [
        ChaosSpec::second_chaos(lambdas(&[(1, 2), (-1, 2)]))?,
        ChaosSpec::product_n1n2(),
        ChaosSpec::hermite_combo(vec![
            HermiteTerm { coeff: int(1), index: vec![3, 0] },
            HermiteTerm { coeff: int(2), index: vec![1, 2] },
        ])?,
    ];
    for spec in &specs {
        let oracle = spec.oracle_moments(8)?;
        let seq: Vec<String> = (0..=8).map(|j| oracle.exact(j).unwrap().to_string()).collect();
        println!("{}\n  {}", spec.describe(), seq.join(", "));
    }
    Ok(())
}
