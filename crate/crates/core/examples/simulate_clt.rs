//! Monte Carlo over the normalized sum of d independent ξ_i² - 1.

use chaos_lab::chaos_sim::{simulate, BinSpec, ChaosSpec, SimulationOptions};

fn main() -> chaos_lab::Result<()> {
    let opts = SimulationOptions { dtv: Some(BinSpec::default()), ..Default::default() };
    for d in [1, 10, 100] {
        let spec = ChaosSpec::clt_family(d)?;
        let report = simulate(&spec, 200_000, 42, &opts)?;
        println!("d = {d}: {}", report.description);
        for check in report.oracle.iter().flatten() {
            println!(
                "  m{}: {:>10.4} vs {:>10.4}  z = {:+.2}",
                check.order, check.empirical, check.expected, check.z
            );
        }
        let dtv = report.dtv.as_ref().map(|d| d.estimate).unwrap_or(f64::NAN);
        let bounds: Vec<String> = report.tv_bounds.iter().map(|b| format!("k={}: {:.4}", b.k, b.bound)).collect();
        println!("  d_TV ≈ {dtv:.4}; bounds {}", bounds.join(", "));
    }
    Ok(())
}
