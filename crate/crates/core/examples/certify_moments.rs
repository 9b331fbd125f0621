//! Positivity certificates for three moment sequences.

use chaos_lab::exact_poly::{frac, int};
use chaos_lab::moment_forms::{certify, ExactMoments};

fn report(label: &str, moments: Vec<chaos_lab::Rational>, k: usize) -> chaos_lab::Result<()> {
    let ms = ExactMoments::new(moments)?;
    let cert = certify(&ms, k)?;
    println!("{label}: all hold = {}", cert.all_hold());
    for (l, m) in cert.leading_minors.iter().enumerate() {
        println!("  minor {l} = {m}");
    }
    for v in &cert.inequalities {
        println!("  {:<16} slack {:>12}  {}", v.name, v.slack.to_string(), if v.holds { "ok" } else { "VIOLATED" });
    }
    println!("  min eigenvalue {:.3e}", cert.eigen.min_eigenvalue);
    Ok(())
}

fn main() -> chaos_lab::Result<()> {
    report("Gaussian", [1, 0, 1, 0, 3, 0, 15].map(int).to_vec(), 3)?;
    report("ξ² - 1", [1, 0, 2, 8, 60].map(int).to_vec(), 2)?;
    // U² - 1/3 with U uniform on [-1, 1]; not a chaos element
    report("Jacobi", vec![int(1), int(0), frac(4, 45), frac(16, 945), frac(16, 945)], 2)?;
    Ok(())
}
