//! A Gaussian/point-mass mixture that no moment inequality rules out alone.

use chaos_lab::chaos_sim::mixture_moments;
use chaos_lab::exact_poly::frac;
use chaos_lab::moment_forms::{certify, expected_w};

fn main() -> chaos_lab::Result<()> {
    let ms = mixture_moments(&frac(1, 2), 10)?;
    println!("moments: {:?}", ms.as_slice().iter().map(|m| m.to_string()).collect::<Vec<_>>());
    for j in 2..=5 {
        println!("E[W_{j}] = {}", expected_w(j, &ms)?);
    }
    println!("certificate holds: {}", certify(&ms, 5)?.all_hold());
    Ok(())
}
