//! Hermite polynomials, linearization and Gaussian product integrals.

use chaos_lab::hermite::{hermite, hermite_linearize, hermite_triple_expectation};

fn main() {
    for k in 0..=5 {
        println!("H_{k}(x) = {}", hermite(k));
    }

    // H_2 H_3 = H_5 + 6 H_3 + 6 H_1
    let product = hermite_linearize(2, 3);
    for (n, c) in product.coeffs() {
        println!("H_2 H_3 has {c} on H_{n}");
    }

    println!("E[H_2 H_3 H_5] = {}", hermite_triple_expectation(2, 3, 5));
    println!("E[H_2 H_2 H_2] = {}", hermite_triple_expectation(2, 2, 2));
}
