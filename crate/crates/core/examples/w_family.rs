//! The W-family, T_k and their exact expansion coefficients.

use chaos_lab::wfamily::{alpha_coeff, expand_in_w, stein_constant, t_poly, w_poly};

fn main() -> chaos_lab::Result<()> {
    for k in 2..=4 {
        println!("W_{k}(x) = {}", w_poly(k)?);
    }

    let k = 5;
    let t = t_poly(k)?;
    println!("\nT_{k}(x) = {t}");
    let solved = expand_in_w(&t)?;
    for i in 2..=k {
        // closed form and triangular solve agree
        assert_eq!(alpha_coeff(i, k)?, solved.coeff(i));
        println!("  α({i},{k}) = {}", solved.coeff(i));
    }

    println!();
    for k in 2..=5 {
        let c = stein_constant(k)?;
        println!("C_{k} = {:.6} (inner integral {})", c.c_k, c.inner);
    }
    Ok(())
}
