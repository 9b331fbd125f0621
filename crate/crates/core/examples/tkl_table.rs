//! Expansions of T_{k,l} in the W-family, with membership verdicts.

use chaos_lab::wfamily::t_kl_poly;

fn main() -> chaos_lab::Result<()> {
    for (k, l) in [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)] {
        let d = t_kl_poly(k, l)?;
        let terms: Vec<String> = d
            .expansion
            .coeffs
            .iter()
            .rev()
            .map(|(i, c)| format!("({c}) W_{i}"))
            .collect();
        let verdict = if d.verdict.in_family { "in family" } else { "not in family" };
        println!("T_{{{k},{l}}} = {}  [{verdict}]", terms.join(" + "));
    }
    Ok(())
}
