//! The quick verification suite, rendered as a table.

use chaos_lab::verify::{verify_paper, VerifyOptions};

fn main() {
    let report = verify_paper(&VerifyOptions::default());
    print!("{}", report.render_table());
    for (criterion, passed) in report.criteria() {
        println!("criterion {criterion:>2}: {}", if passed { "pass" } else { "FAIL" });
    }
}
