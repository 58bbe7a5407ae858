//! Level weights of a few functions on slice(8, 4).
//!
//! `cargo run --example spectrum`

use slicekit::funcspec::slice_from_spec;
use slicekit::{format_q, level_weights, make_domain};

fn main() -> slicekit::Result<()> {
    let d = make_domain(8, 4)?;
    for spec in ["dictator:1", "and:1,2", "psi:(1,2)(3,4)", "maj", "random-bool:7"] {
        let f = slice_from_spec(spec, &d)?;
        let w = level_weights(&f)?;
        println!("{spec}");
        for (level, weight, approx) in w.table() {
            println!("  level {level}: {weight} ({approx:.6})");
        }
        println!("  total {} = ||f||^2 {}", format_q(&w.total()), format_q(&f.norm_sq()));
    }
    Ok(())
}
