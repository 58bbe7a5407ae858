//! The threshold construction next to the sharp bound.
//!
//! `cargo run --release --example tightness`

use slicekit::cube::{sharp_bound, tightness_example};
use slicekit::format_q;

fn main() -> slicekit::Result<()> {
    println!("sharp_bound(1/16, 1) = {:.6}", sharp_bound(1.0 / 16.0, 1)?);
    for (n, k, t) in [(10, 1, 2.0), (12, 1, 2.0), (12, 2, 1.5)] {
        let (_, _, r) = tightness_example(n, k, t)?;
        let bound = r.sharp_bound.map_or("n/a".to_string(), |b| format!("{b:.6}"));
        println!("n = {n}, k = {k}, t = {t}: delta = {}, eps = {}, bound {bound}", format_q(&r.delta), format_q(&r.eps));
    }
    Ok(())
}
