//! The noise operator computed exactly from level weights and estimated by
//! random transpositions.
//!
//! `cargo run --release --example noise`

use slicekit::funcspec::slice_from_spec;
use slicekit::make_domain;
use slicekit::noise::{noise, simulate_noise, split_levels_gap, NoiseParams};

fn main() -> slicekit::Result<()> {
    let d = make_domain(8, 4)?;
    let f = slice_from_spec("and:1,2", &d)?;
    let x = 0b0000_1111;
    for t in [0.25, 1.0, 4.0] {
        let params = NoiseParams::new(t, d.n())?;
        let exact = noise(&f, &params)?[d.index_of(x)];
        let (mean, err) = simulate_noise(&f, x, t, 20_000, 7)?;
        let (lhs, rhs) = split_levels_gap(&f, 1, t)?;
        println!("t = {t}: H_t f(x) = {exact:.5}, simulated {mean:.5} +- {err:.5}; split levels {lhs:.4} <= {rhs:.4}");
    }
    Ok(())
}
