//! Embedding majority on three bits into balanced slices of growing size.
//!
//! `cargo run --release --example embedding`

use slicekit::cube::{embedding_report, ks_via_embedding, weight_above};
use slicekit::{format_q, CubeFunction};

fn main() -> slicekit::Result<()> {
    let maj = CubeFunction::majority(3)?;
    println!("cube W^>1 = {}", format_q(&weight_above(&maj, 1)));
    for m in [8, 12, 16, 20] {
        let r = embedding_report(&maj, 1, m)?;
        println!(
            "m = {m:>2}: slice W^>1 = {:.6}, gap {:.6}, marginal deviation {:.4}",
            slicekit::rational::to_f64(&r.slice_weight),
            r.gap,
            r.marginal_deviation
        );
    }
    let a = ks_via_embedding(&maj, 1, 8)?;
    println!("degree-1 approximation through slice(8, 4): distance {}", format_q(&a.distance));
    Ok(())
}
