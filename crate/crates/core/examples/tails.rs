//! Exact lower tails of the number of ones in a fixed set of coordinates,
//! against `exp(−t²/2)`.
//!
//! `cargo run --example tails`

use slicekit::format_q;
use slicekit::noise::hypergeometric_tail;

fn main() -> slicekit::Result<()> {
    let (n, ell) = (12, 4);
    for s in 0..=n {
        let cells: Vec<String> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&t| {
                let r = hypergeometric_tail(n, ell, s, t).unwrap();
                let mark = if r.holds() { "" } else { " !" };
                format!("{:>8}{mark}", format_q(&r.exact_tail))
            })
            .collect();
        println!("s = {s:>2}: {}", cells.join("  "));
    }
    Ok(())
}
