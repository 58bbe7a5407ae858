//! Rewriting a tuple into shifted sorted tuples, with the termination measure
//! printed at every node.
//!
//! `cargo run --example shifting -- "(2,8)(6,7)" 8`

use slicekit::checks::expansion_identity;
use slicekit::funcspec::slice_from_spec;
use slicekit::tuples::{classify, expansion_tree};
use slicekit::{enumerate_shifted_sorted, make_domain, KTuple};

fn main() -> slicekit::Result<()> {
    let mut args = std::env::args().skip(1);
    let p = KTuple::parse(&args.next().unwrap_or_else(|| "(2,8)(6,7)".into()))?;
    let n: usize = args.next().map_or(8, |s| s.parse().expect("n must be an integer"));

    let c = classify(&p, n)?;
    println!("{p} on n = {n}: shifted = {}, sorted = {}", c.shifted, c.sorted);
    let tree = expansion_tree(&p, n)?;
    print!("{}", tree.render());
    println!("{} leaves, depth {}", tree.leaves().len(), tree.depth());

    let d = make_domain(n, n / 2)?;
    let f = slice_from_spec("random-rat:3", &d)?;
    println!("expansion identity on a random f: {}", expansion_identity(&f, &p)?.is_none());

    let k = p.len();
    let all = enumerate_shifted_sorted(n, k);
    println!("{} shifted sorted {k}-tuples on {n} coordinates", all.len());
    Ok(())
}
