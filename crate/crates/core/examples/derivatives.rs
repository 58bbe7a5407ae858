//! Derivatives along tuples of pairs and the identities they satisfy.
//!
//! `cargo run --example derivatives`

use slicekit::checks::{alter_identity, flip_identity, replacement_identity};
use slicekit::funcspec::slice_from_spec;
use slicekit::slice::inner_product;
use slicekit::{derivative, format_q, make_domain, KTuple};

fn main() -> slicekit::Result<()> {
    let d = make_domain(6, 3)?;
    let f = slice_from_spec("random-rat:1", &d)?;
    let g = slice_from_spec("random-rat:2", &d)?;

    for text in ["(1,2)", "(1,4)(2,5)", "(1,2)(3,4)(5,6)"] {
        let p = KTuple::parse(text)?;
        let df = derivative(&f, &p)?;
        let dg = derivative(&g, &p)?;
        println!("D{p}");
        println!("  idempotent:     {}", derivative(&df, &p)? == df);
        println!("  self-adjoint:   {}", inner_product(&df, &g)? == inner_product(&f, &dg)?);
        println!("  ||D f||^2 = {} <= ||f||^2 = {}", format_q(&df.norm_sq()), format_q(&f.norm_sq()));
    }

    // None of these report a failing point.
    println!("flip at (1,2,3,4):        {:?}", flip_identity(&f, [1, 2, 3, 4])?);
    println!("alter at (1,2,3):         {:?}", alter_identity(&f, [1, 2, 3])?);
    println!("replacement at (1,2,3):   {:?}", replacement_identity(&f, [1, 2, 3])?);
    Ok(())
}
