//! Building a function from prescribed derivatives along shifted sorted
//! tuples, then reading the derivatives back.
//!
//! `cargo run --example constructor`

use slicekit::calculus::implied_derivative;
use slicekit::harmonic::degree;
use slicekit::rational::frac;
use slicekit::tuples::all_tuples;
use slicekit::{build_from_derivatives, derivative, make_domain, DerivativeAssignment};

fn main() -> slicekit::Result<()> {
    let (n, ell, l) = (7, 3, 2);
    let d = make_domain(n, ell)?;
    let mut next = 0i64;
    let z = DerivativeAssignment::from_fn(n, l, |_| {
        next = (next * 5 + 3) % 9;
        frac(next - 4, 4)
    })?;
    println!("assignment:\n{}", z.to_text());

    let f = build_from_derivatives(&d, &z)?;
    println!("degree of the result: {}", degree(&f)?);

    let mut agree = 0;
    let tuples = all_tuples(n, l);
    for p in &tuples {
        let scale = implied_derivative(&d, &z, p)?;
        if derivative(&f, p)? == scale {
            agree += 1;
        }
    }
    println!("{agree} of {} {l}-tuples carry the implied derivative", tuples.len());
    Ok(())
}
