//! Approximating a noisy dictator by a Boolean degree-1 function.
//!
//! `cargo run --example approximation`

use slicekit::structure::flip_point;
use slicekit::{approximate, format_q, make_domain, SliceFunction};

fn main() -> slicekit::Result<()> {
    let d = make_domain(9, 3)?;
    let x1 = SliceFunction::dictator(&d, 1)?;
    let f = flip_point(&x1, 0b111)?;
    let r = approximate(&f, 1)?;

    println!("distance from f to g: {}", format_q(&r.distance));
    println!("g is Boolean: {}", r.is_boolean);
    println!("g = x1: {}", r.g == x1);
    for step in &r.steps {
        let nonzero = step.coefficients.iter().filter(|c| !num_traits::Zero::is_zero(&c.c)).count();
        println!("level {}: {nonzero} nonzero coefficients", step.level);
    }
    Ok(())
}
