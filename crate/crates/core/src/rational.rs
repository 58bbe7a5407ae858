//! Arbitrary-precision rationals and the small amount of combinatorics the
//! rest of the crate leans on.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, SliceError};

pub use num_rational::BigRational;

/// Shorthand used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient as a big integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from((n - i) as u64) / BigUint::from((i + 1) as u64);
    }
    BigInt::from(acc)
}

pub fn binomial_q(n: i64, k: i64) -> Q {
    Q::from_integer(binomial(n, k))
}

/// Binomial coefficient as `u128`, saturating on overflow.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of doubles for very large components.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical text form: always `numerator/denominator`.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q`, `p`, or a finite decimal such as `-0.25`.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let err = |msg: &str| SliceError::Parse {
        pos: 0,
        msg: format!("{msg}: {text:?}"),
    };
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, dec)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| err("bad decimal"))?
        };
        if dec.is_empty() || !dec.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let scale = num_traits::pow(BigInt::from(10), dec.len());
        let frac_part: BigInt = dec.parse().map_err(|_| err("bad decimal"))?;
        let magnitude = Q::from_integer(int_part.abs()) + Q::new(frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| err("bad integer"))?;
    Ok(Q::from_integer(n))
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// True when `x` lies in `2^{-l} Z`.
pub fn is_dyadic(x: &Q, l: usize) -> bool {
    let scaled = x * Q::from_integer(BigInt::one() << l);
    scaled.is_integer()
}

/// A rational lower bound on `sqrt(x)` accurate to `2^{-bits}` relative to
/// the denominator, computed from an integer square root.
pub fn sqrt_lower(x: &Q, bits: usize) -> Q {
    assert!(!x.is_negative(), "square root of a negative rational");
    let scale = BigInt::one() << (2 * bits);
    let radicand = x.numer() * x.denom() * scale;
    let root = radicand.sqrt();
    Q::new(root, x.denom() * (BigInt::one() << bits))
}

/// A rational upper bound on `sqrt(x)` matching [`sqrt_lower`].
pub fn sqrt_upper(x: &Q, bits: usize) -> Q {
    let lo = sqrt_lower(x, bits);
    if &(&lo * &lo) == x {
        return lo;
    }
    lo + Q::new(BigInt::one(), x.denom() * (BigInt::one() << bits))
}
