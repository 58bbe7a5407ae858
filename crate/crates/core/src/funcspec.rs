//! A small generator language for building functions from the command line.
//!
//! ```text
//! const:<rational> | dictator:<i> | and:<i,j,...> | psi:<tuple> | chi:<i,j,...>
//! | maj | parity:<i,j,...> | random-bool:<seed> | random-rat:<seed> | file:<path>
//! ```
//!
//! `psi` and `chi` exist only on the slice, `parity` only on the cube. On a
//! slice `maj` is the majority of coordinates 1..3, since a majority of all
//! coordinates would be constant there.

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::CubeFunction;
use crate::error::{Result, SliceError};
use crate::harmonic::{and_function, chi_function, psi_function};
use crate::io::{read_cube, read_slice};
use crate::rational::{frac, parse_q, Q};
use crate::slice::{SliceDomain, SliceFunction};
use crate::tuples::KTuple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Const(Q),
    Dictator(usize),
    And(Vec<usize>),
    Psi(KTuple),
    Chi(Vec<usize>),
    Maj,
    Parity(Vec<usize>),
    RandomBool(u64),
    RandomRat(u64),
    File(PathBuf),
}

fn parse_error(pos: usize, msg: impl Into<String>) -> SliceError {
    SliceError::Parse {
        pos,
        msg: msg.into(),
    }
}

fn parse_coords(body: &str, offset: usize) -> Result<Vec<usize>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = offset;
    for part in body.split(',') {
        let lead = part.len() - part.trim_start().len();
        let v = part
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_error(pos + lead, format!("expected a coordinate, found {:?}", part.trim())))?;
        out.push(v);
        pos += part.len() + 1;
    }
    Ok(out)
}

fn parse_seed(body: &str, offset: usize) -> Result<u64> {
    body.trim()
        .parse()
        .map_err(|_| parse_error(offset, format!("expected an unsigned seed, found {body:?}")))
}

fn shift(e: SliceError, offset: usize) -> SliceError {
    match e {
        SliceError::Parse { pos, msg } => SliceError::Parse {
            pos: pos + offset,
            msg,
        },
        other => other,
    }
}

impl FunctionSpec {
    /// Parses one generator expression. Error positions are byte offsets
    /// into `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let lead = text.len() - text.trim_start().len();
        let t = text.trim();
        if t == "maj" {
            return Ok(FunctionSpec::Maj);
        }
        let Some(colon) = t.find(':') else {
            return Err(parse_error(lead, format!("unknown generator {t:?}")));
        };
        let (head, body) = (&t[..colon], &t[colon + 1..]);
        let at = lead + colon + 1;
        match head {
            "const" => parse_q(body).map(FunctionSpec::Const).map_err(|e| shift(e, at)),
            "dictator" => {
                let coords = parse_coords(body, at)?;
                match coords.as_slice() {
                    [i] => Ok(FunctionSpec::Dictator(*i)),
                    _ => Err(parse_error(at, "dictator takes exactly one coordinate")),
                }
            }
            "and" => parse_coords(body, at).map(FunctionSpec::And),
            "chi" => parse_coords(body, at).map(FunctionSpec::Chi),
            "parity" => parse_coords(body, at).map(FunctionSpec::Parity),
            "psi" => KTuple::parse(body).map(FunctionSpec::Psi).map_err(|e| shift(e, at)),
            "random-bool" => parse_seed(body, at).map(FunctionSpec::RandomBool),
            "random-rat" => parse_seed(body, at).map(FunctionSpec::RandomRat),
            "file" if !body.is_empty() => Ok(FunctionSpec::File(PathBuf::from(body))),
            "file" => Err(parse_error(at, "missing path")),
            _ => Err(parse_error(lead, format!("unknown generator {head:?}"))),
        }
    }

    pub fn build_slice(&self, domain: &Arc<SliceDomain>) -> Result<SliceFunction> {
        match self {
            FunctionSpec::Const(c) => Ok(SliceFunction::constant(domain, c.clone())),
            FunctionSpec::Dictator(i) => SliceFunction::dictator(domain, *i),
            FunctionSpec::And(coords) => and_function(domain, coords),
            FunctionSpec::Psi(p) => psi_function(domain, p),
            FunctionSpec::Chi(coords) => chi_function(domain, coords),
            FunctionSpec::Maj => {
                let m = domain.coord_mask(&[1, 2, 3])?;
                Ok(SliceFunction::from_fn(domain, |x| {
                    Q::from_integer(((x & m).count_ones() >= 2).into())
                }))
            }
            FunctionSpec::Parity(_) => Err(SliceError::Precondition(
                "parity is only defined on the cube".into(),
            )),
            FunctionSpec::RandomBool(seed) => Ok(random_boolean(domain, *seed)),
            FunctionSpec::RandomRat(seed) => Ok(random_rational(domain, *seed)),
            FunctionSpec::File(path) => {
                let f = read_slice(path)?;
                if **f.domain() != **domain {
                    let d = f.domain();
                    return Err(SliceError::DomainMismatch(d.n(), d.ell(), domain.n(), domain.ell()));
                }
                Ok(f)
            }
        }
    }

    pub fn build_cube(&self, n: usize) -> Result<CubeFunction> {
        match self {
            FunctionSpec::Const(c) => CubeFunction::constant(n, c.clone()),
            FunctionSpec::Dictator(i) => CubeFunction::dictator(n, *i),
            FunctionSpec::And(coords) => {
                let m = crate::slice::coord_mask(n, coords)?;
                CubeFunction::from_fn(n, |x| Q::from_integer((x & m == m).into()))
            }
            FunctionSpec::Maj => CubeFunction::majority(n),
            FunctionSpec::Parity(coords) => CubeFunction::parity(n, coords),
            FunctionSpec::Psi(_) | FunctionSpec::Chi(_) => Err(SliceError::Precondition(
                "psi and chi are only defined on the slice".into(),
            )),
            FunctionSpec::RandomBool(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                CubeFunction::from_fn(n, |_| Q::from_integer(rng.random_bool(0.5).into()))
            }
            FunctionSpec::RandomRat(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                CubeFunction::from_fn(n, |_| random_value(&mut rng))
            }
            FunctionSpec::File(path) => {
                let f = read_cube(path)?;
                if f.n() != n {
                    return Err(SliceError::Precondition(format!(
                        "file holds a cube of dimension {}, expected {n}",
                        f.n()
                    )));
                }
                Ok(f)
            }
        }
    }
}

fn random_value(rng: &mut impl Rng) -> Q {
    frac(rng.random_range(-8..=8), rng.random_range(1..=6))
}

/// A uniformly random 0/1 function, reproducible from `seed`.
pub fn random_boolean(domain: &Arc<SliceDomain>, seed: u64) -> SliceFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SliceFunction::from_fn(domain, |_| Q::from_integer(rng.random_bool(0.5).into()))
}

/// Values `a/b` with `a ∈ [−8, 8]` and `b ∈ [1, 6]`, reproducible from `seed`.
pub fn random_rational(domain: &Arc<SliceDomain>, seed: u64) -> SliceFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SliceFunction::from_fn(domain, |_| random_value(&mut rng))
}

/// Parses `text` and builds the slice function it names.
pub fn slice_from_spec(text: &str, domain: &Arc<SliceDomain>) -> Result<SliceFunction> {
    FunctionSpec::parse(text)?.build_slice(domain)
}

/// Parses `text` and builds the cube function it names.
pub fn cube_from_spec(text: &str, n: usize) -> Result<CubeFunction> {
    FunctionSpec::parse(text)?.build_cube(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::slice::make_domain;

    #[test]
    fn worked_specs() {
        let d = make_domain(3, 1).unwrap();
        let f = slice_from_spec("dictator:1", &d).unwrap();
        assert_eq!(f.values(), &[q(1), q(0), q(0)]);

        let d = make_domain(4, 2).unwrap();
        let f = slice_from_spec("and:1,2", &d).unwrap();
        assert_eq!(f.support_size(), 1);
        assert_eq!(f.at(0b0011), &q(1));

        let f = slice_from_spec("const:7/3", &d).unwrap();
        assert!(f.values().iter().all(|v| *v == frac(7, 3)));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match FunctionSpec::parse("and:1,x") {
            Err(SliceError::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        match FunctionSpec::parse("  bogus:1") {
            Err(SliceError::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(FunctionSpec::parse("dictator:1,2").is_err());
        assert!(FunctionSpec::parse("psi:(1,2").is_err());
    }

    #[test]
    fn semantic_errors() {
        let d = make_domain(4, 2).unwrap();
        assert!(slice_from_spec("dictator:5", &d).is_err());
        assert!(slice_from_spec("parity:1,2", &d).is_err());
        assert!(cube_from_spec("psi:(1,2)", 3).is_err());
    }

    #[test]
    fn random_generators_are_reproducible() {
        let d = make_domain(6, 3).unwrap();
        assert_eq!(random_rational(&d, 9), random_rational(&d, 9));
        assert_ne!(random_rational(&d, 9), random_rational(&d, 10));
        assert!(random_boolean(&d, 3).is_boolean());
        assert_eq!(cube_from_spec("random-bool:4", 5).unwrap(), cube_from_spec("random-bool:4", 5).unwrap());
    }

    #[test]
    fn slice_majority_uses_first_three_coordinates() {
        let d = make_domain(5, 2).unwrap();
        let f = slice_from_spec("maj", &d).unwrap();
        assert_eq!(f.at(0b00011), &q(1));
        assert_eq!(f.at(0b11000), &q(0));
        assert_eq!(f.at(0b01001), &q(0));
    }
}
