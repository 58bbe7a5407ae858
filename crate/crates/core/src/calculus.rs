//! Derivative operators `D_P` and the constructor of a low-degree function
//! with prescribed derivatives along every shifted sorted tuple.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, SliceError};
use crate::harmonic::{and_function, psi_function, psi_value};
use crate::rational::{common_denominator, format_q, is_dyadic, parse_q, Q};
use crate::slice::{inner_product, swap_bits, SliceDomain, SliceFunction};
use crate::tuples::{enumerate_shifted_sorted, expand_to_shifted_sorted, lex_cmp, KTuple};

/// `D_P f = E_{T ⊆ P}[(−1)^{|T|} f^T]`, where `f^T` swaps both endpoints of
/// every pair in `T`.
pub fn derivative(f: &SliceFunction, p: &KTuple) -> Result<SliceFunction> {
    let dom = f.domain();
    p.validate(dom.n())?;
    let k = p.len();
    if k == 0 {
        return Ok(f.clone());
    }
    // Signed sums run over integers scaled by the common denominator.
    let den = common_denominator(f.values());
    let ints: Vec<BigInt> = f
        .values()
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    let scale = Q::from_integer(den << k);
    let small: Option<Vec<i64>> = ints
        .iter()
        .map(|v| v.to_i64().filter(|x| x.unsigned_abs() < 1 << 56))
        .collect();
    let orbit = |x: u64, sub: u32| {
        let mut y = x;
        for (i, &(a, b)) in p.pairs().iter().enumerate() {
            if sub >> i & 1 == 1 {
                y = swap_bits(y, a, b);
            }
        }
        (dom.index_of(y), sub.count_ones() % 2 == 0)
    };
    let values = match small {
        Some(small) => dom
            .elements()
            .iter()
            .map(|&x| {
                let mut acc = 0i64;
                for sub in 0u32..(1 << k) {
                    let (idx, even) = orbit(x, sub);
                    acc += if even { small[idx] } else { -small[idx] };
                }
                Q::from_integer(acc.into()) / &scale
            })
            .collect(),
        None => dom
            .elements()
            .iter()
            .map(|&x| {
                let mut acc = BigInt::zero();
                for sub in 0u32..(1 << k) {
                    let (idx, even) = orbit(x, sub);
                    if even {
                        acc += &ints[idx];
                    } else {
                        acc -= &ints[idx];
                    }
                }
                Q::from_integer(acc) / &scale
            })
            .collect(),
    };
    SliceFunction::new(Arc::clone(dom), values)
}

/// `D_{ij} f = (f − f^{(i j)}) / 2`.
pub fn derivative_pair(f: &SliceFunction, i: usize, j: usize) -> Result<SliceFunction> {
    if i == j {
        f.domain().coord_mask(&[i])?;
        return Ok(SliceFunction::zero(f.domain()));
    }
    derivative(f, &KTuple::new(&[(i.min(j), i.max(j))])?)
}

/// The `t` with `g = t Ψ_P`, checked pointwise.
pub fn extract_multiple(g: &SliceFunction, p: &KTuple) -> Result<Q> {
    let psi = psi_function(g.domain(), p)?;
    let norm = psi.norm_sq();
    let t = if norm.is_zero() {
        Q::zero()
    } else {
        inner_product(g, &psi)? / norm
    };
    let ok = g
        .values()
        .iter()
        .zip(psi.values())
        .all(|(v, s)| *v == &t * s);
    if ok {
        Ok(t)
    } else {
        Err(SliceError::NotAMultiple(p.to_string()))
    }
}

/// Prescribed values `z(P) ∈ 2^{−l} Z` on every shifted sorted `l`-tuple over
/// `[n]`, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeAssignment {
    n: usize,
    level: usize,
    entries: Vec<(KTuple, Q)>,
}

impl DerivativeAssignment {
    /// Builds an assignment from `(tuple, value)` pairs; every shifted sorted
    /// `level`-tuple must appear exactly once.
    pub fn new(n: usize, level: usize, values: impl IntoIterator<Item = (KTuple, Q)>) -> Result<Self> {
        let mut given: BTreeMap<Vec<(usize, usize)>, Q> = BTreeMap::new();
        for (p, v) in values {
            if p.len() != level {
                return Err(SliceError::InvalidTuple(format!(
                    "{p} has order {}, expected {level}",
                    p.len()
                )));
            }
            if !is_dyadic(&v, level) {
                return Err(SliceError::Precondition(format!(
                    "value {} for {p} is not in 2^-{level} Z",
                    format_q(&v)
                )));
            }
            if given.insert(p.pairs().to_vec(), v).is_some() {
                return Err(SliceError::InvalidTuple(format!("{p} assigned twice")));
            }
        }
        let keys = enumerate_shifted_sorted(n, level);
        let mut entries = Vec::with_capacity(keys.len());
        for p in keys {
            match given.remove(p.pairs()) {
                Some(v) => entries.push((p, v)),
                None => {
                    return Err(SliceError::InvalidTuple(format!("{p} has no value")));
                }
            }
        }
        if let Some((extra, _)) = given.into_iter().next() {
            let p = KTuple::new(&extra)?;
            return Err(SliceError::InvalidTuple(format!(
                "{p} is not a shifted sorted tuple over [{n}]"
            )));
        }
        Ok(DerivativeAssignment { n, level, entries })
    }

    pub fn from_fn(n: usize, level: usize, mut z: impl FnMut(&KTuple) -> Q) -> Result<Self> {
        let values: Vec<(KTuple, Q)> = enumerate_shifted_sorted(n, level)
            .into_iter()
            .map(|p| {
                let v = z(&p);
                (p, v)
            })
            .collect();
        Self::new(n, level, values)
    }

    pub fn zero(n: usize, level: usize) -> Self {
        Self::from_fn(n, level, |_| Q::zero()).expect("zero is dyadic")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn entries(&self) -> &[(KTuple, Q)] {
        &self.entries
    }

    pub fn get(&self, p: &KTuple) -> Option<&Q> {
        self.entries
            .binary_search_by(|(q, _)| lex_cmp(q, p))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Text form: one `tuple := p/q` line per entry.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(p, v)| format!("{p} := {}\n", format_q(v)))
            .collect()
    }

    /// Parses the text form. Blank lines and lines starting with `#` are
    /// skipped; the level is taken from the tuples.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut values = Vec::new();
        let mut level = None;
        let mut offset = 0;
        for line in text.lines() {
            let trimmed = line.trim();
            let line_start = offset;
            offset += line.len() + 1;
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = trimmed.split_once(":=").ok_or(SliceError::Parse {
                pos: line_start,
                msg: "expected 'tuple := value'".into(),
            })?;
            let p = KTuple::parse(lhs).map_err(|e| shift_parse_error(e, line_start))?;
            let v = parse_q(rhs).map_err(|e| shift_parse_error(e, line_start))?;
            level.get_or_insert(p.len());
            values.push((p, v));
        }
        Self::new(n, level.unwrap_or(0), values)
    }
}

fn shift_parse_error(e: SliceError, by: usize) -> SliceError {
    match e {
        SliceError::Parse { pos, msg } => SliceError::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// Builds `f` of degree at most `l` with `D_P f = z(P) Ψ_P` for every shifted
/// sorted `l`-tuple `P`.
///
/// Tuples are visited in lexicographic order. With `g_P = AND_{B_P}`, the
/// matrix `C_ij = D_{P_j} g_{P_i}` is upper triangular with diagonal
/// `2^{−l} Ψ_{P_i}`, so each step fixes one derivative without disturbing the
/// earlier ones. The diagonal is checked at every step and every prescribed
/// derivative is re-checked once the sweep ends.
pub fn build_from_derivatives(
    domain: &Arc<SliceDomain>,
    z: &DerivativeAssignment,
) -> Result<SliceFunction> {
    let l = z.level();
    if z.n() != domain.n() {
        return Err(SliceError::SizeMismatch {
            expected: domain.n(),
            got: z.n(),
        });
    }
    if 2 * l > domain.n() || l > domain.ell() {
        return Err(SliceError::Precondition(format!(
            "level {l} needs 2l <= n and l <= ell on {domain:?}"
        )));
    }
    let two_l = Q::from_integer(BigInt::one() << l);
    let diag_scale = Q::new(BigInt::one(), BigInt::one() << l);
    let mut f = SliceFunction::zero(domain);
    let mut psis = Vec::with_capacity(z.entries().len());
    for (p, target) in z.entries() {
        let g = and_function(domain, &p.b_set())?;
        let psi = psi_function(domain, p)?;
        if derivative(&g, p)? != psi.scale(&diag_scale) {
            return Err(SliceError::TriangularityViolation(format!("diagonal entry {p}")));
        }
        let t = extract_multiple(&derivative(&f, p)?, p)?;
        let coeff = &two_l * (target - &t);
        if !coeff.is_zero() {
            f = &f + &g.scale(&coeff);
        }
        psis.push(psi);
    }
    // Later monomials must not disturb earlier derivatives.
    for ((p, target), psi) in z.entries().iter().zip(&psis) {
        if derivative(&f, p)? != psi.scale(target) {
            return Err(SliceError::TriangularityViolation(format!(
                "derivative along {p} changed after its step"
            )));
        }
    }
    Ok(f)
}

/// `Σ_i z(P_i) Ψ_{P_i}(x^{π_i})` over the shifted sorted expansion of `Q`:
/// the derivative `D_Q f` forced by the assignment on any `f` of degree at
/// most `l` that realises it.
pub fn implied_derivative(
    domain: &Arc<SliceDomain>,
    z: &DerivativeAssignment,
    q: &KTuple,
) -> Result<SliceFunction> {
    if q.len() != z.level() {
        return Err(SliceError::InvalidTuple(format!(
            "{q} has order {}, expected {}",
            q.len(),
            z.level()
        )));
    }
    let leaves = expand_to_shifted_sorted(q, domain.n())?;
    let mut weights = Vec::with_capacity(leaves.len());
    for leaf in &leaves {
        let v = z.get(&leaf.tuple).ok_or_else(|| {
            SliceError::InvalidTuple(format!("{} missing from assignment", leaf.tuple))
        })?;
        weights.push(v.clone());
    }
    Ok(SliceFunction::from_fn(domain, |x| {
        leaves
            .iter()
            .zip(&weights)
            .fold(Q::zero(), |acc, (leaf, w)| {
                acc + w * Q::from_integer(psi_value(&leaf.tuple, leaf.perm.act(x)).into())
            })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};
    use crate::slice::{apply_transposition, make_domain};

    fn t(pairs: &[(usize, usize)]) -> KTuple {
        KTuple::new(pairs).unwrap()
    }

    #[test]
    fn first_order_derivative() {
        let d = make_domain(4, 2).unwrap();
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        let x2 = SliceFunction::dictator(&d, 2).unwrap();
        let got = derivative(&x1, &t(&[(1, 2)])).unwrap();
        assert_eq!(got, (&x1 - &x2).scale(&frac(1, 2)));
        let swapped = apply_transposition(&x1, 1, 2).unwrap();
        assert_eq!(got, (&x1 - &swapped).scale(&frac(1, 2)));
        assert_eq!(derivative(&x1, &KTuple::empty()).unwrap(), x1);
    }

    #[test]
    fn second_order_matrix_entries() {
        let d = make_domain(5, 2).unwrap();
        let and24 = and_function(&d, &[2, 4]).unwrap();
        let x = |i| SliceFunction::dictator(&d, i).unwrap();
        let c11 = derivative(&and24, &t(&[(1, 2), (3, 4)])).unwrap();
        let want = (&x(2) - &x(1))
            .pointwise_mul(&(&x(4) - &x(3)))
            .unwrap()
            .scale(&frac(1, 4));
        assert_eq!(c11, want);
        let c15 = derivative(&and24, &t(&[(1, 4), (2, 5)])).unwrap();
        let want = (&x(4) - &x(1))
            .pointwise_mul(&(&x(2) - &x(5)))
            .unwrap()
            .scale(&frac(1, 4));
        assert_eq!(c15, want);
    }

    #[test]
    fn extraction() {
        let d = make_domain(5, 2).unwrap();
        let p = t(&[(1, 2), (3, 4)]);
        let psi = psi_function(&d, &p).unwrap();
        assert_eq!(extract_multiple(&psi.scale(&frac(1, 2)), &p).unwrap(), frac(1, 2));
        assert_eq!(extract_multiple(&SliceFunction::zero(&d), &p).unwrap(), q(0));
        assert_eq!(extract_multiple(&psi.scale(&q(-3)), &p).unwrap(), q(-3));
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        assert!(matches!(
            extract_multiple(&x1, &p),
            Err(SliceError::NotAMultiple(_))
        ));
    }

    #[test]
    fn constructor_examples() {
        let d = make_domain(5, 2).unwrap();
        let zero = DerivativeAssignment::zero(5, 2);
        assert!(build_from_derivatives(&d, &zero).unwrap().is_zero());

        let first = t(&[(1, 2), (3, 4)]);
        let z = DerivativeAssignment::from_fn(5, 2, |p| if *p == first { q(1) } else { q(0) })
            .unwrap();
        let f = build_from_derivatives(&d, &z).unwrap();
        let want = &and_function(&d, &[2, 4]).unwrap().scale(&q(4))
            + &and_function(&d, &[4, 5]).unwrap().scale(&q(4));
        assert_eq!(f, want);
        for (p, v) in z.entries() {
            let psi = psi_function(&d, p).unwrap();
            assert_eq!(derivative(&f, p).unwrap(), psi.scale(v));
        }

        let d = make_domain(6, 3).unwrap();
        let z = DerivativeAssignment::from_fn(6, 1, |_| frac(-1, 2)).unwrap();
        let f = build_from_derivatives(&d, &z).unwrap();
        let want = &SliceFunction::dictator(&d, 1).unwrap() - &SliceFunction::constant(&d, q(3));
        assert_eq!(f, want);
    }

    #[test]
    fn assignment_validation_and_text() {
        assert!(DerivativeAssignment::from_fn(5, 2, |_| frac(1, 8)).is_err());
        assert!(DerivativeAssignment::new(5, 1, vec![(t(&[(1, 2)]), q(1))]).is_err());
        let z = DerivativeAssignment::from_fn(5, 2, |p| frac(p.b_set()[1] as i64, 4)).unwrap();
        let text = z.to_text();
        assert!(text.starts_with("(1,2)(3,4) := 1/1\n"));
        assert_eq!(DerivativeAssignment::parse(&text, 5).unwrap(), z);
        assert!(matches!(
            DerivativeAssignment::parse("(1,2)(3,4) = 1", 5),
            Err(SliceError::Parse { .. })
        ));
    }

    #[test]
    fn implied_values_match_built_function() {
        let d = make_domain(6, 3).unwrap();
        let z = DerivativeAssignment::from_fn(6, 2, |p| frac(p.b_set()[0] as i64 - 3, 4)).unwrap();
        let f = build_from_derivatives(&d, &z).unwrap();
        for q2 in crate::tuples::all_tuples(6, 2) {
            assert_eq!(
                derivative(&f, &q2).unwrap(),
                implied_derivative(&d, &z, &q2).unwrap(),
                "{q2}"
            );
        }
    }
}
