//! Level decomposition on the slice.
//!
//! `L_k` is the span of the monomials `AND_T` with `|T| <= k`. Projections are
//! exact: the Gram matrix of the monomials has the closed form
//! `⟨AND_S, AND_T⟩ = C(n − |S∪T|, ell − |S∪T|) / C(n, ell)`, a maximal
//! independent set of monomials is picked by fraction-free elimination, and
//! the inverse of the reduced Gram matrix is cached per `(n, ell, k)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combin::{mask_of, subsets_up_to};
use crate::error::{Result, SliceError};
use crate::linalg::{inverse, pivot_columns, rank};
use crate::rational::{binomial, binomial_q, common_denominator, factorial, format_q, to_f64, Q};
use crate::slice::{bit, SliceDomain, SliceFunction};
use crate::tuples::{all_tuples, KTuple};

/// `AND_T`: the product of the coordinates in `T`.
pub fn and_function(domain: &Arc<SliceDomain>, coords: &[usize]) -> Result<SliceFunction> {
    let t = domain.coord_mask(coords)?;
    Ok(SliceFunction::from_fn(domain, |x| indicator(x & t == t)))
}

fn indicator(b: bool) -> Q {
    if b {
        Q::one()
    } else {
        Q::zero()
    }
}

/// `Ψ_P(x) = ∏ (x_b − x_a)` over the pairs of `P`.
pub fn psi_function(domain: &Arc<SliceDomain>, p: &KTuple) -> Result<SliceFunction> {
    p.validate(domain.n())?;
    Ok(SliceFunction::from_fn(domain, |x| Q::from_integer(psi_value(p, x).into())))
}

/// `Ψ_P(x)` as an integer in `{−1, 0, 1}`.
pub fn psi_value(p: &KTuple, x: u64) -> i64 {
    let mut v = 1i64;
    for &(a, b) in p.pairs() {
        v *= bit(x, b) as i64 - bit(x, a) as i64;
        if v == 0 {
            return 0;
        }
    }
    v
}

/// `χ_B = Σ Ψ_P` over all `|B|`-tuples `P` whose set of upper endpoints is `B`.
pub fn chi_function(domain: &Arc<SliceDomain>, coords: &[usize]) -> Result<SliceFunction> {
    let bmask = domain.coord_mask(coords)?;
    let mut bs: Vec<usize> = coords.to_vec();
    bs.sort_unstable();
    bs.dedup();
    let mut tuples = Vec::new();
    lower_endpoints(&bs, 0, bmask, &mut Vec::new(), &mut tuples);
    let mut values = vec![0i64; domain.len()];
    for pairs in &tuples {
        let p = KTuple::new(pairs)?;
        for (v, &x) in values.iter_mut().zip(domain.elements()) {
            *v += psi_value(&p, x);
        }
    }
    SliceFunction::new(
        Arc::clone(domain),
        values.into_iter().map(|v| Q::from_integer(v.into())).collect(),
    )
}

fn lower_endpoints(
    bs: &[usize],
    i: usize,
    used: u64,
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if i == bs.len() {
        out.push(cur.clone());
        return;
    }
    let b = bs[i];
    for a in 1..b {
        if used >> (a - 1) & 1 == 0 {
            cur.push((a, b));
            lower_endpoints(bs, i + 1, used | 1 << (a - 1), cur, out);
            cur.pop();
        }
    }
}

/// Squared norms `‖f^{=d}‖²` of the level parts, indexed by `d = 0..=ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelWeights {
    pub weights: Vec<Q>,
}

impl LevelWeights {
    pub fn total(&self) -> Q {
        self.weights.iter().fold(Q::zero(), |a, w| a + w)
    }

    /// `‖f^{>k}‖²`.
    pub fn above(&self, k: usize) -> Q {
        self.weights.iter().skip(k + 1).fold(Q::zero(), |a, w| a + w)
    }

    /// `‖f^{≤k}‖²`.
    pub fn up_to(&self, k: usize) -> Q {
        self.weights.iter().take(k + 1).fold(Q::zero(), |a, w| a + w)
    }

    /// Rows of `(level, exact, float)`.
    pub fn table(&self) -> Vec<(usize, String, f64)> {
        self.weights
            .iter()
            .enumerate()
            .map(|(d, w)| (d, format_q(w), to_f64(w)))
            .collect()
    }
}

/// Highest level that can carry weight on `slice(n, ell)`.
pub fn top_level(domain: &SliceDomain) -> usize {
    domain.ell().min(domain.n() - domain.ell())
}

/// Cached data for the projection onto `L_k`.
///
/// With `A` the integer matrix `C(n−|S∪T|, ell−|S∪T|)` restricted to a basis
/// of monomials, the projection coefficients are `A^{-1} s / D` where `s` holds
/// the integer sums `Σ_{x ⊇ T} D f(x)`.
pub struct LevelProjector {
    n: usize,
    ell: usize,
    k: usize,
    basis: Vec<u64>,
    // A^{-1} = inv_num / inv_den.
    inv_num: Vec<Vec<BigInt>>,
    inv_den: BigInt,
}

impl LevelProjector {
    fn build(n: usize, ell: usize, k: usize) -> Self {
        let gens: Vec<u64> = subsets_up_to(n, k).iter().map(|s| mask_of(s)).collect();
        let entry = |s: u64, t: u64| {
            let u = (s | t).count_ones() as i64;
            binomial_q(n as i64 - u, ell as i64 - u)
        };
        let full: Vec<Vec<Q>> = gens
            .iter()
            .map(|&s| gens.iter().map(|&t| entry(s, t)).collect())
            .collect();
        let pivots = pivot_columns(&full);
        let basis: Vec<u64> = pivots.iter().map(|&c| gens[c]).collect();
        let reduced: Vec<Vec<Q>> = basis
            .iter()
            .map(|&s| basis.iter().map(|&t| entry(s, t)).collect())
            .collect();
        let inv = inverse(&reduced).expect("Gram matrix on a basis is nonsingular");
        let inv_den = common_denominator(inv.iter().flatten());
        let inv_num = inv
            .iter()
            .map(|row| row.iter().map(|v| v.numer() * (&inv_den / v.denom())).collect())
            .collect();
        LevelProjector {
            n,
            ell,
            k,
            basis,
            inv_num,
            inv_den,
        }
    }

    /// `dim L_k`.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn level(&self) -> usize {
        self.k
    }

    /// Monomials (as masks) spanning `L_k` independently.
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    fn check(&self, f: &SliceFunction) -> Result<()> {
        let d = f.domain();
        if d.n() != self.n || d.ell() != self.ell {
            return Err(SliceError::DomainMismatch(d.n(), d.ell(), self.n, self.ell));
        }
        Ok(())
    }

    /// Returns `(coefficients numerators c, common denominator)` such that the
    /// projection is `Σ_T (c_T / den) AND_T`.
    fn coefficients(&self, f: &SliceFunction) -> (Vec<BigInt>, BigInt, Vec<BigInt>) {
        let (ints, scale) = integer_view(f);
        let mut sums = vec![BigInt::zero(); self.basis.len()];
        for (&x, v) in f.domain().elements().iter().zip(&ints) {
            if v.is_zero() {
                continue;
            }
            for (s, &t) in sums.iter_mut().zip(&self.basis) {
                if x & t == t {
                    *s += v;
                }
            }
        }
        let coeffs: Vec<BigInt> = self
            .inv_num
            .iter()
            .map(|row| row.iter().zip(&sums).map(|(a, s)| a * s).sum())
            .collect();
        (coeffs, &self.inv_den * scale, sums)
    }

    /// `‖proj_{L_k} f‖²`, without materialising the projection.
    pub fn weight(&self, f: &SliceFunction) -> Result<Q> {
        self.check(f)?;
        let (coeffs, den, sums) = self.coefficients(f);
        let (_, scale) = integer_view(f);
        let dot: BigInt = coeffs.iter().zip(&sums).map(|(c, s)| c * s).sum();
        let n_points = BigInt::from(f.domain().len());
        Ok(Q::new(dot, den * scale * n_points))
    }

    /// `proj_{L_k} f`.
    pub fn project(&self, f: &SliceFunction) -> Result<SliceFunction> {
        self.check(f)?;
        let (coeffs, den, _) = self.coefficients(f);
        let den = Q::from_integer(den);
        Ok(SliceFunction::from_fn(f.domain(), |x| {
            let num: BigInt = self
                .basis
                .iter()
                .zip(&coeffs)
                .filter(|(&t, _)| x & t == t)
                .map(|(_, c)| c)
                .sum();
            Q::from_integer(num) / &den
        }))
    }
}

/// Values scaled to integers by their common denominator.
fn integer_view(f: &SliceFunction) -> (Vec<BigInt>, BigInt) {
    let d = common_denominator(f.values());
    let ints = f
        .values()
        .iter()
        .map(|v| v.numer() * (&d / v.denom()))
        .collect();
    (ints, d)
}

type ProjectorCache = RwLock<HashMap<(usize, usize, usize), Arc<LevelProjector>>>;

fn cache() -> &'static ProjectorCache {
    static CACHE: OnceLock<ProjectorCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared projector onto `L_k` for `slice(n, ell)`.
pub fn level_projector(domain: &SliceDomain, k: usize) -> Arc<LevelProjector> {
    let key = (domain.n(), domain.ell(), k);
    if let Some(p) = cache().read().expect("projector cache poisoned").get(&key) {
        return Arc::clone(p);
    }
    let built = Arc::new(LevelProjector::build(key.0, key.1, k));
    let mut w = cache().write().expect("projector cache poisoned");
    Arc::clone(w.entry(key).or_insert(built))
}

/// `f^{≤k}`.
pub fn project_low(f: &SliceFunction, k: usize) -> Result<SliceFunction> {
    if k >= top_level(f.domain()) {
        return Ok(f.clone());
    }
    level_projector(f.domain(), k).project(f)
}

/// `‖f^{≤k}‖²`.
pub fn weight_up_to(f: &SliceFunction, k: usize) -> Result<Q> {
    if k >= top_level(f.domain()) {
        return Ok(f.norm_sq());
    }
    level_projector(f.domain(), k).weight(f)
}

/// `‖f^{>k}‖²`.
pub fn weight_above(f: &SliceFunction, k: usize) -> Result<Q> {
    Ok(f.norm_sq() - weight_up_to(f, k)?)
}

/// The full decomposition returned by [`project_levels`].
#[derive(Clone, Debug)]
pub struct LevelDecomposition {
    /// `f^{≤k}`.
    pub low: SliceFunction,
    /// `f − f^{≤k}`.
    pub high: SliceFunction,
    /// `f^{=d}` for `d = 0..=ell`.
    pub parts: Vec<SliceFunction>,
    pub weights: LevelWeights,
    /// Least `d` with `f^{>d} = 0`.
    pub degree: usize,
}

/// Splits `f` into its level parts and its projection onto `L_k`.
pub fn project_levels(f: &SliceFunction, k: usize) -> Result<LevelDecomposition> {
    let dom = f.domain();
    if k > dom.ell() {
        return Err(SliceError::LevelOutOfRange { k, max: dom.ell() });
    }
    let top = top_level(dom);
    let mut parts = Vec::with_capacity(dom.ell() + 1);
    let mut prev = SliceFunction::zero(dom);
    for d in 0..=dom.ell() {
        if d > top {
            parts.push(SliceFunction::zero(dom));
            continue;
        }
        let cur = project_low(f, d)?;
        parts.push(&cur - &prev);
        prev = cur;
    }
    let weights = LevelWeights {
        weights: parts.iter().map(SliceFunction::norm_sq).collect(),
    };
    let degree = parts.iter().rposition(|p| !p.is_zero()).unwrap_or(0);
    let low = parts
        .iter()
        .take(k + 1)
        .fold(SliceFunction::zero(dom), |acc, p| &acc + p);
    let high = f - &low;
    Ok(LevelDecomposition {
        low,
        high,
        parts,
        weights,
        degree,
    })
}

/// Level weights alone.
pub fn level_weights(f: &SliceFunction) -> Result<LevelWeights> {
    let dom = f.domain();
    let top = top_level(dom);
    let mut weights = Vec::with_capacity(dom.ell() + 1);
    let mut prev = Q::zero();
    for d in 0..=dom.ell() {
        if d > top {
            weights.push(Q::zero());
            continue;
        }
        let cur = weight_up_to(f, d)?;
        weights.push(&cur - &prev);
        prev = cur;
    }
    Ok(LevelWeights { weights })
}

/// Least `d` such that `f` lies in `L_d`.
pub fn degree(f: &SliceFunction) -> Result<usize> {
    let norm = f.norm_sq();
    if norm.is_zero() {
        return Ok(0);
    }
    for d in 0..top_level(f.domain()) {
        if weight_up_to(f, d)? == norm {
            return Ok(d);
        }
    }
    Ok(top_level(f.domain()))
}

/// Generators of a subspace as evaluation rows, with their Gram matrix.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<Q>>,
    pub rank: usize,
}

impl SpanBasis {
    fn from_rows(labels: Vec<String>, rows: Vec<Vec<Q>>) -> Self {
        let rank = rank(&rows);
        SpanBasis { labels, rows, rank }
    }

    /// `G_{ij} = ⟨row_i, row_j⟩` under the uniform measure.
    pub fn gram(&self) -> Vec<Vec<Q>> {
        let len = Q::from_integer(self.rows.first().map_or(1, |r| r.len()).into());
        self.rows
            .iter()
            .map(|a| {
                self.rows
                    .iter()
                    .map(|b| a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x * y) / &len)
                    .collect()
            })
            .collect()
    }
}

/// The monomials `AND_T`, `|T| <= k`.
pub fn and_span(domain: &Arc<SliceDomain>, k: usize) -> Result<SpanBasis> {
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for t in subsets_up_to(domain.n(), k) {
        labels.push(format!("AND{t:?}"));
        rows.push(and_function(domain, &t)?.into_values());
    }
    Ok(SpanBasis::from_rows(labels, rows))
}

/// The functions `Ψ_Q`, `|Q| <= k`.
pub fn psi_span(domain: &Arc<SliceDomain>, k: usize) -> Result<SpanBasis> {
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for j in 0..=k {
        for q in all_tuples(domain.n(), j) {
            labels.push(format!("Psi{q}"));
            rows.push(psi_function(domain, &q)?.into_values());
        }
    }
    Ok(SpanBasis::from_rows(labels, rows))
}

/// Ranks of the two spanning families and whether each lies in the span of
/// the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub dim_and: usize,
    pub dim_psi: usize,
    pub dim_joint: usize,
}

impl SpanReport {
    /// Equal spans: both families have the rank of their union.
    pub fn spans_agree(&self) -> bool {
        self.dim_and == self.dim_joint && self.dim_psi == self.dim_joint
    }
}

pub fn span_dims_check(domain: &Arc<SliceDomain>, k: usize) -> Result<SpanReport> {
    let a = and_span(domain, k)?;
    let p = psi_span(domain, k)?;
    let joint: Vec<Vec<Q>> = a.rows.iter().chain(&p.rows).cloned().collect();
    Ok(SpanReport {
        dim_and: a.rank,
        dim_psi: p.rank,
        dim_joint: rank(&joint),
    })
}

/// Pointwise comparison of both sides of the compatibility identity.
#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub coords: Vec<usize>,
    pub points_checked: usize,
    /// `(point, left, right)` wherever the sides differ.
    pub mismatches: Vec<(u64, Q, Q)>,
}

impl CompatibilityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Left side: sum over all injective `a : T → [n] ∖ T` of
/// `∏_{b ∈ T} (x_b − x_{a(b)})`. Pairs with `a(b) > b` are the swapped,
/// negated ones, which is the same product.
pub fn compatibility_lhs(x: u64, n: usize, coords: &[usize]) -> i64 {
    let t = mask_of(coords);
    let outside: Vec<usize> = (1..=n).filter(|&c| t >> (c - 1) & 1 == 0).collect();
    fn rec(x: u64, bs: &[usize], outside: &[usize], used: u64, acc: i64) -> i64 {
        let Some((&b, rest)) = bs.split_first() else {
            return acc;
        };
        let mut total = 0;
        for &a in outside {
            if used >> (a - 1) & 1 == 1 {
                continue;
            }
            let factor = bit(x, b) as i64 - bit(x, a) as i64;
            if factor != 0 {
                total += rec(x, rest, outside, used | 1 << (a - 1), acc * factor);
            }
        }
        total
    }
    rec(x, coords, &outside, 0, 1)
}

/// Right side: `(−1)^{k−X} k! C(ell−X, k−X) C(n−ell−k+X, X) / C(k, X)` with
/// `X = Σ_{i∈T} x_i`.
pub fn compatibility_rhs(n: usize, ell: usize, k: usize, weight_in_t: usize) -> Q {
    let (n, ell, k, x) = (n as i64, ell as i64, k as i64, weight_in_t as i64);
    let sign = if (k - x) % 2 == 0 { 1 } else { -1 };
    let num = factorial(k as u64) * binomial(ell - x, k - x) * binomial(n - ell - k + x, x) * sign;
    Q::new(num, binomial(k, x))
}

pub fn compatibility_identity_check(
    domain: &Arc<SliceDomain>,
    coords: &[usize],
) -> Result<CompatibilityReport> {
    let t = domain.coord_mask(coords)?;
    let mut coords = coords.to_vec();
    coords.sort_unstable();
    coords.dedup();
    let k = coords.len();
    let mut mismatches = Vec::new();
    for &x in domain.elements() {
        let lhs = Q::from_integer(compatibility_lhs(x, domain.n(), &coords).into());
        let rhs = compatibility_rhs(domain.n(), domain.ell(), k, (x & t).count_ones() as usize);
        if lhs != rhs {
            mismatches.push((x, lhs, rhs));
        }
    }
    Ok(CompatibilityReport {
        coords,
        points_checked: domain.len(),
        mismatches,
    })
}

/// `Pr[Ψ_P(x) ≠ 0] = 2^k C(n−2k, ell−k) / C(n, ell)`.
pub fn psi_support_probability(domain: &SliceDomain, p: &KTuple) -> Result<Q> {
    p.validate(domain.n())?;
    let (n, ell, k) = (domain.n() as i64, domain.ell() as i64, p.len() as i64);
    let num = binomial(n - 2 * k, ell - k) << (k as usize);
    Ok(Q::new(num, binomial(n, ell)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};
    use crate::combin::subsets_of_size;
    use crate::slice::make_domain;

    #[test]
    fn and_examples() {
        let d = make_domain(3, 1).unwrap();
        assert_eq!(and_function(&d, &[]).unwrap(), SliceFunction::constant(&d, q(1)));
        assert_eq!(and_function(&d, &[1]).unwrap().values(), &[q(1), q(0), q(0)]);
        assert!(and_function(&d, &[1, 2]).unwrap().is_zero());
    }

    #[test]
    fn psi_and_chi_examples() {
        let d = make_domain(3, 1).unwrap();
        let p = KTuple::new(&[(1, 2)]).unwrap();
        // Elements are 001, 010, 100.
        assert_eq!(psi_function(&d, &p).unwrap().values(), &[q(-1), q(1), q(0)]);
        assert_eq!(
            psi_function(&d, &KTuple::empty()).unwrap(),
            SliceFunction::constant(&d, q(1))
        );

        let d = make_domain(5, 2).unwrap();
        assert!(chi_function(&d, &[1]).unwrap().is_zero());
        let x = |i| SliceFunction::dictator(&d, i).unwrap();
        assert_eq!(chi_function(&d, &[2]).unwrap(), &x(2) - &x(1));
        let want = &(&x(3) - &x(1)) + &(&x(3) - &x(2));
        assert_eq!(chi_function(&d, &[3]).unwrap(), want);
    }

    #[test]
    fn dictator_levels() {
        let d = make_domain(4, 2).unwrap();
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        let dec = project_levels(&x1, 1).unwrap();
        assert_eq!(dec.parts[0], SliceFunction::constant(&d, frac(1, 2)));
        assert_eq!(dec.weights.weights, vec![frac(1, 4), frac(1, 4), q(0)]);
        assert_eq!(dec.degree, 1);
        assert!(dec.high.is_zero());
        assert_eq!(degree(&x1).unwrap(), 1);
        assert_eq!(level_weights(&x1).unwrap(), dec.weights);
    }

    #[test]
    fn constant_levels() {
        let d = make_domain(5, 2).unwrap();
        let c = SliceFunction::constant(&d, frac(3, 7));
        let dec = project_levels(&c, 0).unwrap();
        assert_eq!(dec.parts[0], c);
        assert!(dec.parts[1..].iter().all(SliceFunction::is_zero));
        assert_eq!(dec.degree, 0);
        assert!(project_levels(&c, 3).is_err());
    }

    #[test]
    fn psi_degree_bounded_by_order() {
        let d = make_domain(6, 3).unwrap();
        let p = KTuple::new(&[(1, 2), (3, 4)]).unwrap();
        let psi = psi_function(&d, &p).unwrap();
        assert!(degree(&psi).unwrap() <= 2);
        assert!(weight_above(&psi, 2).unwrap().is_zero());
    }

    #[test]
    fn span_dimensions() {
        let d = make_domain(4, 2).unwrap();
        let r = span_dims_check(&d, 0).unwrap();
        assert_eq!((r.dim_and, r.dim_psi), (1, 1));
        let r = span_dims_check(&d, 1).unwrap();
        assert_eq!((r.dim_and, r.dim_psi), (4, 4));
        assert!(r.spans_agree());
        let r = span_dims_check(&make_domain(5, 2).unwrap(), 2).unwrap();
        assert!(r.spans_agree());
        assert_eq!(r.dim_and, 10);
        assert_eq!(level_projector(&make_domain(5, 2).unwrap(), 1).dimension(), 5);
    }

    #[test]
    fn compatibility_small_cases() {
        assert_eq!(compatibility_rhs(4, 2, 2, 0), q(2));
        assert_eq!(compatibility_rhs(4, 2, 2, 1), q(-1));
        assert_eq!(compatibility_rhs(4, 2, 2, 2), q(2));
        let d = make_domain(4, 2).unwrap();
        assert!(compatibility_identity_check(&d, &[1, 2]).unwrap().holds());
        assert!(compatibility_identity_check(&d, &[]).unwrap().holds());
        let d = make_domain(6, 3).unwrap();
        for t in subsets_of_size(6, 2) {
            assert!(compatibility_identity_check(&d, &t).unwrap().holds());
        }
    }

    #[test]
    fn support_probability() {
        let d = make_domain(4, 2).unwrap();
        let p = KTuple::new(&[(1, 2)]).unwrap();
        assert_eq!(psi_support_probability(&d, &p).unwrap(), frac(2, 3));
        assert_eq!(psi_support_probability(&d, &KTuple::empty()).unwrap(), q(1));
        let d = make_domain(7, 3).unwrap();
        let p = KTuple::new(&[(1, 5), (2, 3)]).unwrap();
        let psi = psi_function(&d, &p).unwrap();
        let brute = frac(psi.support_size() as i64, d.len() as i64);
        assert_eq!(psi_support_probability(&d, &p).unwrap(), brute);
    }
}
