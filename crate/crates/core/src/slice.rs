//! Slice domains, exact-valued functions on them, and the permutation action.
//!
//! Coordinates are numbered `1..=n`. A point of the slice is stored as a
//! `u64` mask in which coordinate `i` is bit `i - 1`; the canonical order of a
//! domain is ascending mask value.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Result, SliceError};
use crate::rational::{binomial_u128, Q};

/// Default cap on the number of points a domain may enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// The slice `{x in {0,1}^n : |x| = ell}` with its points in canonical order.
#[derive(Clone)]
pub struct SliceDomain {
    n: usize,
    ell: usize,
    elements: Vec<u64>,
    // pascal[a][b] = C(a, b) for the ranking map.
    pascal: Vec<Vec<u64>>,
}

impl fmt::Debug for SliceDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slice({}, {})", self.n, self.ell)
    }
}

impl PartialEq for SliceDomain {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ell == other.ell
    }
}

impl Eq for SliceDomain {}

/// Builds `slice(n, ell)` under the default enumeration budget.
pub fn make_domain(n: usize, ell: usize) -> Result<Arc<SliceDomain>> {
    SliceDomain::with_budget(n, ell, DEFAULT_BUDGET)
}

impl SliceDomain {
    pub fn with_budget(n: usize, ell: usize, budget: u64) -> Result<Arc<Self>> {
        if n == 0 || n > 63 || ell > n {
            return Err(SliceError::WeightOutOfRange { n, ell });
        }
        let needed = binomial_u128(n as u64, ell as u64);
        if needed > budget as u128 {
            return Err(SliceError::BudgetExceeded { needed, budget });
        }
        let mut elements = Vec::with_capacity(needed as usize);
        if ell == 0 {
            elements.push(0);
        } else {
            // Gosper's hack walks fixed-popcount masks in increasing order.
            let limit = 1u64 << n;
            let mut x: u64 = (1u64 << ell) - 1;
            while x < limit {
                elements.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        let mut pascal = vec![vec![0u64; ell + 2]; n + 1];
        for a in 0..=n {
            pascal[a][0] = 1;
            for b in 1..=(ell + 1).min(a) {
                pascal[a][b] = pascal[a - 1][b - 1] + if b <= a - 1 { pascal[a - 1][b] } else { 0 };
            }
        }
        Ok(Arc::new(SliceDomain {
            n,
            ell,
            elements,
            pascal,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `p = ell / n`.
    pub fn p(&self) -> Q {
        Q::new(self.ell.into(), self.n.into())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> u64 {
        self.elements[idx]
    }

    pub fn contains(&self, mask: u64) -> bool {
        mask >> self.n == 0 && mask.count_ones() as usize == self.ell
    }

    /// Position of `mask` in the canonical order (combinatorial number
    /// system). The mask must belong to the domain.
    pub fn index_of(&self, mask: u64) -> usize {
        debug_assert!(self.contains(mask), "mask {mask:#b} not in {self:?}");
        let mut rank = 0u64;
        let mut m = mask;
        let mut j = 1;
        while m != 0 {
            let pos = m.trailing_zeros() as usize;
            if j <= pos {
                rank += self.pascal[pos][j];
            }
            m &= m - 1;
            j += 1;
        }
        rank as usize
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Mask of a coordinate set given with 1-based coordinates.
    pub fn coord_mask(&self, coords: &[usize]) -> Result<u64> {
        coord_mask(self.n, coords)
    }
}

pub fn coord_mask(n: usize, coords: &[usize]) -> Result<u64> {
    let mut mask = 0u64;
    for &c in coords {
        if c == 0 || c > n {
            return Err(SliceError::CoordinateOutOfRange { coord: c, n });
        }
        mask |= 1u64 << (c - 1);
    }
    Ok(mask)
}

/// Value of coordinate `i` (1-based) in `mask`.
#[inline]
pub fn bit(mask: u64, i: usize) -> bool {
    mask >> (i - 1) & 1 == 1
}

/// Exchanges coordinates `i` and `j` (1-based) of `mask`.
#[inline]
pub fn swap_bits(mask: u64, i: usize, j: usize) -> u64 {
    let (a, b) = (i - 1, j - 1);
    if (mask >> a & 1) == (mask >> b & 1) {
        mask
    } else {
        mask ^ (1u64 << a | 1u64 << b)
    }
}

/// A permutation of `[n]`, acting on points by `(x^pi)_{pi(i)} = x_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // image[i] = pi(i + 1) - 1
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// The transposition `(i j)` on `[n]`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        for c in [i, j] {
            if c == 0 || c > n {
                return Err(SliceError::CoordinateOutOfRange { coord: c, n });
            }
        }
        let mut p = Self::identity(n);
        p.image.swap(i - 1, j - 1);
        Ok(p)
    }

    /// Builds a permutation from `[pi(1), ..., pi(n)]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(SliceError::InvalidPermutation(format!("{images:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation {
            image: images.iter().map(|v| v - 1).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `pi(i)` for a 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different sizes");
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `x^pi`: the bit at coordinate `i` moves to coordinate `pi(i)`.
    pub fn act(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1u64 << self.image[i];
            m &= m - 1;
        }
        out
    }

    /// Disjoint cycles of length at least two, 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(2 7)`; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An exact rational-valued function on a slice.
#[derive(Clone, PartialEq, Eq)]
pub struct SliceFunction {
    domain: Arc<SliceDomain>,
    values: Vec<Q>,
}

impl fmt::Debug for SliceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{:?}[{}]", self.domain, vals.join(", "))
    }
}

impl SliceFunction {
    pub fn new(domain: Arc<SliceDomain>, values: Vec<Q>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(SliceError::Precondition(format!(
                "{} values supplied for a domain of {} points",
                values.len(),
                domain.len()
            )));
        }
        Ok(SliceFunction { domain, values })
    }

    pub fn from_fn(domain: &Arc<SliceDomain>, mut f: impl FnMut(u64) -> Q) -> Self {
        let values = domain.elements().iter().map(|&x| f(x)).collect();
        SliceFunction {
            domain: Arc::clone(domain),
            values,
        }
    }

    pub fn constant(domain: &Arc<SliceDomain>, c: Q) -> Self {
        SliceFunction {
            domain: Arc::clone(domain),
            values: vec![c; domain.len()],
        }
    }

    pub fn zero(domain: &Arc<SliceDomain>) -> Self {
        Self::constant(domain, Q::zero())
    }

    /// The coordinate function `x_i`.
    pub fn dictator(domain: &Arc<SliceDomain>, i: usize) -> Result<Self> {
        domain.coord_mask(&[i])?;
        Ok(Self::from_fn(domain, |x| {
            if bit(x, i) {
                Q::one()
            } else {
                Q::zero()
            }
        }))
    }

    /// Indicator of a single point.
    pub fn delta(domain: &Arc<SliceDomain>, point: u64) -> Self {
        Self::from_fn(domain, |x| if x == point { Q::one() } else { Q::zero() })
    }

    pub fn domain(&self) -> &Arc<SliceDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Q> {
        self.values
    }

    pub fn at(&self, mask: u64) -> &Q {
        &self.values[self.domain.index_of(mask)]
    }

    /// Iterates `(point, value)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &Q)> {
        self.domain.elements().iter().copied().zip(self.values.iter())
    }

    pub fn same_domain(&self, other: &SliceFunction) -> Result<()> {
        if *self.domain != *other.domain {
            return Err(SliceError::DomainMismatch(
                self.domain.n,
                self.domain.ell,
                other.domain.n,
                other.domain.ell,
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Q) -> Q) -> SliceFunction {
        SliceFunction {
            domain: Arc::clone(&self.domain),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> SliceFunction {
        self.map(|v| v * c)
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &SliceFunction) -> Result<SliceFunction> {
        self.same_domain(other)?;
        Ok(SliceFunction {
            domain: Arc::clone(&self.domain),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `E[f]` under the uniform measure.
    pub fn mean(&self) -> Q {
        let sum = self.values.iter().fold(Q::zero(), |acc, v| acc + v);
        sum / Q::from_integer(self.values.len().into())
    }

    pub fn norm_sq(&self) -> Q {
        let sum = self.values.iter().fold(Q::zero(), |acc, v| acc + v * v);
        sum / Q::from_integer(self.values.len().into())
    }

    pub fn variance(&self) -> Q {
        let m = self.mean();
        self.norm_sq() - &m * &m
    }

    /// Number of points where the function is nonzero.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// Fraction of points where the two functions differ.
    pub fn distance(&self, other: &SliceFunction) -> Result<Q> {
        self.same_domain(other)?;
        let diff = self
            .values
            .iter()
            .zip(&other.values)
            .filter(|(a, b)| a != b)
            .count();
        Ok(Q::new(diff.into(), self.values.len().into()))
    }
}

fn zip_with(a: &SliceFunction, b: &SliceFunction, op: impl Fn(&Q, &Q) -> Q) -> SliceFunction {
    a.same_domain(b).expect("arithmetic on functions over different slices");
    SliceFunction {
        domain: Arc::clone(&a.domain),
        values: a.values.iter().zip(&b.values).map(|(x, y)| op(x, y)).collect(),
    }
}

/// Panics when the operands live on different domains; use
/// [`SliceFunction::same_domain`] first when that is not statically known.
impl Add for &SliceFunction {
    type Output = SliceFunction;
    fn add(self, rhs: &SliceFunction) -> SliceFunction {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &SliceFunction {
    type Output = SliceFunction;
    fn sub(self, rhs: &SliceFunction) -> SliceFunction {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Neg for &SliceFunction {
    type Output = SliceFunction;
    fn neg(self) -> SliceFunction {
        self.map(|v| -v)
    }
}

impl Mul<&Q> for &SliceFunction {
    type Output = SliceFunction;
    fn mul(self, rhs: &Q) -> SliceFunction {
        self.scale(rhs)
    }
}

/// `⟨f, g⟩ = E[f g]`.
pub fn inner_product(f: &SliceFunction, g: &SliceFunction) -> Result<Q> {
    f.same_domain(g)?;
    let sum = f
        .values
        .iter()
        .zip(&g.values)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Q::zero(), |acc, (a, b)| acc + a * b);
    Ok(sum / Q::from_integer(f.values.len().into()))
}

pub fn norm_sq(f: &SliceFunction) -> Q {
    f.norm_sq()
}

/// `f^pi(x) = f(x^pi)`.
pub fn apply_permutation(f: &SliceFunction, pi: &Permutation) -> Result<SliceFunction> {
    let dom = f.domain();
    if pi.n() != dom.n() {
        return Err(SliceError::SizeMismatch {
            expected: dom.n(),
            got: pi.n(),
        });
    }
    Ok(SliceFunction::from_fn(dom, |x| f.at(pi.act(x)).clone()))
}

/// `f^{(i j)}`.
pub fn apply_transposition(f: &SliceFunction, i: usize, j: usize) -> Result<SliceFunction> {
    let dom = f.domain();
    dom.coord_mask(&[i, j])?;
    Ok(SliceFunction::from_fn(dom, |x| f.at(swap_bits(x, i, j)).clone()))
}

/// `E_I f(x)`: the average of `f` over all points agreeing with `x` outside `I`.
pub fn average_over(f: &SliceFunction, coords: &[usize]) -> Result<SliceFunction> {
    let dom = f.domain();
    let inside = dom.coord_mask(coords)?;
    let outside = dom.full_mask() & !inside;
    let mut groups: std::collections::HashMap<u64, (Q, usize)> = std::collections::HashMap::new();
    for (x, v) in f.iter() {
        let e = groups.entry(x & outside).or_insert_with(|| (Q::zero(), 0));
        e.0 += v;
        e.1 += 1;
    }
    let means: std::collections::HashMap<u64, Q> = groups
        .into_iter()
        .map(|(k, (s, c))| (k, s / Q::from_integer(c.into())))
        .collect();
    Ok(SliceFunction::from_fn(dom, |x| means[&(x & outside)].clone()))
}

/// `V_I(f) = ‖f − E_I f‖²`.
pub fn conditional_variance(f: &SliceFunction, coords: &[usize]) -> Result<Q> {
    let avg = average_over(f, coords)?;
    Ok((f - &avg).norm_sq())
}

/// Restricts `f` to the points agreeing with `x` on `I`.
///
/// The result lives on `slice(n − |I|, ell − |x ∩ I|)`; the surviving
/// coordinates keep their relative order and are renumbered `1..`.
pub fn restrict(f: &SliceFunction, coords: &[usize], x: u64) -> Result<SliceFunction> {
    let dom = f.domain();
    let fixed = dom.coord_mask(coords)?;
    if !dom.contains(x) {
        return Err(SliceError::Precondition(format!(
            "point {x:#b} is not on {dom:?}"
        )));
    }
    let free: Vec<usize> = (1..=dom.n()).filter(|&i| fixed >> (i - 1) & 1 == 0).collect();
    if free.is_empty() {
        return Err(SliceError::EmptySubSlice);
    }
    let sub_ell = dom.ell() - (x & fixed).count_ones() as usize;
    let sub = SliceDomain::with_budget(free.len(), sub_ell, DEFAULT_BUDGET)
        .map_err(|_| SliceError::EmptySubSlice)?;
    Ok(SliceFunction::from_fn(&sub, |y| {
        let mut full = x & fixed;
        for (k, &c) in free.iter().enumerate() {
            if y >> k & 1 == 1 {
                full |= 1u64 << (c - 1);
            }
        }
        f.at(full).clone()
    }))
}
