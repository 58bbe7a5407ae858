//! Functions on the Boolean cube, their Fourier–Walsh expansion, and the
//! reduction that reads a cube function as a function on a large balanced
//! slice.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::calculus::derivative_pair;
use crate::error::{Result, SliceError};
use crate::harmonic::weight_above as slice_weight_above;
use crate::rational::{binomial, common_denominator, to_f64, Q};
use crate::slice::{make_domain, SliceFunction};
use crate::structure::{approximate, ApproximationResult};

/// Largest cube dimension accepted by default.
pub const CUBE_BUDGET: usize = 20;

/// Exact function on `{0,1}^n`; the value at mask `x` sits at index `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct CubeFunction {
    n: usize,
    values: Vec<Q>,
}

impl std::fmt::Debug for CubeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "cube({})[{}]", self.n, vals.join(", "))
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > CUBE_BUDGET {
        return Err(SliceError::BudgetExceeded {
            needed: 1u128 << n.min(127),
            budget: 1u64 << CUBE_BUDGET,
        });
    }
    Ok(())
}

fn indicator(b: bool) -> Q {
    if b {
        Q::one()
    } else {
        Q::zero()
    }
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<Q>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(SliceError::Precondition(format!(
                "{} values supplied for a cube of dimension {n}",
                values.len()
            )));
        }
        Ok(CubeFunction { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(u64) -> Q) -> Result<Self> {
        check_dim(n)?;
        Ok(CubeFunction {
            n,
            values: (0..1u64 << n).map(f).collect(),
        })
    }

    pub fn constant(n: usize, c: Q) -> Result<Self> {
        Self::from_fn(n, |_| c.clone())
    }

    /// `x_i` as a 0/1 function.
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(SliceError::CoordinateOutOfRange { coord: i, n });
        }
        Self::from_fn(n, |x| indicator(x >> (i - 1) & 1 == 1))
    }

    /// 1 when strictly more than half of the coordinates are 1.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| indicator(2 * x.count_ones() as usize > n))
    }

    /// Parity of the given coordinates as a 0/1 function.
    pub fn parity(n: usize, coords: &[usize]) -> Result<Self> {
        let mask = crate::slice::coord_mask(n, coords)?;
        Self::from_fn(n, |x| indicator((x & mask).count_ones() % 2 == 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn at(&self, x: u64) -> &Q {
        &self.values[x as usize]
    }

    pub fn mean(&self) -> Q {
        let s = self.values.iter().fold(Q::zero(), |a, v| a + v);
        s / Q::from_integer(self.values.len().into())
    }

    pub fn norm_sq(&self) -> Q {
        let s = self.values.iter().fold(Q::zero(), |a, v| a + v * v);
        s / Q::from_integer(self.values.len().into())
    }

    pub fn is_boolean(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn distance(&self, other: &CubeFunction) -> Result<Q> {
        if self.n != other.n {
            return Err(SliceError::SizeMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let diff = self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count();
        Ok(Q::new(diff.into(), self.values.len().into()))
    }
}

/// Coefficients `f̂(S) = E[f χ_S]` with `χ_S(x) = ∏_{i∈S} (−1)^{x_i}`, indexed
/// by the mask of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierExpansion {
    n: usize,
    coefficients: Vec<Q>,
}

impl FourierExpansion {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Q] {
        &self.coefficients
    }

    pub fn coefficient(&self, set: u64) -> &Q {
        &self.coefficients[set as usize]
    }

    /// `W^{=d} = Σ_{|S|=d} f̂(S)²`.
    pub fn weight_at(&self, d: usize) -> Q {
        self.weight_where(|s| s == d)
    }

    /// `W^{>k} = Σ_{|S|>k} f̂(S)²`.
    pub fn weight_above(&self, k: usize) -> Q {
        self.weight_where(|s| s > k)
    }

    pub fn total_weight(&self) -> Q {
        self.weight_where(|_| true)
    }

    fn weight_where(&self, keep: impl Fn(usize) -> bool) -> Q {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(s, c)| !c.is_zero() && keep(s.count_ones() as usize))
            .fold(Q::zero(), |a, (_, c)| a + c * c)
    }

    /// `f(x) = Σ_S f̂(S) χ_S(x)`.
    pub fn reconstruct(&self) -> CubeFunction {
        let (mut ints, den) = integer_view(&self.coefficients);
        walsh_hadamard(&mut ints);
        let den = Q::from_integer(den);
        CubeFunction {
            n: self.n,
            values: ints.into_iter().map(|v| Q::from_integer(v) / &den).collect(),
        }
    }

    /// Rows of `(set mask, coefficient)` for the nonzero coefficients.
    pub fn nonzero(&self) -> Vec<(u64, &Q)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (s as u64, c))
            .collect()
    }
}

fn integer_view(values: &[Q]) -> (Vec<BigInt>, BigInt) {
    let d = common_denominator(values);
    let ints = values.iter().map(|v| v.numer() * (&d / v.denom())).collect();
    (ints, d)
}

/// In-place unnormalised Walsh–Hadamard butterfly.
fn walsh_hadamard(a: &mut [BigInt]) {
    let len = a.len();
    let mut h = 1;
    while h < len {
        for start in (0..len).step_by(2 * h) {
            for i in start..start + h {
                let (lo, hi) = a.split_at_mut(i + h);
                let x = std::mem::take(&mut lo[i]);
                let y = std::mem::take(&mut hi[0]);
                lo[i] = &x + &y;
                hi[0] = x - y;
            }
        }
        h *= 2;
    }
}

pub fn fourier_transform(f: &CubeFunction) -> FourierExpansion {
    let (mut ints, den) = integer_view(&f.values);
    walsh_hadamard(&mut ints);
    let den = Q::from_integer(den << f.n);
    FourierExpansion {
        n: f.n,
        coefficients: ints.into_iter().map(|v| Q::from_integer(v) / &den).collect(),
    }
}

/// `W^{>k}(f)`.
pub fn weight_above(f: &CubeFunction, k: usize) -> Q {
    fourier_transform(f).weight_above(k)
}

/// `f'(x) = f(x restricted to [n])` on `slice(m, m/2)`.
pub fn embed_to_slice(f: &CubeFunction, m: usize) -> Result<SliceFunction> {
    if m % 2 != 0 || m < f.n {
        return Err(SliceError::Precondition(format!(
            "embedding needs an even m >= n = {}, got {m}",
            f.n
        )));
    }
    let dom = make_domain(m, m / 2)?;
    let low = (1u64 << f.n) - 1;
    Ok(SliceFunction::from_fn(&dom, |x| f.at(x & low).clone()))
}

/// Spectral comparison between a cube function and its embedding.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub m: usize,
    pub k: usize,
    /// `W^{>k}(f')` on the slice.
    pub slice_weight: Q,
    /// `W^{>k}(f)` on the cube.
    pub cube_weight: Q,
    /// `|slice_weight − cube_weight|`.
    pub gap: f64,
    /// `max_z |2^n Pr[x restricted to [n] = z] − 1|` for `x` uniform on the slice.
    pub marginal_deviation: f64,
}

pub fn embedding_report(f: &CubeFunction, k: usize, m: usize) -> Result<EmbeddingReport> {
    let embedded = embed_to_slice(f, m)?;
    let slice_weight = slice_weight_above(&embedded, k)?;
    let cube_weight = weight_above(f, k);
    let gap = (to_f64(&slice_weight) - to_f64(&cube_weight)).abs();
    Ok(EmbeddingReport {
        m,
        k,
        marginal_deviation: marginal_deviation(f.n, m),
        slice_weight,
        cube_weight,
        gap,
    })
}

/// How far the first `n` coordinates of a uniform point of `slice(m, m/2)`
/// are from uniform, relative to `2^{−n}`.
pub fn marginal_deviation(n: usize, m: usize) -> f64 {
    let total = binomial(m as i64, (m / 2) as i64);
    (0..=n)
        .map(|w| {
            let count = binomial((m - n) as i64, (m / 2) as i64 - w as i64);
            let prob = Q::new(count << n, total.clone());
            (to_f64(&prob) - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// `g(z) = g'(z, 1 − z, 0, 1, 0, 1, …)`.
pub fn pullback_from_slice(g: &SliceFunction, n: usize) -> Result<CubeFunction> {
    let dom = g.domain();
    let m = dom.n();
    if m < 2 * n || (m - 2 * n) % 2 != 0 || dom.ell() * 2 != m {
        return Err(SliceError::Precondition(format!(
            "pullback to dimension {n} needs slice(m, m/2) with m >= 2n and m − 2n even, got {dom:?}"
        )));
    }
    let low = (1u64 << n) - 1;
    let mut padding = 0u64;
    for c in (2 * n + 2..=m).step_by(2) {
        padding |= 1u64 << (c - 1);
    }
    CubeFunction::from_fn(n, |z| {
        let point = z | ((!z & low) << n) | padding;
        g.at(point).clone()
    })
}

/// Result of approximating a cube function through its slice embedding.
#[derive(Clone, Debug)]
pub struct CubeApproximation {
    pub g: CubeFunction,
    pub distance: Q,
    pub slice_result: ApproximationResult,
}

/// Embeds `f` into `slice(m, m/2)`, approximates there by a degree-`k`
/// function, checks that the approximant ignores the padding coordinates and
/// pulls it back.
pub fn ks_via_embedding(f: &CubeFunction, k: usize, m: usize) -> Result<CubeApproximation> {
    let embedded = embed_to_slice(f, m)?;
    let slice_result = approximate(&embedded, k)?;
    check_invariance(&slice_result.g, f.n)?;
    let g = pullback_from_slice(&slice_result.g, f.n)?;
    let distance = f.distance(&g)?;
    Ok(CubeApproximation {
        g,
        distance,
        slice_result,
    })
}

/// `D_{ij} g ≡ 0` for all `n < i < j <= m`.
pub fn check_invariance(g: &SliceFunction, n: usize) -> Result<()> {
    let m = g.domain().n();
    for i in n + 1..=m {
        for j in i + 1..=m {
            if !derivative_pair(g, i, j)?.is_zero() {
                return Err(SliceError::InvarianceFailure { i, j });
            }
        }
    }
    Ok(())
}

/// `ε + ε² (2 ln(1/ε))^k / k!`.
pub fn sharp_bound(eps: f64, k: usize) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) || k == 0 {
        return Err(SliceError::Precondition(format!(
            "sharp bound needs 0 < eps < 1 and k >= 1, got eps={eps} k={k}"
        )));
    }
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok(eps + eps * eps * (2.0 * (1.0 / eps).ln()).powi(k as i32) / factorial)
}

/// `α² (2e/k · ln(1/α))^k`.
pub fn cube_level_k_bound(alpha: f64, k: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) || k == 0 {
        return Err(SliceError::Precondition(format!(
            "level-k bound needs 0 < alpha < 1 and k >= 1, got alpha={alpha} k={k}"
        )));
    }
    let base = 2.0 * std::f64::consts::E / k as f64 * (1.0 / alpha).ln();
    Ok(alpha * alpha * base.powi(k as i32))
}

/// The threshold construction showing the sharp bound cannot be improved.
#[derive(Clone, Debug)]
pub struct TightnessReport {
    /// `Pr[f ≠ (1+g)/2]`.
    pub delta: Q,
    /// `W^{>k}(f)`.
    pub eps: Q,
    /// `W^{≤k}(f)`.
    pub low_weight: Q,
    /// `sharp_bound(ε, k)` when it is defined.
    pub sharp_bound: Option<f64>,
}

/// Builds `g(x) = (−1)^{x_1 + … + x_k}` and the function `f` that agrees with
/// `(1+g)/2` unless `Σ_{j>k} x_j g(x)^j` reaches `(n − k + t sqrt(n−k)) / 2`,
/// where it switches to `(1−g)/2`.
pub fn tightness_example(
    n: usize,
    k: usize,
    t: f64,
) -> Result<(CubeFunction, CubeFunction, TightnessReport)> {
    if k >= n {
        return Err(SliceError::Precondition(format!("need k < n, got k={k} n={n}")));
    }
    check_dim(n)?;
    let head = (1u64 << k) - 1;
    let sign = |x: u64| if (x & head).count_ones() % 2 == 0 { 1i64 } else { -1 };
    let rest = (n - k) as f64;
    let threshold = (rest + t * rest.sqrt()) / 2.0;
    let g = CubeFunction::from_fn(n, |x| Q::from_integer(sign(x).into()))?;
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let f = CubeFunction::from_fn(n, |x| {
        let s = sign(x);
        let mut sum = 0i64;
        for j in k + 1..=n {
            if x >> (j - 1) & 1 == 1 {
                sum += if j % 2 == 1 { s } else { 1 };
            }
        }
        let gv = Q::from_integer(s.into());
        if (sum as f64) < threshold {
            (Q::one() + gv) * &half
        } else {
            (Q::one() - gv) * &half
        }
    })?;
    let target = CubeFunction::from_fn(n, |x| (Q::one() + Q::from_integer(sign(x).into())) * &half)?;
    let spectrum = fourier_transform(&f);
    let eps = spectrum.weight_above(k);
    let low_weight = spectrum.total_weight() - &eps;
    let eps_f = to_f64(&eps);
    let report = TightnessReport {
        delta: f.distance(&target)?,
        sharp_bound: sharp_bound(eps_f, k).ok(),
        eps,
        low_weight,
    };
    Ok((f, g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn transform_examples() {
        let one = CubeFunction::constant(3, q(1)).unwrap();
        let e = fourier_transform(&one);
        assert_eq!(e.coefficient(0), &q(1));
        assert_eq!(e.nonzero().len(), 1);

        let x1 = CubeFunction::dictator(3, 1).unwrap();
        let e = fourier_transform(&x1);
        assert_eq!(e.coefficient(0), &frac(1, 2));
        assert_eq!(e.coefficient(1), &frac(-1, 2));

        let maj = CubeFunction::majority(3).unwrap();
        let e = fourier_transform(&maj);
        assert_eq!(e.coefficient(0), &frac(1, 2));
        for s in [1, 2, 4] {
            assert_eq!(e.coefficient(s), &frac(-1, 4));
        }
        assert_eq!(e.coefficient(7), &frac(1, 4));
        assert_eq!(e.weight_above(1), frac(1, 16));
        assert_eq!(e.total_weight(), maj.norm_sq());
        assert_eq!(e.reconstruct(), maj);
    }

    #[test]
    fn embedding_examples() {
        let c = CubeFunction::constant(3, frac(2, 5)).unwrap();
        let e = embed_to_slice(&c, 8).unwrap();
        assert_eq!(e, SliceFunction::constant(e.domain(), frac(2, 5)));
        let x1 = CubeFunction::dictator(3, 1).unwrap();
        let e = embed_to_slice(&x1, 8).unwrap();
        assert!(slice_weight_above(&e, 1).unwrap().is_zero());
        assert!(embed_to_slice(&x1, 7).is_err());
        assert!(marginal_deviation(3, 12) < marginal_deviation(3, 8));
    }

    #[test]
    fn pullback_examples() {
        let dom = make_domain(8, 4).unwrap();
        let x1 = SliceFunction::dictator(&dom, 1).unwrap();
        assert_eq!(pullback_from_slice(&x1, 3).unwrap(), CubeFunction::dictator(3, 1).unwrap());
        let c = SliceFunction::constant(&dom, frac(-1, 3));
        assert_eq!(
            pullback_from_slice(&c, 2).unwrap(),
            CubeFunction::constant(2, frac(-1, 3)).unwrap()
        );
        let xn1 = SliceFunction::dictator(&dom, 4).unwrap();
        let want = CubeFunction::from_fn(3, |z| q(1 - (z & 1) as i64)).unwrap();
        assert_eq!(pullback_from_slice(&xn1, 3).unwrap(), want);
        assert!(pullback_from_slice(&x1, 5).is_err());
    }

    #[test]
    fn bounds() {
        let v = sharp_bound(1.0 / 16.0, 1).unwrap();
        assert!((v - 0.08415).abs() < 1e-4);
        let e4 = (-4f64).exp();
        let v = sharp_bound(e4, 2).unwrap();
        assert!((v - (e4 + 32.0 * (-8f64).exp())).abs() < 1e-12);
        assert!(sharp_bound(0.0, 1).is_err());
        assert!(sharp_bound(0.5, 0).is_err());
        let tiny = 1e-9;
        assert!((sharp_bound(tiny, 2).unwrap() / tiny - 1.0).abs() < 1e-6);
        assert!(cube_level_k_bound(0.1, 2).unwrap() > 0.0);
    }

    #[test]
    fn tightness_degenerate_cases() {
        let (f, g, r) = tightness_example(8, 2, 100.0).unwrap();
        assert_eq!(r.delta, q(0));
        assert_eq!(r.eps, q(0));
        assert_eq!(f.n(), g.n());
        let (f, g, _) = tightness_example(6, 0, 0.5).unwrap();
        assert!(g.values().iter().all(|v| *v == q(1)));
        // Symmetric threshold in all coordinates.
        for x in 0..64u64 {
            let y = x.rotate_left(1) & 63 | (x >> 5);
            assert_eq!(f.at(x), f.at(y));
        }
    }
}
