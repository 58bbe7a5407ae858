//! The random-transposition Laplacian and its heat semigroup on the slice.
//!
//! `L f = f − Σ_{i<j} f^{(ij)} / C(n,2)` acts on level `d` as multiplication by
//! `(2/(n−1)) (d − d(d−1)/n)`, so `H_t = exp(−tL)` scales level `d` by
//! `α^{d − d(d−1)/n}` with `α = exp(−2t/(n−1))`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Result, SliceError};
use crate::harmonic::{level_weights, project_levels, weight_up_to, LevelWeights};
use crate::rational::{binomial, to_f64, Q};
use crate::slice::{swap_bits, SliceFunction};

/// Time parameter of the semigroup together with its derived `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    pub t: f64,
    pub alpha: f64,
    /// Log-Sobolev constant supplied by the caller; used only in reports.
    pub rho_estimate: Option<f64>,
}

impl NoiseParams {
    pub fn new(t: f64, n: usize) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(SliceError::Precondition(format!("noise time {t} must be >= 0")));
        }
        if n < 2 {
            return Err(SliceError::Precondition("noise needs n >= 2".into()));
        }
        Ok(NoiseParams {
            t,
            alpha: (-2.0 * t / (n as f64 - 1.0)).exp(),
            rho_estimate: None,
        })
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho_estimate = Some(rho);
        self
    }
}

/// `d − d(d−1)/n`, the exponent of `α` on level `d`.
pub fn level_exponent(n: usize, d: usize) -> Q {
    let d = BigInt::from(d);
    Q::from_integer(d.clone()) - Q::new(&d * (&d - 1), BigInt::from(n))
}

/// Eigenvalue of `L` on level `d`: `(2/(n−1)) (d − d(d−1)/n)`.
pub fn level_eigenvalue(n: usize, d: usize) -> Q {
    level_exponent(n, d) * Q::new(BigInt::from(2), BigInt::from(n - 1))
}

pub fn laplacian(f: &SliceFunction) -> Result<SliceFunction> {
    let dom = f.domain();
    let n = dom.n();
    if n < 2 {
        return Err(SliceError::Precondition("laplacian needs n >= 2".into()));
    }
    let pairs = Q::from_integer(binomial(n as i64, 2));
    // Only transpositions of a 1 with a 0 move the point.
    let moving = Q::from_integer(BigInt::from(dom.ell() * (n - dom.ell())));
    let stay = &moving / &pairs;
    Ok(SliceFunction::from_fn(dom, |x| {
        let mut acc = Q::zero();
        let ones = x;
        let zeros = dom.full_mask() & !x;
        for i in bits(ones) {
            for j in bits(zeros) {
                acc += f.at(swap_bits(x, i, j));
            }
        }
        f.at(x) * &stay - acc / &pairs
    }))
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize + 1;
        m &= m - 1;
        Some(i)
    })
}

/// `Σ_d m_d f^{=d}` with exact multipliers, one per level `0..=ell`.
pub fn apply_level_multipliers(f: &SliceFunction, multipliers: &[Q]) -> Result<SliceFunction> {
    let dom = f.domain();
    if multipliers.len() != dom.ell() + 1 {
        return Err(SliceError::SizeMismatch {
            expected: dom.ell() + 1,
            got: multipliers.len(),
        });
    }
    let dec = project_levels(f, dom.ell())?;
    Ok(dec
        .parts
        .iter()
        .zip(multipliers)
        .fold(SliceFunction::zero(dom), |acc, (part, m)| &acc + &part.scale(m)))
}

fn float_multipliers(n: usize, levels: usize, alpha: f64) -> Vec<f64> {
    (0..levels)
        .map(|d| alpha.powf(to_f64(&level_exponent(n, d))))
        .collect()
}

/// `H_t f`, evaluated in double precision from the exact level parts.
pub fn noise(f: &SliceFunction, params: &NoiseParams) -> Result<Vec<f64>> {
    let dom = f.domain();
    let dec = project_levels(f, dom.ell())?;
    let mult = float_multipliers(dom.n(), dec.parts.len(), params.alpha);
    let mut out = vec![0.0; dom.len()];
    for (part, m) in dec.parts.iter().zip(&mult) {
        for (o, v) in out.iter_mut().zip(part.values()) {
            *o += m * to_f64(v);
        }
    }
    Ok(out)
}

/// `‖H_t f‖²` from level weights.
pub fn noisy_norm_sq(weights: &LevelWeights, n: usize, alpha: f64) -> f64 {
    let mult = float_multipliers(n, weights.weights.len(), alpha);
    weights
        .weights
        .iter()
        .zip(&mult)
        .map(|(w, m)| m * m * to_f64(w))
        .sum()
}

/// Monte Carlo estimate of `H_t f(x)`: apply a Poisson(t) number of uniform
/// random transpositions to `x` and average `f`. Returns the sample mean and
/// its standard error.
pub fn simulate_noise(
    f: &SliceFunction,
    x: u64,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let dom = f.domain();
    let n = dom.n();
    if !dom.contains(x) {
        return Err(SliceError::Precondition(format!("point {x:#b} is not on {dom:?}")));
    }
    if n < 2 || samples < 2 {
        return Err(SliceError::Precondition(
            "simulation needs n >= 2 and at least two samples".into(),
        ));
    }
    let values: Vec<f64> = f.values().iter().map(to_f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poisson = if t > 0.0 {
        Some(Poisson::new(t).map_err(|e| SliceError::Precondition(e.to_string()))?)
    } else {
        None
    };
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let steps = poisson.as_ref().map_or(0, |p| p.sample(&mut rng) as u64);
        let mut y = x;
        for _ in 0..steps {
            let i = rng.random_range(1..=n);
            let mut j = rng.random_range(1..n);
            if j >= i {
                j += 1;
            }
            y = swap_bits(y, i, j);
        }
        let v = values[dom.index_of(y)];
        sum += v;
        sum_sq += v * v;
    }
    let count = samples as f64;
    let mean = sum / count;
    let var = (sum_sq / count - mean * mean).max(0.0) * count / (count - 1.0);
    Ok((mean, (var / count).sqrt()))
}

/// Both sides of `‖f‖² ≤ ‖f^{>k}‖² + exp(4tk(n−k+1)/(n(n−1))) ‖H_t f‖²`.
pub fn split_levels_gap(f: &SliceFunction, k: usize, t: f64) -> Result<(f64, f64)> {
    let dom = f.domain();
    if k > dom.ell() {
        return Err(SliceError::LevelOutOfRange { k, max: dom.ell() });
    }
    let params = NoiseParams::new(t, dom.n())?;
    let weights = level_weights(f)?;
    let n = dom.n() as f64;
    let k_f = k as f64;
    let factor = (4.0 * t * k_f * (n - k_f + 1.0) / (n * (n - 1.0))).exp();
    let lhs = to_f64(&f.norm_sq());
    let rhs = to_f64(&weights.above(k)) + factor * noisy_norm_sq(&weights, dom.n(), params.alpha);
    Ok((lhs, rhs))
}

/// Exact lower tail of `Σ_{i∈S} x_i` for `|S| = s` against `exp(−t²/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailReport {
    pub exact_tail: Q,
    pub bound: f64,
}

impl TailReport {
    pub fn holds(&self) -> bool {
        to_f64(&self.exact_tail) <= self.bound
    }
}

/// `Pr[Σ_{i∈S} x_i ≤ p s − sqrt(p(1−p)s) t]` with `t` given as a float.
///
/// `t²` is snapped to twelve decimal places so that values such as
/// `t = sqrt(2)` decide the event as intended.
pub fn hypergeometric_tail(n: usize, ell: usize, s: usize, t: f64) -> Result<TailReport> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(SliceError::Precondition(format!("tail parameter {t} must be >= 0")));
    }
    let scale = 1_000_000_000_000i64;
    let t_sq = Q::new(BigInt::from((t * t * scale as f64).round() as i128), BigInt::from(scale));
    let exact = hypergeometric_tail_exact(n, ell, s, &t_sq)?;
    Ok(TailReport {
        exact_tail: exact,
        bound: (-t * t / 2.0).exp(),
    })
}

/// The exact tail for a rational `t²`.
pub fn hypergeometric_tail_exact(n: usize, ell: usize, s: usize, t_sq: &Q) -> Result<Q> {
    if n == 0 || ell > n || s > n {
        return Err(SliceError::Precondition(format!(
            "need 0 <= ell <= n and 0 <= s <= n, got n={n} ell={ell} s={s}"
        )));
    }
    if t_sq.is_negative() {
        return Err(SliceError::Precondition("t² must be >= 0".into()));
    }
    let (ni, li, si) = (n as i64, ell as i64, s as i64);
    let p = Q::new(BigInt::from(ell), BigInt::from(n));
    let mean = &p * Q::from_integer(BigInt::from(s));
    let spread = &p * (Q::one() - &p) * Q::from_integer(BigInt::from(s)) * t_sq;
    let total = binomial(ni, si);
    let mut hits = BigInt::zero();
    for j in 0..=s.min(ell) {
        let gap = &mean - Q::from_integer(BigInt::from(j));
        if gap.is_negative() || &gap * &gap < spread {
            continue;
        }
        hits += binomial(li, j as i64) * binomial(ni - li, si - j as i64);
    }
    Ok(Q::new(hits, total))
}

/// `E[f⁸] / E[f²]⁴`.
pub fn moment_ratio(f: &SliceFunction) -> Result<Q> {
    let second = f.norm_sq();
    if second.is_zero() {
        return Err(SliceError::Precondition("moment ratio of the zero function".into()));
    }
    let eighth = f.values().iter().fold(Q::zero(), |acc, v| {
        let sq = v * v;
        let fourth = &sq * &sq;
        acc + &fourth * &fourth
    }) / Q::from_integer(f.values().len().into());
    let sq = &second * &second;
    Ok(eighth / (&sq * &sq))
}

/// Quantities around the level-`k` inequality for an indicator `f`.
#[derive(Clone, Debug)]
pub struct LevelKReport {
    pub k: usize,
    /// `‖f^{≤k}‖²`.
    pub low_weight: Q,
    /// `E[f]`.
    pub density: Q,
    pub t: f64,
    pub alpha: f64,
    /// `‖H_t f‖²`.
    pub noisy_norm_sq: f64,
    /// `α^{−2k} ‖H_t f‖²`.
    pub chain_bound: f64,
    pub chain_holds: bool,
    /// `ε² (log(1/ε))^k`, the shape of the final bound without its constant.
    pub bound_shape: f64,
    /// Time solving `exp(−2ρt) = k / (ρ (n−1) ln(1/ε))`, when `ρ` is given and
    /// the solution is positive.
    pub suggested_t: Option<f64>,
    /// `1 + exp(−2ρt)` at the chosen `t`, when `ρ` is given.
    pub gamma: Option<f64>,
}

pub fn level_k_diagnostic(f: &SliceFunction, k: usize, params: &NoiseParams) -> Result<LevelKReport> {
    if !f.is_boolean() {
        return Err(SliceError::Precondition("level-k diagnostic needs a 0/1 function".into()));
    }
    let density = f.mean();
    if density.is_zero() {
        return Err(SliceError::Precondition("level-k diagnostic needs E[f] > 0".into()));
    }
    let dom = f.domain();
    if k > dom.ell() {
        return Err(SliceError::LevelOutOfRange { k, max: dom.ell() });
    }
    let low_weight = weight_up_to(f, k)?;
    let weights = level_weights(f)?;
    let noisy = noisy_norm_sq(&weights, dom.n(), params.alpha);
    let chain_bound = params.alpha.powi(-2 * k as i32) * noisy;
    let eps = to_f64(&density);
    let log_inv = (1.0 / eps).ln();
    let (suggested_t, gamma) = match params.rho_estimate {
        Some(rho) if rho > 0.0 => {
            let target = k as f64 / (rho * (dom.n() as f64 - 1.0) * log_inv);
            let t_star = -target.ln() / (2.0 * rho);
            let t_star = (t_star.is_finite() && t_star > 0.0).then_some(t_star);
            (t_star, Some(1.0 + (-2.0 * rho * params.t).exp()))
        }
        _ => (None, None),
    };
    Ok(LevelKReport {
        k,
        chain_holds: to_f64(&low_weight) <= chain_bound * (1.0 + 1e-12) + 1e-15,
        low_weight,
        density,
        t: params.t,
        alpha: params.alpha,
        noisy_norm_sq: noisy,
        chain_bound,
        bound_shape: eps * eps * log_inv.powi(k as i32),
        suggested_t,
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::and_function;
    use crate::rational::{frac, q};
    use crate::slice::make_domain;

    #[test]
    fn eigenvalues() {
        assert_eq!(level_eigenvalue(4, 1), frac(2, 3));
        assert_eq!(level_eigenvalue(5, 2), frac(4, 5));
        assert_eq!(level_eigenvalue(7, 0), q(0));
    }

    #[test]
    fn laplacian_on_levels() {
        let d = make_domain(4, 2).unwrap();
        assert!(laplacian(&SliceFunction::constant(&d, frac(5, 3))).unwrap().is_zero());
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        let lvl1 = &x1 - &SliceFunction::constant(&d, frac(1, 2));
        assert_eq!(laplacian(&lvl1).unwrap(), lvl1.scale(&frac(2, 3)));

        let d = make_domain(5, 2).unwrap();
        let f = and_function(&d, &[1, 2]).unwrap();
        let part2 = project_levels(&f, 2).unwrap().parts[2].clone();
        assert!(!part2.is_zero());
        assert_eq!(laplacian(&part2).unwrap(), part2.scale(&frac(4, 5)));
    }

    #[test]
    fn noise_fixed_points() {
        let d = make_domain(5, 2).unwrap();
        let c = SliceFunction::constant(&d, frac(2, 7));
        let out = noise(&c, &NoiseParams::new(3.0, 5).unwrap()).unwrap();
        assert!(out.iter().all(|v| (v - 2.0 / 7.0).abs() < 1e-12));
        let f = and_function(&d, &[1, 3]).unwrap();
        let out = noise(&f, &NoiseParams::new(0.0, 5).unwrap()).unwrap();
        for (o, v) in out.iter().zip(f.values()) {
            assert!((o - to_f64(v)).abs() < 1e-12);
        }
        let ones = vec![q(1); 3];
        assert_eq!(apply_level_multipliers(&f, &ones).unwrap(), f);
        assert!(NoiseParams::new(-1.0, 5).is_err());
    }

    #[test]
    fn tail_example() {
        let r = hypergeometric_tail(4, 2, 2, 2f64.sqrt()).unwrap();
        assert_eq!(r.exact_tail, frac(1, 6));
        assert!((r.bound - (-1f64).exp()).abs() < 1e-12);
        assert!(r.holds());
        let r = hypergeometric_tail(9, 4, 5, 0.0).unwrap();
        assert_eq!(r.bound, 1.0);
        assert!(hypergeometric_tail(4, 5, 2, 1.0).is_err());
    }

    #[test]
    fn moments_and_diagnostics() {
        let d = make_domain(4, 2).unwrap();
        assert_eq!(moment_ratio(&SliceFunction::constant(&d, q(1))).unwrap(), q(1));
        let centred = &SliceFunction::dictator(&d, 1).unwrap()
            - &SliceFunction::constant(&d, frac(1, 2));
        // Values are ±1/2, so E[f⁸] = E[f²]⁴.
        assert_eq!(moment_ratio(&centred).unwrap(), q(1));
        assert!(moment_ratio(&SliceFunction::zero(&d)).is_err());

        let d = make_domain(6, 3).unwrap();
        let params = NoiseParams::new(0.5, 6).unwrap();
        let f = and_function(&d, &[1, 2]).unwrap();
        let r = level_k_diagnostic(&f, 1, &params).unwrap();
        assert_eq!(r.density, frac(1, 5));
        assert!(r.chain_holds);
        assert!(level_k_diagnostic(&SliceFunction::zero(&d), 1, &params).is_err());
        let one = SliceFunction::constant(&d, q(1));
        assert_eq!(level_k_diagnostic(&one, 1, &params).unwrap().low_weight, q(1));
    }
}
