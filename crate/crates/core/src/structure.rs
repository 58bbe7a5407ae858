//! Degree-`k` approximation by repeated "eating" of the top level, and the
//! exactly checkable lemmas around it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::calculus::{build_from_derivatives, derivative, derivative_pair, DerivativeAssignment};
use crate::error::{Result, SliceError};
use crate::harmonic::{degree, psi_function, psi_support_probability, weight_above};
use crate::rational::{binomial, format_q, is_dyadic, to_f64, Q};
use crate::slice::{average_over, conditional_variance, inner_product, SliceFunction};
use crate::tuples::{enumerate_shifted_sorted, KTuple};

/// Nearest multiple of `2^{−l}`, ties to the even multiple.
pub fn round_to_dyadic(a: &Q, l: usize) -> Q {
    let unit = BigInt::one() << l;
    let scaled = a * Q::from_integer(unit.clone());
    let floor = scaled.floor().to_integer();
    let rest = scaled - Q::from_integer(floor.clone());
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let rounded = match rest.cmp(&half) {
        std::cmp::Ordering::Less => floor,
        std::cmp::Ordering::Greater => floor + 1,
        std::cmp::Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1
            }
        }
    };
    Q::new(rounded, unit)
}

/// `a_P = E[(D_P h) Ψ_P] / Pr[Ψ_P ≠ 0]`.
pub fn coefficient_a(h: &SliceFunction, p: &KTuple) -> Result<Q> {
    let dom = h.domain();
    if 2 * p.len() > dom.n() {
        return Err(SliceError::InvalidTuple(format!("{p} needs 2k <= n")));
    }
    let prob = psi_support_probability(dom, p)?;
    if prob.is_zero() {
        return Err(SliceError::DegenerateTuple(p.to_string()));
    }
    let dh = derivative(h, p)?;
    let psi = psi_function(dom, p)?;
    Ok(inner_product(&dh, &psi)? / prob)
}

/// Checks `E_J(D_P h) = a_P Ψ_P` with `J` the coordinates outside `P`.
pub fn coefficient_identity_holds(h: &SliceFunction, p: &KTuple) -> Result<bool> {
    let dom = h.domain();
    let a = coefficient_a(h, p)?;
    let covered = p.union_mask();
    let outside: Vec<usize> = (1..=dom.n()).filter(|c| covered >> (c - 1) & 1 == 0).collect();
    let averaged = average_over(&derivative(h, p)?, &outside)?;
    Ok(averaged == psi_function(dom, p)?.scale(&a))
}

/// `(P, a_P, c_P)` for one shifted sorted tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCoefficient {
    pub tuple: KTuple,
    pub a: Q,
    pub c: Q,
}

/// Output of one eating step at level `l`.
#[derive(Clone, Debug)]
pub struct LevelStep {
    pub level: usize,
    pub g: SliceFunction,
    pub coefficients: Vec<LevelCoefficient>,
}

/// Rounds every `a_P` on level `l` to `2^{−l} Z` and builds the degree-`l`
/// function whose shifted sorted derivatives are `c_P Ψ_P`.
pub fn eating_step(h: &SliceFunction, l: usize) -> Result<LevelStep> {
    let dom = h.domain();
    if 2 * l > dom.n() || l > dom.ell() {
        return Err(SliceError::Precondition(format!(
            "level {l} needs 2l <= n and l <= ell on {dom:?}"
        )));
    }
    let mut coefficients = Vec::new();
    for p in enumerate_shifted_sorted(dom.n(), l) {
        let a = match coefficient_a(h, &p) {
            Ok(a) => a,
            // Ψ_P vanishes on this slice, so D_P is blind to the value.
            Err(SliceError::DegenerateTuple(_)) => Q::zero(),
            Err(e) => return Err(e),
        };
        let c = round_to_dyadic(&a, l);
        coefficients.push(LevelCoefficient { tuple: p, a, c });
    }
    let z = DerivativeAssignment::new(
        dom.n(),
        l,
        coefficients.iter().map(|lc| (lc.tuple.clone(), lc.c.clone())),
    )?;
    let g = build_from_derivatives(dom, &z)?;
    Ok(LevelStep {
        level: l,
        g,
        coefficients,
    })
}

#[derive(Clone, Debug)]
pub struct ApproximationResult {
    pub k: usize,
    /// `g = Σ_l g_l`.
    pub g: SliceFunction,
    /// Steps for `l = k, k−1, …, 0`.
    pub steps: Vec<LevelStep>,
    /// `h_l = h_{l+1} − g_l`, aligned with `steps`; the last entry is `f − g`.
    pub remainders: Vec<SliceFunction>,
    /// `Pr[f ≠ g]`.
    pub distance: Q,
    /// `‖f − g‖²`.
    pub residual_norm_sq: Q,
    pub is_boolean: bool,
}

impl ApproximationResult {
    /// `g_k, …, g_0`.
    pub fn per_level(&self) -> impl Iterator<Item = &SliceFunction> {
        self.steps.iter().map(|s| &s.g)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| {
                let rows: Vec<serde_json::Value> = s
                    .coefficients
                    .iter()
                    .map(|c| {
                        json!({
                            "tuple": c.tuple.to_string(),
                            "a": format_q(&c.a),
                            "c": format_q(&c.c),
                        })
                    })
                    .collect();
                json!({ "level": s.level, "coefficients": rows })
            })
            .collect();
        json!({
            "k": self.k,
            "distance": format_q(&self.distance),
            "distance_float": to_f64(&self.distance),
            "residual_norm_sq": format_q(&self.residual_norm_sq),
            "residual_norm_sq_float": to_f64(&self.residual_norm_sq),
            "is_boolean": self.is_boolean,
            "levels": levels,
        })
    }
}

/// Peels off levels `k, k−1, …, 0` of `f` with rounded derivative
/// coefficients and returns their sum.
pub fn approximate(f: &SliceFunction, k: usize) -> Result<ApproximationResult> {
    let dom = f.domain();
    if 2 * k > dom.n() || k > dom.ell() {
        return Err(SliceError::Precondition(format!(
            "approximation degree {k} needs 2k <= n and k <= ell on {dom:?}"
        )));
    }
    let mut h = f.clone();
    let mut g = SliceFunction::zero(dom);
    let mut steps = Vec::with_capacity(k + 1);
    let mut remainders = Vec::with_capacity(k + 1);
    for l in (0..=k).rev() {
        let step = eating_step(&h, l)?;
        h = &h - &step.g;
        g = &g + &step.g;
        remainders.push(h.clone());
        steps.push(step);
    }
    let distance = f.distance(&g)?;
    let residual_norm_sq = (f - &g).norm_sq();
    let is_boolean = g.is_boolean();
    Ok(ApproximationResult {
        k,
        g,
        steps,
        remainders,
        distance,
        residual_norm_sq,
        is_boolean,
    })
}

/// Lower bound on the support of a nonzero integer function of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportReport {
    pub support: usize,
    pub bound: BigInt,
}

impl SupportReport {
    pub fn holds(&self) -> bool {
        self.support == 0 || BigInt::from(self.support) >= self.bound
    }
}

/// `C(n−2k, ell−k)`, or 1 when `ell < k`.
pub fn support_bound(n: usize, ell: usize, k: usize) -> BigInt {
    if ell < k {
        return BigInt::one();
    }
    binomial(n as i64 - 2 * k as i64, (ell - k) as i64)
}

pub fn support_bound_check(f: &SliceFunction, k: usize) -> Result<SupportReport> {
    if !f.is_integer_valued() {
        return Err(SliceError::Precondition("support bound needs integer values".into()));
    }
    let deg = degree(f)?;
    if deg > k {
        return Err(SliceError::Precondition(format!("function has degree {deg} > {k}")));
    }
    let dom = f.domain();
    Ok(SupportReport {
        support: f.support_size(),
        bound: support_bound(dom.n(), dom.ell(), k),
    })
}

/// The two-step martingale decomposition of `V_I` after removing `i`.
#[derive(Clone, Debug)]
pub struct MartingaleReport {
    /// `V_I(f)`.
    pub v_full: Q,
    /// `V_J(f)` with `J = I ∖ {i}`.
    pub v_reduced: Q,
    /// `‖E_J f − E_I f‖²`.
    pub step_norm_sq: Q,
    /// Average over `j ∈ I` of `‖D_{ij} f‖²`.
    pub derivative_average: Q,
    /// Average over `j ∈ I` of `‖f − f^{(ij)}‖²`, which is four times
    /// `derivative_average`.
    pub difference_average: Q,
}

impl MartingaleReport {
    pub fn identity_holds(&self) -> bool {
        self.v_full == &self.v_reduced + &self.step_norm_sq
    }

    /// `‖E_J f − E_I f‖² ≤ avg_j ‖D_{ij} f‖²`. This can fail: the averaging
    /// argument only controls the unnormalised differences.
    pub fn inequality_holds(&self) -> bool {
        self.step_norm_sq <= self.derivative_average
    }

    /// `‖E_J f − E_I f‖² ≤ avg_j ‖f − f^{(ij)}‖²`, which always holds.
    pub fn difference_bound_holds(&self) -> bool {
        self.step_norm_sq <= self.difference_average
    }
}

pub fn martingale_check(f: &SliceFunction, coords: &[usize], i: usize) -> Result<MartingaleReport> {
    if !coords.contains(&i) {
        return Err(SliceError::Precondition(format!("{i} is not in {coords:?}")));
    }
    let mut set = coords.to_vec();
    set.sort_unstable();
    set.dedup();
    let reduced: Vec<usize> = set.iter().copied().filter(|&c| c != i).collect();
    let e_full = average_over(f, &set)?;
    let e_reduced = average_over(f, &reduced)?;
    let mut total = Q::zero();
    for &j in &set {
        total += derivative_pair(f, i, j)?.norm_sq();
    }
    let derivative_average = total / Q::from_integer(set.len().into());
    Ok(MartingaleReport {
        v_full: conditional_variance(f, &set)?,
        v_reduced: conditional_variance(f, &reduced)?,
        step_norm_sq: (&e_reduced - &e_full).norm_sq(),
        difference_average: &derivative_average * Q::from_integer(4.into()),
        derivative_average,
    })
}

/// Norms around the dichotomy for integer functions that are close to
/// degree `k`.
#[derive(Clone, Debug)]
pub struct DichotomyReport {
    pub k: usize,
    /// `‖f^{>k}‖²`.
    pub high_weight: Q,
    pub norm_sq: Q,
    /// `C(n−2k, ell−k) / C(n, ell)`.
    pub threshold: Q,
}

impl DichotomyReport {
    /// For exactly degree-`k` nonzero `f`, `‖f‖²` is at least the threshold.
    /// Other inputs pass vacuously.
    pub fn exact_case_holds(&self) -> bool {
        !self.high_weight.is_zero() || self.norm_sq.is_zero() || self.norm_sq >= self.threshold
    }
}

pub fn dichotomy_report(f: &SliceFunction, k: usize) -> Result<DichotomyReport> {
    if !f.is_integer_valued() {
        return Err(SliceError::Precondition("dichotomy report needs integer values".into()));
    }
    let dom = f.domain();
    let (n, ell) = (dom.n() as i64, dom.ell() as i64);
    let threshold = if ell < k as i64 {
        Q::zero()
    } else {
        Q::new(binomial(n - 2 * k as i64, ell - k as i64), binomial(n, ell))
    };
    Ok(DichotomyReport {
        k,
        high_weight: weight_above(f, k)?,
        norm_sq: f.norm_sq(),
        threshold,
    })
}

/// `‖D_P f‖²` for every shifted sorted `l`-tuple.
pub fn derivative_norms(f: &SliceFunction, l: usize) -> Result<Vec<(KTuple, Q)>> {
    enumerate_shifted_sorted(f.domain().n(), l)
        .into_iter()
        .map(|p| {
            let norm = derivative(f, &p)?.norm_sq();
            Ok((p, norm))
        })
        .collect()
}

/// Whether every value of `f` lies in `2^{−l} Z`.
pub fn is_dyadic_valued(f: &SliceFunction, l: usize) -> bool {
    f.values().iter().all(|v| is_dyadic(v, l))
}

/// `f` with the value at one point replaced by `1 − f(x)`.
pub fn flip_point(f: &SliceFunction, point: u64) -> Result<SliceFunction> {
    let dom = f.domain();
    if !dom.contains(point) {
        return Err(SliceError::Precondition(format!("point {point:#b} is not on {dom:?}")));
    }
    Ok(SliceFunction::from_fn(dom, |x| {
        let v = f.at(x).clone();
        if x == point {
            Q::one() - v
        } else {
            v
        }
    }))
}

/// `E|g² − g|`, zero exactly when `g` is Boolean.
pub fn boolean_defect(g: &SliceFunction) -> Q {
    let sum = g
        .values()
        .iter()
        .map(|v| {
            let r = v * v - v;
            r.abs()
        })
        .fold(Q::zero(), |a, b| a + b);
    sum / Q::from_integer(g.values().len().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::and_function;
    use crate::rational::{frac, q};
    use crate::slice::make_domain;

    #[test]
    fn rounding() {
        assert_eq!(round_to_dyadic(&frac(3, 10), 1), frac(1, 2));
        assert_eq!(round_to_dyadic(&frac(1, 4), 1), q(0));
        assert_eq!(round_to_dyadic(&frac(3, 4), 1), q(1));
        assert_eq!(round_to_dyadic(&frac(-3, 10), 0), q(0));
        assert_eq!(round_to_dyadic(&frac(-1, 2), 0), q(0));
        assert_eq!(round_to_dyadic(&frac(-3, 2), 0), q(-2));
        assert_eq!(round_to_dyadic(&frac(7, 3), 0), q(2));
    }

    #[test]
    fn coefficients_for_dictator() {
        let d = make_domain(6, 3).unwrap();
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        assert_eq!(coefficient_a(&x1, &KTuple::empty()).unwrap(), frac(1, 2));
        for b in 2..=6 {
            let p = KTuple::new(&[(1, b)]).unwrap();
            assert_eq!(coefficient_a(&x1, &p).unwrap(), frac(-1, 2));
            assert!(coefficient_identity_holds(&x1, &p).unwrap());
        }
        let p = KTuple::new(&[(1, 4), (2, 5)]).unwrap();
        let psi = psi_function(&d, &p).unwrap();
        assert_eq!(coefficient_a(&psi, &p).unwrap(), q(1));
    }

    #[test]
    fn eating_examples() {
        let d = make_domain(6, 3).unwrap();
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        let step = eating_step(&x1, 1).unwrap();
        assert_eq!(step.g, &x1 - &SliceFunction::constant(&d, q(3)));
        let step = eating_step(&SliceFunction::constant(&d, frac(7, 3)), 0).unwrap();
        assert_eq!(step.g, SliceFunction::constant(&d, q(2)));
        let step = eating_step(&x1, 2).unwrap();
        assert!(step.g.is_zero());
    }

    #[test]
    fn approximate_dictator() {
        let d = make_domain(6, 3).unwrap();
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        let r = approximate(&x1, 1).unwrap();
        assert_eq!(r.g, x1);
        assert_eq!(r.distance, q(0));
        assert!(r.is_boolean);
        assert_eq!(r.steps[0].g, &x1 - &SliceFunction::constant(&d, q(3)));
        assert_eq!(r.steps[1].g, SliceFunction::constant(&d, q(3)));
        assert!(r.remainders.last().unwrap().is_zero());
    }

    #[test]
    fn support_and_dichotomy() {
        let d = make_domain(6, 3).unwrap();
        let f = &SliceFunction::dictator(&d, 1).unwrap() - &SliceFunction::dictator(&d, 2).unwrap();
        let r = support_bound_check(&f, 1).unwrap();
        assert_eq!((r.support, r.bound.clone()), (12, BigInt::from(6)));
        assert!(r.holds());
        let z = support_bound_check(&SliceFunction::zero(&d), 1).unwrap();
        assert!(z.holds());
        let and3 = and_function(&d, &[1, 2, 3]).unwrap();
        assert!(support_bound_check(&and3, 1).is_err());
        assert!(support_bound_check(&f.scale(&frac(1, 2)), 1).is_err());

        let r = dichotomy_report(&f, 1).unwrap();
        assert_eq!(r.high_weight, q(0));
        assert_eq!(r.norm_sq, frac(12, 20));
        assert_eq!(r.threshold, frac(6, 20));
        assert!(r.exact_case_holds());
    }

    #[test]
    fn martingale_small_cases() {
        let d = make_domain(6, 3).unwrap();
        let f = and_function(&d, &[1, 4]).unwrap();
        let r = martingale_check(&f, &[2], 2).unwrap();
        assert_eq!((r.v_full.clone(), r.step_norm_sq.clone()), (q(0), q(0)));
        let r = martingale_check(&f, &[1, 2, 4], 2).unwrap();
        assert!(r.identity_holds(), "{r:?}");
        assert!(r.difference_bound_holds(), "{r:?}");
        // AND_{1,4} with I = {1,2,4}, i = 2: the step carries 1/10 while the
        // halved derivatives only average 1/20.
        assert_eq!(r.step_norm_sq, frac(1, 10));
        assert_eq!(r.derivative_average, frac(1, 20));
        assert!(!r.inequality_holds());
        let sym = and_function(&d, &[5]).unwrap();
        let r = martingale_check(&sym, &[1, 2, 3], 1).unwrap();
        assert_eq!(r.v_full, r.v_reduced);
        assert!(martingale_check(&f, &[1, 2], 3).is_err());
    }

    #[test]
    fn flipped_point_defect() {
        let d = make_domain(5, 2).unwrap();
        let x1 = SliceFunction::dictator(&d, 1).unwrap();
        let flipped = flip_point(&x1, 0b00011).unwrap();
        assert_eq!(flipped.distance(&x1).unwrap(), frac(1, 10));
        assert_eq!(boolean_defect(&x1), q(0));
        assert!(is_dyadic_valued(&x1.scale(&frac(1, 2)), 1));
    }
}
