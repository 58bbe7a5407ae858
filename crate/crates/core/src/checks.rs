//! Brute-force verification of the algebraic identities and inequalities the
//! library relies on, grouped into named suites for the `verify` command.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{build_from_derivatives, derivative, implied_derivative, DerivativeAssignment};
use crate::combin::subsets_up_to;
use crate::error::{Result, SliceError};
use crate::funcspec::random_rational;
use crate::harmonic::{
    and_function, compatibility_identity_check, degree, project_levels, span_dims_check, top_level,
};
use crate::noise::{hypergeometric_tail, laplacian, level_eigenvalue, split_levels_gap};
use crate::rational::{q, sqrt_lower, sqrt_upper, Q};
use crate::slice::{inner_product, make_domain, Permutation, SliceDomain, SliceFunction};
use crate::structure::{approximate, martingale_check, support_bound_check};
use crate::tuples::{all_tuples, expansion_tree, measure, KTuple};

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn tuple_of(pairs: &[(usize, usize)]) -> Result<KTuple> {
    let mut ps: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| pair(a, b)).collect();
    ps.sort_unstable();
    KTuple::new(&ps)
}

fn transposition(n: usize, a: usize, b: usize) -> Result<Permutation> {
    Permutation::transposition(n, a, b)
}

/// The cycle `a → b → c → a`.
fn three_cycle(n: usize, a: usize, b: usize, c: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    images[a - 1] = b;
    images[b - 1] = c;
    images[c - 1] = a;
    Permutation::from_images(&images).expect("distinct coordinates")
}

fn first_mismatch(dom: &SliceDomain, mut ok: impl FnMut(u64) -> bool) -> Option<u64> {
    dom.elements().iter().copied().find(|&x| !ok(x))
}

/// `(D_ab D_cd f)(x) = (D_ac D_bd f)(x^{(a d)}) + (D_ad D_bc f)(x^{(b d)})`.
/// Returns the first point where it fails.
pub fn flip_identity(f: &SliceFunction, [a, b, c, d]: [usize; 4]) -> Result<Option<u64>> {
    let n = f.domain().n();
    let lhs = derivative(f, &tuple_of(&[(a, b), (c, d)])?)?;
    let r1 = derivative(f, &tuple_of(&[(a, c), (b, d)])?)?;
    let r2 = derivative(f, &tuple_of(&[(a, d), (b, c)])?)?;
    let (s1, s2) = (transposition(n, a, d)?, transposition(n, b, d)?);
    Ok(first_mismatch(f.domain(), |x| {
        *lhs.at(x) == r1.at(s1.act(x)) + r2.at(s2.act(x))
    }))
}

/// `(D_bc f)(x) = (D_ab f)(x^{(a c)}) + (D_ac f)(x^{(a b)})`.
pub fn alter_identity(f: &SliceFunction, [a, b, c]: [usize; 3]) -> Result<Option<u64>> {
    let n = f.domain().n();
    let lhs = derivative(f, &tuple_of(&[(b, c)])?)?;
    let r1 = derivative(f, &tuple_of(&[(a, b)])?)?;
    let r2 = derivative(f, &tuple_of(&[(a, c)])?)?;
    let (s1, s2) = (transposition(n, a, c)?, transposition(n, a, b)?);
    Ok(first_mismatch(f.domain(), |x| {
        *lhs.at(x) == r1.at(s1.act(x)) + r2.at(s2.act(x))
    }))
}

/// `Σ_{σ ∈ S_3} sgn(σ) f(x^σ) = 0`, with `S_3` acting on `{a, b, c}`.
pub fn alter2_identity(f: &SliceFunction, [a, b, c]: [usize; 3]) -> Result<Option<u64>> {
    let n = f.domain().n();
    let even = [
        Permutation::identity(n),
        three_cycle(n, a, b, c),
        three_cycle(n, a, c, b),
    ];
    let odd = [
        transposition(n, a, b)?,
        transposition(n, a, c)?,
        transposition(n, b, c)?,
    ];
    Ok(first_mismatch(f.domain(), |x| {
        let plus = even.iter().fold(Q::zero(), |acc, s| acc + f.at(s.act(x)));
        let minus = odd.iter().fold(Q::zero(), |acc, s| acc + f.at(s.act(x)));
        plus == minus
    }))
}

/// `(D_bc f)(x) = (D_ab f)(x) + (D_ac f)(x^{(a b)}) + (D_ab f)(x^{(a b c)})`,
/// where `(a b c)` sends `a → b → c → a`.
pub fn replacement_identity(f: &SliceFunction, [a, b, c]: [usize; 3]) -> Result<Option<u64>> {
    let n = f.domain().n();
    let lhs = derivative(f, &tuple_of(&[(b, c)])?)?;
    let dab = derivative(f, &tuple_of(&[(a, b)])?)?;
    let dac = derivative(f, &tuple_of(&[(a, c)])?)?;
    let swap = transposition(n, a, b)?;
    let cycle = three_cycle(n, a, b, c);
    Ok(first_mismatch(f.domain(), |x| {
        *lhs.at(x) == dab.at(x) + dac.at(swap.act(x)) + dab.at(cycle.act(x))
    }))
}

/// `D_P f(x) = Σ_leaves D_{P_i} f(x^{π_i})` at every point, for `f` given.
pub fn expansion_identity(f: &SliceFunction, p: &KTuple) -> Result<Option<u64>> {
    let n = f.domain().n();
    let lhs = derivative(f, p)?;
    let leaves = expansion_tree(p, n)?.leaves();
    let parts: Vec<SliceFunction> = leaves
        .iter()
        .map(|leaf| derivative(f, &leaf.tuple))
        .collect::<Result<_>>()?;
    Ok(first_mismatch(f.domain(), |x| {
        let rhs = leaves
            .iter()
            .zip(&parts)
            .fold(Q::zero(), |acc, (leaf, d)| acc + d.at(leaf.perm.act(x)));
        *lhs.at(x) == rhs
    }))
}

/// Outcome of comparing a norm with a sum of norms without floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certified {
    Holds,
    Fails,
    Undecided,
}

/// Decides `sqrt(lhs) ≤ Σ sqrt(terms)` using rational bounds on each root.
pub fn certify_sqrt_sum(lhs: &Q, terms: &[Q]) -> Certified {
    const BITS: usize = 64;
    if let [only] = terms {
        return if lhs <= only { Certified::Holds } else { Certified::Fails };
    }
    let lower: Q = terms.iter().fold(Q::zero(), |acc, t| acc + sqrt_lower(t, BITS));
    if *lhs <= &lower * &lower {
        return Certified::Holds;
    }
    let upper: Q = terms.iter().fold(Q::zero(), |acc, t| acc + sqrt_upper(t, BITS));
    if *lhs > &upper * &upper {
        Certified::Fails
    } else {
        Certified::Undecided
    }
}

/// `‖D_P f‖ ≤ Σ_leaves ‖D_{leaf} f‖`, certified exactly.
pub fn triangle_bound(f: &SliceFunction, p: &KTuple) -> Result<Certified> {
    let lhs = derivative(f, p)?.norm_sq();
    let terms: Vec<Q> = expansion_tree(p, f.domain().n())?
        .leaves()
        .iter()
        .map(|leaf| derivative(f, &leaf.tuple).map(|d| d.norm_sq()))
        .collect::<Result<_>>()?;
    Ok(certify_sqrt_sum(&lhs, &terms))
}

/// One line of a suite report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let tag = if o.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}/{}: {}\n", self.suite, o.name, o.detail));
        }
        out
    }
}

/// Parameters shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n: usize,
    pub ell: usize,
    pub seed: u64,
    /// Number of random functions where a suite samples.
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(n: usize, ell: usize) -> Self {
        SuiteConfig {
            n,
            ell,
            seed: 0,
            samples: 20,
        }
    }
}

pub const SUITES: &[&str] = &[
    "identities",
    "projection",
    "parseval",
    "spans",
    "compatibility",
    "laplacian",
    "constructor",
    "rewrite",
    "fixed-point",
    "support",
    "tail",
    "martingale",
    "split-levels",
];

struct Tally {
    name: String,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.into(),
            cases: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self) -> CheckOutcome {
        let detail = match &self.failure {
            None => format!("{} cases", self.cases),
            Some(f) => format!("{} cases, first failure: {f}", self.cases),
        };
        CheckOutcome {
            name: self.name,
            passed: self.failure.is_none(),
            detail,
        }
    }
}

fn ordered_choices(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in 1..=n {
            if !cur.contains(&c) {
                cur.push(c);
                go(n, r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, r, &mut Vec::new(), &mut out);
    out
}

fn random_functions(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Vec<SliceFunction> {
    (0..cfg.samples as u64)
        .map(|i| random_rational(dom, cfg.seed.wrapping_add(i)))
        .collect()
}

fn deltas(dom: &Arc<SliceDomain>) -> Vec<SliceFunction> {
    dom.elements()
        .iter()
        .map(|&x| SliceFunction::delta(dom, x))
        .collect()
}

fn suite_identities(dom: &Arc<SliceDomain>) -> Result<Vec<CheckOutcome>> {
    let n = dom.n();
    let fs = deltas(dom);
    let mut flip = Tally::new("flip");
    let mut alter = Tally::new("alter");
    let mut alter2 = Tally::new("alter2");
    let mut replacement = Tally::new("replacement");
    for f in &fs {
        if n >= 4 {
            for c in ordered_choices(n, 4) {
                let labels = [c[0], c[1], c[2], c[3]];
                let bad = flip_identity(f, labels)?;
                flip.check(bad.is_none(), || format!("{labels:?} at {:#b}", bad.unwrap_or(0)));
            }
        }
        if n >= 3 {
            for c in ordered_choices(n, 3) {
                let labels = [c[0], c[1], c[2]];
                let bad = alter_identity(f, labels)?;
                alter.check(bad.is_none(), || format!("{labels:?} at {:#b}", bad.unwrap_or(0)));
                let bad = alter2_identity(f, labels)?;
                alter2.check(bad.is_none(), || format!("{labels:?} at {:#b}", bad.unwrap_or(0)));
                let bad = replacement_identity(f, labels)?;
                replacement.check(bad.is_none(), || format!("{labels:?} at {:#b}", bad.unwrap_or(0)));
            }
        }
    }
    Ok(vec![flip.finish(), alter.finish(), alter2.finish(), replacement.finish()])
}

fn suite_projection(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut tuples = all_tuples(dom.n(), 1);
    if dom.n() >= 4 {
        tuples.extend(all_tuples(dom.n(), 2));
    }
    let mut idem = Tally::new("idempotent");
    let mut adjoint = Tally::new("self-adjoint");
    let mut contract = Tally::new("contracting");
    let fs = random_functions(dom, cfg);
    for (i, f) in fs.iter().enumerate() {
        let g = &fs[(i + 1) % fs.len()];
        for p in &tuples {
            let df = derivative(f, p)?;
            idem.check(derivative(&df, p)? == df, || p.to_string());
            let dg = derivative(g, p)?;
            adjoint.check(inner_product(&df, g)? == inner_product(f, &dg)?, || p.to_string());
            let rest = f - &df;
            contract.check(
                df.norm_sq() <= f.norm_sq() && inner_product(&df, &rest)?.is_zero(),
                || p.to_string(),
            );
        }
    }
    Ok(vec![idem.finish(), adjoint.finish(), contract.finish()])
}

fn suite_parseval(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut parseval = Tally::new("parseval");
    let mut orth = Tally::new("orthogonality");
    let mut sum = Tally::new("reconstruction");
    for (i, f) in random_functions(dom, cfg).iter().enumerate() {
        let dec = project_levels(f, dom.ell())?;
        parseval.check(dec.weights.total() == f.norm_sq(), || format!("sample {i}"));
        let total = dec.parts.iter().fold(SliceFunction::zero(dom), |acc, p| &acc + p);
        sum.check(total == *f, || format!("sample {i}"));
        for a in 0..dec.parts.len() {
            for b in a + 1..dec.parts.len() {
                let ip = inner_product(&dec.parts[a], &dec.parts[b])?;
                orth.check(ip.is_zero(), || format!("sample {i}, levels {a} and {b}"));
            }
        }
    }
    Ok(vec![parseval.finish(), orth.finish(), sum.finish()])
}

fn suite_spans(dom: &Arc<SliceDomain>) -> Result<Vec<CheckOutcome>> {
    let mut t = Tally::new("and-psi-span");
    for k in 0..=top_level(dom).min(3) {
        let r = span_dims_check(dom, k)?;
        t.check(r.spans_agree(), || format!("k={k}: {r:?}"));
    }
    Ok(vec![t.finish()])
}

fn suite_compatibility(dom: &Arc<SliceDomain>) -> Result<Vec<CheckOutcome>> {
    let mut t = Tally::new("compatibility");
    for coords in subsets_up_to(dom.n(), 3) {
        let r = compatibility_identity_check(dom, &coords)?;
        t.check(r.holds(), || format!("T={coords:?}"));
    }
    Ok(vec![t.finish()])
}

fn suite_laplacian(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut t = Tally::new("eigenvalues");
    for (i, f) in random_functions(dom, cfg).iter().enumerate() {
        let dec = project_levels(f, dom.ell())?;
        for (d, part) in dec.parts.iter().enumerate() {
            let ok = laplacian(part)? == part.scale(&level_eigenvalue(dom.n(), d));
            t.check(ok, || format!("sample {i}, level {d}"));
        }
    }
    Ok(vec![t.finish()])
}

fn random_assignment(rng: &mut ChaCha8Rng, n: usize, l: usize) -> Result<DerivativeAssignment> {
    let unit = BigInt::one() << l;
    DerivativeAssignment::from_fn(n, l, |_| {
        Q::new(BigInt::from(rng.random_range(-4i64..=4)), unit.clone())
    })
}

fn suite_constructor(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let n = dom.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut deg = Tally::new("degree");
    let mut prescribed = Tally::new("prescribed-derivatives");
    let mut implied = Tally::new("implied-derivatives");
    for l in 1..=2usize.min(dom.ell()).min(n / 2) {
        for s in 0..cfg.samples {
            let z = random_assignment(&mut rng, n, l)?;
            let f = build_from_derivatives(dom, &z)?;
            deg.check(degree(&f)? <= l, || format!("l={l}, sample {s}"));
            for (p, v) in z.entries() {
                let want = crate::harmonic::psi_function(dom, p)?.scale(v);
                prescribed.check(derivative(&f, p)? == want, || format!("l={l}, {p}"));
            }
            if degree(&f)? == l {
                for p in all_tuples(n, l) {
                    let ok = derivative(&f, &p)? == implied_derivative(dom, &z, &p)?;
                    implied.check(ok, || format!("l={l}, {p}"));
                }
            }
        }
    }
    Ok(vec![deg.finish(), prescribed.finish(), implied.finish()])
}

fn suite_rewrite(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let n = dom.n();
    let mut identity = Tally::new("expansion-identity");
    let mut decrease = Tally::new("measure-decrease");
    let mut leaves = Tally::new("leaf-count");
    let mut triangle = Tally::new("triangle-bound");
    if n < 4 {
        return Ok(vec![identity.finish()]);
    }
    let fs = deltas(dom);
    let randoms = random_functions(dom, cfg);
    for p in all_tuples(n, 2) {
        let tree = expansion_tree(&p, n)?;
        for (parent, child) in tree.edges() {
            decrease.check(child.measure.m < parent.measure.m, || {
                format!("{} -> {}", parent.term.tuple, child.term.tuple)
            });
        }
        let m = measure(&p, n)?.m;
        let count = tree.leaves().len();
        leaves.check(m >= 64 || count as u64 <= 1u64 << m, || format!("{p}: {count} leaves, m={m}"));
        for f in &fs {
            let bad = expansion_identity(f, &p)?;
            identity.check(bad.is_none(), || format!("{p} at {:#b}", bad.unwrap_or(0)));
        }
        for f in &randoms {
            let c = triangle_bound(f, &p)?;
            triangle.check(c == Certified::Holds, || format!("{p}: {c:?}"));
        }
    }
    Ok(vec![identity.finish(), decrease.finish(), leaves.finish(), triangle.finish()])
}

fn suite_fixed_point(dom: &Arc<SliceDomain>) -> Result<Vec<CheckOutcome>> {
    let n = dom.n();
    let k = 2usize.min(dom.ell()).min(n / 2);
    let mut t = Tally::new("fixed-point");
    let mut inputs: Vec<(String, SliceFunction)> = vec![
        ("const:0".into(), SliceFunction::constant(dom, q(0))),
        ("const:1".into(), SliceFunction::constant(dom, q(1))),
    ];
    for i in 1..=n {
        inputs.push((format!("dictator:{i}"), SliceFunction::dictator(dom, i)?));
    }
    for coords in subsets_up_to(n, k) {
        inputs.push((format!("and:{coords:?}"), and_function(dom, &coords)?));
    }
    for (name, f) in &inputs {
        let r = approximate(f, k)?;
        t.check(r.g == *f && r.distance.is_zero(), || format!("{name}, k={k}"));
    }
    Ok(vec![t.finish()])
}

fn suite_support(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Tally::new("support-bound");
    for k in 1..=2usize.min(dom.ell()).min(dom.n() / 2) {
        let monomials = subsets_up_to(dom.n(), k);
        for s in 0..cfg.samples {
            let mut f = SliceFunction::zero(dom);
            for coords in &monomials {
                let c = rng.random_range(-2i64..=2);
                if c != 0 {
                    f = &f + &and_function(dom, coords)?.scale(&q(c));
                }
            }
            let r = support_bound_check(&f, k)?;
            t.check(r.holds(), || format!("k={k}, sample {s}: {r:?}"));
        }
    }
    Ok(vec![t.finish()])
}

fn suite_tail(dom: &Arc<SliceDomain>) -> Result<Vec<CheckOutcome>> {
    let mut t = Tally::new("hypergeometric-tail");
    for s in 0..=dom.n() {
        for tv in [0.5, 1.0, 2.0] {
            let r = hypergeometric_tail(dom.n(), dom.ell(), s, tv)?;
            t.check(r.holds(), || format!("s={s}, t={tv}: {r:?}"));
        }
    }
    Ok(vec![t.finish()])
}

fn suite_martingale(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut identity = Tally::new("identity");
    let mut stated = Tally::new("inequality");
    let mut factor4 = Tally::new("difference-bound");
    for (s, f) in random_functions(dom, cfg).iter().enumerate() {
        for coords in subsets_up_to(dom.n(), 4) {
            for &i in &coords {
                let r = martingale_check(f, &coords, i)?;
                let ctx = || format!("sample {s}, I={coords:?}, i={i}");
                identity.check(r.identity_holds(), ctx);
                stated.check(r.inequality_holds(), ctx);
                factor4.check(r.difference_bound_holds(), ctx);
            }
        }
    }
    Ok(vec![identity.finish(), stated.finish(), factor4.finish()])
}

fn suite_split_levels(dom: &Arc<SliceDomain>, cfg: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let mut t = Tally::new("split-levels");
    for (s, f) in random_functions(dom, cfg).iter().enumerate() {
        for k in 1..=2usize.min(dom.ell()) {
            for tv in [0.1, 1.0, 10.0] {
                let (lhs, rhs) = split_levels_gap(f, k, tv)?;
                t.check(lhs <= rhs + 1e-9 * rhs.abs().max(1.0), || {
                    format!("sample {s}, k={k}, t={tv}: {lhs} > {rhs}")
                });
            }
        }
    }
    Ok(vec![t.finish()])
}

/// Runs one named suite (see [`SUITES`]) on `slice(cfg.n, cfg.ell)`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let dom = make_domain(cfg.n, cfg.ell)?;
    let outcomes = match name {
        "identities" => suite_identities(&dom)?,
        "projection" => suite_projection(&dom, cfg)?,
        "parseval" => suite_parseval(&dom, cfg)?,
        "spans" => suite_spans(&dom)?,
        "compatibility" => suite_compatibility(&dom)?,
        "laplacian" => suite_laplacian(&dom, cfg)?,
        "constructor" => suite_constructor(&dom, cfg)?,
        "rewrite" => suite_rewrite(&dom, cfg)?,
        "fixed-point" => suite_fixed_point(&dom)?,
        "support" => suite_support(&dom, cfg)?,
        "tail" => suite_tail(&dom)?,
        "martingale" => suite_martingale(&dom, cfg)?,
        "split-levels" => suite_split_levels(&dom, cfg)?,
        other => {
            return Err(SliceError::Precondition(format!(
                "unknown suite {other:?}; known suites: {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.into(),
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_small_slices() {
        let r = run_suite("identities", &SuiteConfig::new(5, 2)).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn cycle_orientation_matters_for_replacement() {
        let d = make_domain(4, 2).unwrap();
        let reversed = three_cycle(4, 1, 3, 2);
        let mut reversed_fails = false;
        for &x in d.elements() {
            let f = SliceFunction::delta(&d, x);
            assert_eq!(replacement_identity(&f, [1, 2, 3]).unwrap(), None);
            let d23 = derivative(&f, &tuple_of(&[(2, 3)]).unwrap()).unwrap();
            let d12 = derivative(&f, &tuple_of(&[(1, 2)]).unwrap()).unwrap();
            let d13 = derivative(&f, &tuple_of(&[(1, 3)]).unwrap()).unwrap();
            let swap = transposition(4, 1, 2).unwrap();
            reversed_fails |= d.elements().iter().any(|&y| {
                *d23.at(y) != d12.at(y) + d13.at(swap.act(y)) + d12.at(reversed.act(y))
            });
        }
        assert!(reversed_fails);
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", &SuiteConfig::new(4, 2)).is_err());
    }

    #[test]
    fn sqrt_certification() {
        assert_eq!(certify_sqrt_sum(&q(4), &[q(1), q(1)]), Certified::Holds);
        assert_eq!(certify_sqrt_sum(&q(5), &[q(1), q(1)]), Certified::Fails);
        assert_eq!(certify_sqrt_sum(&q(2), &[q(2)]), Certified::Holds);
    }
}
