//! k-tuples of disjoint ordered pairs, the shifted/sorted predicates, the
//! termination measure `m = inv + d + I`, and the shifting rewrite system that
//! expands any derivative into permuted shifted sorted derivatives.

use std::cmp::Ordering;
use std::fmt;

use crate::combin::subsets_of_size;
use crate::error::{Result, SliceError};
use crate::slice::Permutation;

/// A set of `k` disjoint pairs `(a, b)` with `a < b`, stored sorted by `a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KTuple {
    pairs: Vec<(usize, usize)>,
}

impl KTuple {
    pub fn new(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = Vec::new();
        for &(a, b) in pairs {
            if a == 0 || a >= b {
                return Err(SliceError::InvalidTuple(format!(
                    "pair ({a},{b}) needs 1 <= a < b"
                )));
            }
            for c in [a, b] {
                if seen.contains(&c) {
                    return Err(SliceError::InvalidTuple(format!(
                        "coordinate {c} appears twice"
                    )));
                }
                seen.push(c);
            }
        }
        let mut pairs = pairs.to_vec();
        pairs.sort_unstable();
        Ok(KTuple { pairs })
    }

    pub fn empty() -> Self {
        KTuple { pairs: Vec::new() }
    }

    /// Checks every endpoint lies in `1..=n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self.pairs.iter().find(|&&(_, b)| b > n) {
            Some(&(a, b)) => Err(SliceError::InvalidTuple(format!(
                "pair ({a},{b}) exceeds n = {n}"
            ))),
            None => Ok(()),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The order `k` of the tuple.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Mask of all `2k` endpoints.
    pub fn union_mask(&self) -> u64 {
        self.pairs
            .iter()
            .fold(0u64, |m, &(a, b)| m | 1u64 << (a - 1) | 1u64 << (b - 1))
    }

    pub fn contains(&self, c: usize) -> bool {
        self.union_mask() >> (c - 1) & 1 == 1
    }

    /// The `b` endpoints in increasing order.
    pub fn b_set(&self) -> Vec<usize> {
        let mut bs: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        bs.sort_unstable();
        bs
    }

    /// Parses `(a1,b1)(a2,b2)...`; `{}` or an empty string is the empty tuple.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if s.is_empty() || s == "{}" {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        let bytes = s.as_bytes();
        let mut pos = 0;
        let err = |pos: usize, msg: &str| SliceError::Parse {
            pos,
            msg: msg.to_string(),
        };
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if bytes[pos] != b'(' {
                return Err(err(pos, "expected '('"));
            }
            let close = s[pos..]
                .find(')')
                .map(|i| i + pos)
                .ok_or_else(|| err(pos, "unclosed '('"))?;
            let inner = &s[pos + 1..close];
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| err(pos + 1, "expected 'a,b'"))?;
            let a: usize = a.trim().parse().map_err(|_| err(pos + 1, "bad coordinate"))?;
            let b: usize = b.trim().parse().map_err(|_| err(pos + 1, "bad coordinate"))?;
            pairs.push((a, b));
            pos = close + 1;
        }
        Self::new(&pairs)
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "{{}}");
        }
        for (a, b) in &self.pairs {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Lexicographic order on sorted `b`-sequences (total on shifted sorted tuples
/// of equal order).
pub fn lex_cmp(p: &KTuple, q: &KTuple) -> Ordering {
    p.b_set().cmp(&q.b_set())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub shifted: bool,
    pub sorted: bool,
}

impl Classification {
    pub fn is_shifted_sorted(&self) -> bool {
        self.shifted && self.sorted
    }
}

fn is_shifted(p: &KTuple) -> bool {
    let u = p.union_mask();
    p.pairs.iter().all(|&(a, _)| {
        let prefix = (1u64 << a) - 1;
        u & prefix == prefix
    })
}

fn is_sorted(p: &KTuple) -> bool {
    // Pairs are stored by increasing a, so sortedness means increasing b too.
    p.pairs.windows(2).all(|w| w[0].1 < w[1].1)
}

pub fn classify(p: &KTuple, n: usize) -> Result<Classification> {
    p.validate(n)?;
    Ok(Classification {
        shifted: is_shifted(p),
        sorted: is_sorted(p),
    })
}

pub fn is_shifted_sorted(p: &KTuple) -> bool {
    is_shifted(p) && is_sorted(p)
}

/// All shifted sorted `k`-tuples over `[n]` in increasing lexicographic order.
///
/// A shifted sorted tuple is determined by its `b`-set: the `a`'s must be the
/// `k` smallest coordinates outside it, paired in order.
pub fn enumerate_shifted_sorted(n: usize, k: usize) -> Vec<KTuple> {
    if 2 * k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for bs in subsets_of_size(n, k) {
        let a_s: Vec<usize> = (1..=n).filter(|c| !bs.contains(c)).take(k).collect();
        if a_s.iter().zip(&bs).all(|(a, b)| a < b) {
            let pairs: Vec<(usize, usize)> = a_s.into_iter().zip(bs).collect();
            out.push(KTuple { pairs });
        }
    }
    out
}

/// Every `k`-tuple over `[n]`, shifted sorted or not.
pub fn all_tuples(n: usize, k: usize) -> Vec<KTuple> {
    fn rec(n: usize, k: usize, used: u64, min_a: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<KTuple>) {
        if cur.len() == k {
            out.push(KTuple { pairs: cur.clone() });
            return;
        }
        for a in min_a..=n {
            if used >> (a - 1) & 1 == 1 {
                continue;
            }
            for b in a + 1..=n {
                if used >> (b - 1) & 1 == 1 {
                    continue;
                }
                cur.push((a, b));
                rec(n, k, used | 1 << (a - 1) | 1 << (b - 1), a + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if 2 * k <= n {
        rec(n, k, 0, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Components of the termination measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleMeasure {
    pub inv: usize,
    pub d: usize,
    pub i_term: usize,
    pub m: usize,
}

pub fn measure(p: &KTuple, n: usize) -> Result<TupleMeasure> {
    p.validate(n)?;
    let k = p.len();
    let inv = p
        .pairs
        .iter()
        .flat_map(|x| p.pairs.iter().map(move |y| (x, y)))
        .filter(|((a, b), (a2, b2))| a < a2 && b > b2)
        .count();
    let u = p.union_mask();
    // Rank within the union, 1-based.
    let rank = |c: usize| (u & ((1u64 << c) - 1)).count_ones() as usize;
    let d = p.pairs.iter().map(|&(a, b)| rank(b) - rank(a)).sum();
    let prefix = (u.trailing_ones() as usize).min(n);
    let i_term = (3 * k + 1) * (2 * k - prefix);
    Ok(TupleMeasure {
        inv,
        d,
        i_term,
        m: inv + d + i_term,
    })
}

/// A derivative `D_tuple f` evaluated at `x^perm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub tuple: KTuple,
    pub perm: Permutation,
}

fn replace_pairs(p: &KTuple, remove: &[(usize, usize)], add: &[(usize, usize)]) -> KTuple {
    let mut pairs: Vec<(usize, usize)> = p
        .pairs
        .iter()
        .copied()
        .filter(|q| !remove.contains(q))
        .collect();
    pairs.extend_from_slice(add);
    pairs.sort_unstable();
    KTuple { pairs }
}

/// One shifting step: `D_P f(x^pi) = D_S f(x^sigma) + D_T f(x^tau)`.
///
/// A non-sorted tuple is untangled at the inversion `(w,z),(x,y)` with
/// `w < x < y < z` minimising `(w, x)`; a sorted non-shifted tuple has its
/// pair with the least uncovered `a` pulled down to `u = min([n] \ ∪P)`.
pub fn rewrite_step(
    p: &KTuple,
    pi: &Permutation,
    n: usize,
) -> Result<(ExpansionTerm, ExpansionTerm)> {
    p.validate(n)?;
    if pi.n() != n {
        return Err(SliceError::SizeMismatch {
            expected: n,
            got: pi.n(),
        });
    }
    let swap = |i: usize, j: usize| -> Permutation {
        Permutation::transposition(n, i, j)
            .expect("endpoints validated")
            .compose(pi)
    };
    if !is_sorted(p) {
        let (w, z, x, y) = p
            .pairs
            .iter()
            .flat_map(|&(w, z)| p.pairs.iter().map(move |&(x, y)| (w, z, x, y)))
            .filter(|&(w, z, x, y)| w < x && y < z)
            .min_by_key(|&(w, _, x, _)| (w, x))
            .expect("a non-sorted tuple has an inversion");
        let s = replace_pairs(p, &[(w, z), (x, y)], &[(w, x), (y, z)]);
        let t = replace_pairs(p, &[(w, z), (x, y)], &[(w, y), (x, z)]);
        return Ok((
            ExpansionTerm {
                tuple: s,
                perm: swap(w, y),
            },
            ExpansionTerm {
                tuple: t,
                perm: swap(z, y),
            },
        ));
    }
    let u_mask = p.union_mask();
    let Some(&(a, b)) = p.pairs.iter().find(|&&(a, _)| {
        let prefix = (1u64 << a) - 1;
        u_mask & prefix != prefix
    }) else {
        return Err(SliceError::AlreadyShiftedSorted);
    };
    let u = (u_mask.trailing_ones() + 1) as usize;
    let s = replace_pairs(p, &[(a, b)], &[(u, a)]);
    let t = replace_pairs(p, &[(a, b)], &[(u, b)]);
    Ok((
        ExpansionTerm {
            tuple: s,
            perm: swap(u, b),
        },
        ExpansionTerm {
            tuple: t,
            perm: swap(u, a),
        },
    ))
}

/// A node of the rewrite tree; leaves carry shifted sorted tuples.
#[derive(Clone, Debug)]
pub struct ExpansionNode {
    pub term: ExpansionTerm,
    pub measure: TupleMeasure,
    pub children: Option<Box<(ExpansionNode, ExpansionNode)>>,
}

impl ExpansionNode {
    pub fn leaves(&self) -> Vec<ExpansionTerm> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<ExpansionTerm>) {
        match &self.children {
            None => out.push(self.term.clone()),
            Some(kids) => {
                kids.0.collect_leaves(out);
                kids.1.collect_leaves(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match &self.children {
            None => 0,
            Some(kids) => 1 + kids.0.depth().max(kids.1.depth()),
        }
    }

    /// Visits every parent→child edge.
    pub fn edges(&self) -> Vec<(&ExpansionNode, &ExpansionNode)> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let Some(kids) = &node.children {
                out.push((node, &kids.0));
                out.push((node, &kids.1));
                stack.push(&kids.0);
                stack.push(&kids.1);
            }
        }
        out
    }

    /// Indented text rendering, one term per line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(0, &mut s);
        s
    }

    fn render_into(&self, depth: usize, s: &mut String) {
        let tag = if self.children.is_none() { "  [leaf]" } else { "" };
        s.push_str(&format!(
            "{}D{} f(x^{})  m = {} + {} + {} = {}{}\n",
            "  ".repeat(depth),
            self.term.tuple,
            self.term.perm,
            self.measure.inv,
            self.measure.d,
            self.measure.i_term,
            self.measure.m,
            tag
        ));
        if let Some(kids) = &self.children {
            kids.0.render_into(depth + 1, s);
            kids.1.render_into(depth + 1, s);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "tuple": self.term.tuple.to_string(),
            "perm": self.term.perm.to_string(),
            "inv": self.measure.inv,
            "d": self.measure.d,
            "I": self.measure.i_term,
            "m": self.measure.m,
        });
        if let Some(kids) = &self.children {
            v["children"] = serde_json::json!([kids.0.to_json(), kids.1.to_json()]);
        }
        v
    }
}

fn expand_node(term: ExpansionTerm, n: usize) -> Result<ExpansionNode> {
    let m = measure(&term.tuple, n)?;
    if is_shifted_sorted(&term.tuple) {
        return Ok(ExpansionNode {
            term,
            measure: m,
            children: None,
        });
    }
    let (s, t) = rewrite_step(&term.tuple, &term.perm, n)?;
    let left = expand_node(s, n)?;
    let right = expand_node(t, n)?;
    Ok(ExpansionNode {
        term,
        measure: m,
        children: Some(Box::new((left, right))),
    })
}

/// Full rewrite tree rooted at `(P, id)`.
pub fn expansion_tree(p: &KTuple, n: usize) -> Result<ExpansionNode> {
    p.validate(n)?;
    if 2 * p.len() > n {
        return Err(SliceError::InvalidTuple(format!("{p} needs 2k <= n = {n}")));
    }
    expand_node(
        ExpansionTerm {
            tuple: p.clone(),
            perm: Permutation::identity(n),
        },
        n,
    )
}

/// Leaves of the rewrite tree: `D_P f(x) = Σ D_{P_i} f(x^{pi_i})`, all with
/// coefficient +1.
pub fn expand_to_shifted_sorted(p: &KTuple, n: usize) -> Result<Vec<ExpansionTerm>> {
    Ok(expansion_tree(p, n)?.leaves())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(pairs: &[(usize, usize)]) -> KTuple {
        KTuple::new(pairs).unwrap()
    }

    #[test]
    fn construction_rejects_bad_pairs() {
        assert!(KTuple::new(&[(2, 1)]).is_err());
        assert!(KTuple::new(&[(1, 2), (2, 3)]).is_err());
        assert!(KTuple::new(&[(0, 2)]).is_err());
        assert!(t(&[(1, 9)]).validate(8).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let p = KTuple::parse("(2,8)(6,7)").unwrap();
        assert_eq!(p, t(&[(6, 7), (2, 8)]));
        assert_eq!(p.to_string(), "(2,8)(6,7)");
        assert_eq!(KTuple::parse("{}").unwrap(), KTuple::empty());
        assert!(matches!(
            KTuple::parse("(2,8)x"),
            Err(SliceError::Parse { pos: 5, .. })
        ));
    }

    #[test]
    fn classification_examples() {
        let c = classify(&t(&[(1, 2), (3, 4)]), 5).unwrap();
        assert!(c.shifted && c.sorted);
        let c = classify(&t(&[(2, 8), (6, 7)]), 8).unwrap();
        assert!(!c.shifted && !c.sorted);
        let c = classify(&t(&[(2, 6), (7, 8)]), 8).unwrap();
        assert!(!c.shifted && c.sorted);
    }

    #[test]
    fn enumeration_examples() {
        let got = enumerate_shifted_sorted(5, 2);
        let want = vec![
            t(&[(1, 2), (3, 4)]),
            t(&[(1, 2), (3, 5)]),
            t(&[(1, 3), (2, 4)]),
            t(&[(1, 3), (2, 5)]),
            t(&[(1, 4), (2, 5)]),
        ];
        assert_eq!(got, want);
        assert_eq!(enumerate_shifted_sorted(3, 1), vec![t(&[(1, 2)]), t(&[(1, 3)])]);
        assert_eq!(
            enumerate_shifted_sorted(4, 2),
            vec![t(&[(1, 2), (3, 4)]), t(&[(1, 3), (2, 4)])]
        );
        assert!(enumerate_shifted_sorted(3, 2).is_empty());
        assert_eq!(enumerate_shifted_sorted(4, 0), vec![KTuple::empty()]);
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        for n in 1..=8 {
            for k in 0..=n / 2 {
                let brute: Vec<KTuple> = {
                    let mut v: Vec<KTuple> = all_tuples(n, k)
                        .into_iter()
                        .filter(is_shifted_sorted)
                        .collect();
                    v.sort_by(lex_cmp);
                    v
                };
                assert_eq!(enumerate_shifted_sorted(n, k), brute, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn worked_measures() {
        let m = measure(&t(&[(2, 8), (6, 7)]), 8).unwrap();
        assert_eq!((m.inv, m.d, m.i_term, m.m), (1, 4, 28, 33));
        assert_eq!(measure(&t(&[(2, 6), (7, 8)]), 8).unwrap().m, 30);
        assert_eq!(measure(&t(&[(2, 7), (6, 8)]), 8).unwrap().m, 32);
        assert_eq!(measure(&t(&[(1, 7), (2, 6)]), 8).unwrap().m, 19);
        // Order-isomorphic to {(1,7),(2,6)} with the same covered prefix.
        let m = measure(&t(&[(1, 8), (2, 6)]), 8).unwrap();
        assert_eq!((m.inv, m.d, m.i_term, m.m), (1, 4, 14, 19));
        assert_eq!(measure(&KTuple::empty(), 3).unwrap().m, 0);
    }

    #[test]
    fn measure_bounds_hold_for_all_small_tuples() {
        for n in 2..=8 {
            for k in 1..=n / 2 {
                for p in all_tuples(n, k) {
                    let m = measure(&p, n).unwrap();
                    assert!(m.inv <= k * (k - 1) / 2);
                    assert!(m.d <= k * k);
                    assert!(m.i_term <= 6 * k * k + 2 * k);
                    assert!(m.m <= 9 * k * k);
                }
            }
        }
    }

    #[test]
    fn flip_step_matches_worked_example() {
        let id = Permutation::identity(8);
        let (s, tt) = rewrite_step(&t(&[(2, 8), (6, 7)]), &id, 8).unwrap();
        assert_eq!(s.tuple, t(&[(2, 6), (7, 8)]));
        assert_eq!(s.perm, Permutation::transposition(8, 2, 7).unwrap());
        assert_eq!(tt.tuple, t(&[(2, 7), (6, 8)]));
        assert_eq!(tt.perm, Permutation::transposition(8, 7, 8).unwrap());
    }

    #[test]
    fn alter_step_uses_minimal_a() {
        let id = Permutation::identity(8);
        let (s, tt) = rewrite_step(&t(&[(2, 6), (7, 8)]), &id, 8).unwrap();
        assert_eq!(s.tuple, t(&[(1, 2), (7, 8)]));
        assert_eq!(s.perm, Permutation::transposition(8, 1, 6).unwrap());
        assert_eq!(tt.tuple, t(&[(1, 6), (7, 8)]));
        assert_eq!(tt.perm, Permutation::transposition(8, 1, 2).unwrap());
        assert_eq!(measure(&s.tuple, 8).unwrap().m, 16);
        assert_eq!(measure(&tt.tuple, 8).unwrap().m, 23);
        assert_eq!(
            rewrite_step(&t(&[(1, 2)]), &Permutation::identity(3), 3),
            Err(SliceError::AlreadyShiftedSorted)
        );
    }

    #[test]
    fn single_pair_expansion() {
        let leaves = expand_to_shifted_sorted(&t(&[(2, 3)]), 3).unwrap();
        let tuples: Vec<KTuple> = leaves.iter().map(|l| l.tuple.clone()).collect();
        assert_eq!(tuples, vec![t(&[(1, 2)]), t(&[(1, 3)])]);
        let leaves = expand_to_shifted_sorted(&t(&[(1, 2), (3, 4)]), 5).unwrap();
        assert_eq!(leaves.len(), 1);
        assert!(leaves[0].perm.is_identity());
    }

    #[test]
    fn every_edge_decreases_measure() {
        for n in 4..=8 {
            for k in 1..=2.min(n / 2) {
                for p in all_tuples(n, k) {
                    let tree = expansion_tree(&p, n).unwrap();
                    for (parent, child) in tree.edges() {
                        assert!(child.measure.m < parent.measure.m);
                    }
                    assert!(tree.depth() <= tree.measure.m);
                    let leaves = tree.leaves();
                    assert!((leaves.len() as u128) <= 1u128 << tree.measure.m.min(127));
                    assert!(leaves.iter().all(|l| is_shifted_sorted(&l.tuple)));
                }
            }
        }
    }
}
