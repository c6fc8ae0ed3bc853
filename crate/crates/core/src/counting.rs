//! Closed-form tree counts in exact integers, the `ψ` bijection and the
//! parenthesis encoding.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumerate::stats_histogram;
use crate::error::Result;
use crate::tree::{PlaneTree, TreeStats};

pub type BigCount = BigUint;

/// `binom(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigCount {
    if n < 0 || k < 0 || k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigCount::one();
    for i in 0..k {
        // acc = binom(n, i) here, so the division is exact.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn exact_div(num: BigCount, den: u64) -> BigCount {
    let (q, r) = num.div_rem(&BigCount::from(den));
    assert!(r.is_zero(), "non-integral count: division by {den} left remainder {r}");
    q
}

pub fn catalan(n: usize) -> BigCount {
    let n = n as i64;
    exact_div(binomial(2 * n, n), (n + 1) as u64)
}

/// `M_n = Σ_k binom(n, 2k)·C_k`.
pub fn motzkin(n: usize) -> BigCount {
    (0..=n / 2).map(|k| binomial(n as i64, 2 * k as i64) * catalan(k)).sum()
}

/// Narayana number: trees with `n` edges and `k` leaves.
pub fn count_by_leaves(n: usize, k: usize) -> BigCount {
    if n == 0 {
        return if k == 0 { BigCount::one() } else { BigCount::zero() };
    }
    if k < 1 || k > n {
        return BigCount::zero();
    }
    let (n, k) = (n as i64, k as i64);
    exact_div(binomial(n, k) * binomial(n, k - 1), n as u64)
}

/// Trees with `n` edges and root degree `r`.
pub fn count_by_root(n: usize, r: usize) -> BigCount {
    if n == 0 {
        return if r == 0 { BigCount::one() } else { BigCount::zero() };
    }
    if r < 1 || r > n {
        return BigCount::zero();
    }
    let (n, r) = (n as i64, r as i64);
    exact_div(BigCount::from(r as u64) * binomial(2 * n - 1 - r, n - 1), n as u64)
}

/// Trees with `n` edges and `m` internal nodes: `binom(n−1, m)·M_{n−m−1}`.
pub fn count_by_internal(n: usize, m: usize) -> BigCount {
    if n == 0 {
        return if m == 0 { BigCount::one() } else { BigCount::zero() };
    }
    if m >= n {
        return BigCount::zero();
    }
    binomial(n as i64 - 1, m as i64) * motzkin(n - m - 1)
}

/// Trees with `n` edges, `m` internal nodes, `k` leaves and root degree `r`.
///
/// The closed form covers `n−m > k > r` and `n−m = k = r`. Every tree lies in
/// one of those regimes (a non-root vertex with two or more children forces
/// `k > r`; without one the tree is `r` paths from the root), so the value is
/// 0 elsewhere. [`count_full_resolved`] cross-checks that claim by enumeration.
pub fn count_full(n: usize, m: usize, k: usize, r: usize) -> BigCount {
    if n == 0 {
        return if m == 0 && k == 0 && r == 0 { BigCount::one() } else { BigCount::zero() };
    }
    let (n, m, k, r) = (n as i64, m as i64, k as i64, r as i64);
    if n - m > k && k > r && r >= 1 {
        let num = BigCount::from(r as u64)
            * binomial(n, k + m)
            * binomial(k + m, k)
            * binomial(k - r - 1, n - m - k - 1);
        exact_div(num, n as u64)
    } else if n - m == k && k == r {
        binomial(n - 1, m)
    } else {
        BigCount::zero()
    }
}

/// Where a `count_full` value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountSource {
    /// One of the two regimes with a closed form.
    Formula,
    /// Outside those regimes, looked up in an enumeration histogram.
    Enumeration,
    /// Outside those regimes and above the enumeration guard; the value is
    /// the structural zero and is not backed by a check.
    FormulaIncomplete,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCount {
    pub value: BigCount,
    pub source: CountSource,
}

fn in_formula_regime(n: usize, m: usize, k: usize, r: usize) -> bool {
    let (n, m, k, r) = (n as i64, m as i64, k as i64, r as i64);
    n == 0 || (n - m > k && k > r && r >= 1) || (n - m == k && k == r)
}

/// `count_full` with parameters outside the closed-form regimes resolved by
/// enumeration when `n ≤ guard`.
pub fn count_full_resolved(n: usize, m: usize, k: usize, r: usize, guard: usize) -> Result<FullCount> {
    if in_formula_regime(n, m, k, r) {
        return Ok(FullCount { value: count_full(n, m, k, r), source: CountSource::Formula });
    }
    if n > guard {
        return Ok(FullCount { value: BigCount::zero(), source: CountSource::FormulaIncomplete });
    }
    let hist = stats_histogram(n, guard)?;
    let key = TreeStats { edges: n, leaves: k, internal: m, root_degree: r };
    let value = BigCount::from(hist.get(&key).copied().unwrap_or(0));
    Ok(FullCount { value, source: CountSource::Enumeration })
}

/// Every `(m, k, r)` cell of `T_n` from one enumeration pass, tagged by source.
pub struct FullCountTable {
    n: usize,
    hist: HashMap<TreeStats, u64>,
}

impl FullCountTable {
    pub fn new(n: usize, guard: usize) -> Result<Self> {
        Ok(FullCountTable { n, hist: stats_histogram(n, guard)? })
    }

    pub fn get(&self, m: usize, k: usize, r: usize) -> FullCount {
        let (n, hist) = (self.n, &self.hist);
        if in_formula_regime(n, m, k, r) {
            return FullCount { value: count_full(n, m, k, r), source: CountSource::Formula };
        }
        let key = TreeStats { edges: n, leaves: k, internal: m, root_degree: r };
        FullCount { value: BigCount::from(hist.get(&key).copied().unwrap_or(0)), source: CountSource::Enumeration }
    }

    pub fn enumerated(&self, m: usize, k: usize, r: usize) -> u64 {
        let key = TreeStats { edges: self.n, leaves: k, internal: m, root_degree: r };
        self.hist.get(&key).copied().unwrap_or(0)
    }
}

/// Trees with `m` internal nodes and `k` leaves.
pub fn count_mk(n: usize, m: usize, k: usize) -> BigCount {
    if n == 0 {
        return if m == 0 && k == 0 { BigCount::one() } else { BigCount::zero() };
    }
    let (n, m, k) = (n as i64, m as i64, k as i64);
    if k < 1 {
        return BigCount::zero();
    }
    if n - m > k {
        let num = binomial(n, k + m) * binomial(k + m, k) * binomial(k, n - m - k + 1);
        exact_div(num, n as u64)
    } else if n - m == k {
        binomial(n - 1, m)
    } else {
        BigCount::zero()
    }
}

/// Trees with `k` leaves and root degree `r`.
///
/// Defined for `n > k ≥ r` and `n = k = r`. At `k = r < n` the general form
/// reduces to `binom(n−1, r−1)`, the count of trees made of `r` root paths.
pub fn count_kr(n: usize, k: usize, r: usize) -> BigCount {
    if n == 0 {
        return if k == 0 && r == 0 { BigCount::one() } else { BigCount::zero() };
    }
    let (n, k, r) = (n as i64, k as i64, r as i64);
    if n > k && k >= r && r >= 1 {
        let num = BigCount::from(r as u64) * binomial(n, k) * binomial(n - r - 1, n - k - 1);
        exact_div(num, n as u64)
    } else if n == k && k == r {
        BigCount::one()
    } else {
        BigCount::zero()
    }
}

/// The bijection `ψ(T1 ⋉ T2) = ψ(T2) ⋉ ψ(T1)`, `ψ(single vertex) = single vertex`.
///
/// On words, `( A ) B` maps to `( ψ(B) ) ψ(A)`. Runs in O(n) with an explicit stack.
pub fn psi(t: &PlaneTree) -> PlaneTree {
    let w = t.steps();
    let mut matching = vec![0usize; w.len()];
    let mut open = Vec::new();
    for (i, &s) in w.iter().enumerate() {
        if s {
            open.push(i);
        } else {
            matching[open.pop().expect("balanced word")] = i;
        }
    }

    enum Task {
        Emit(bool),
        Map(usize, usize),
    }
    let mut out = Vec::with_capacity(w.len());
    let mut stack = vec![Task::Map(0, w.len())];
    while let Some(task) = stack.pop() {
        match task {
            Task::Emit(s) => out.push(s),
            Task::Map(lo, hi) if lo == hi => {}
            Task::Map(lo, hi) => {
                let m = matching[lo];
                stack.push(Task::Map(lo + 1, m));
                stack.push(Task::Emit(false));
                stack.push(Task::Map(m + 1, hi));
                stack.push(Task::Emit(true));
            }
        }
    }
    PlaneTree::from_steps_unchecked(out)
}

pub fn to_parens(t: &PlaneTree) -> String {
    t.to_parens()
}

pub fn from_parens(s: &str) -> Result<PlaneTree> {
    PlaneTree::from_parens(s)
}

/// Leaves that have a left sibling: occurrences of `)()` in the word.
pub fn leaves_with_left_sibling(t: &PlaneTree) -> usize {
    t.steps().windows(3).filter(|w| !w[0] && w[1] && !w[2]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_trees;
    use crate::tree::join;
    use std::collections::{BTreeMap, HashSet};

    fn big(x: u64) -> BigCount {
        BigCount::from(x)
    }

    fn hist_by<K: Ord>(n: usize, key: impl Fn(&TreeStats) -> K) -> BTreeMap<K, u64> {
        let mut h = BTreeMap::new();
        for t in enumerate_trees(n) {
            *h.entry(key(&t.stats())).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn small_values() {
        assert_eq!(catalan(3), big(5));
        assert_eq!((0..=4).map(motzkin).collect::<Vec<_>>(), [1u64, 1, 2, 4, 9].map(big));
        assert_eq!(count_by_leaves(4, 2), big(6));
        assert_eq!(count_by_root(3, 1), big(2));
        assert_eq!(count_by_root(4, 2), big(5));
        assert_eq!(count_by_internal(3, 1), big(2));
        assert_eq!(count_by_internal(4, 1), big(6));
        assert_eq!(count_full(3, 0, 2, 1), big(1));
        assert_eq!(count_kr(7, 7, 7), big(1));
        for n in 1..=10 {
            assert_eq!(count_by_leaves(n, 1), big(1));
            assert_eq!(count_by_root(n, n), big(1));
            assert_eq!(count_full(n, 0, n, n), big(1));
        }
        assert_eq!(catalan(30), "3814986502092304".parse::<BigCount>().unwrap());
    }

    #[test]
    fn motzkin_and_marginals_up_to_20() {
        let expected_motzkin: [u64; 21] = [
            1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188, 5798, 15511, 41835, 113634, 310572, 853467, 2356779, 6536382,
            18199284, 50852019,
        ];
        for (n, &m) in expected_motzkin.iter().enumerate() {
            assert_eq!(motzkin(n), big(m));
        }
        for n in 1..=20 {
            let leaves: BigCount = (0..=n).map(|k| count_by_leaves(n, k)).sum();
            let roots: BigCount = (0..=n).map(|r| count_by_root(n, r)).sum();
            let internal: BigCount = (0..=n).map(|m| count_by_internal(n, m)).sum();
            assert_eq!(leaves, catalan(n));
            assert_eq!(roots, catalan(n));
            assert_eq!(internal, catalan(n));
        }
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for n in 0..=10 {
            let leaves = hist_by(n, |s| s.leaves);
            let roots = hist_by(n, |s| s.root_degree);
            let internal = hist_by(n, |s| s.internal);
            let full = hist_by(n, |s| (s.internal, s.leaves, s.root_degree));
            let mk = hist_by(n, |s| (s.internal, s.leaves));
            let kr = hist_by(n, |s| (s.leaves, s.root_degree));
            for a in 0..=n {
                assert_eq!(count_by_leaves(n, a), big(leaves.get(&a).copied().unwrap_or(0)));
                assert_eq!(count_by_root(n, a), big(roots.get(&a).copied().unwrap_or(0)));
                assert_eq!(count_by_internal(n, a), big(internal.get(&a).copied().unwrap_or(0)));
                for b in 0..=n {
                    assert_eq!(count_mk(n, a, b), big(mk.get(&(a, b)).copied().unwrap_or(0)), "mk {n} {a} {b}");
                    assert_eq!(count_kr(n, a, b), big(kr.get(&(a, b)).copied().unwrap_or(0)), "kr {n} {a} {b}");
                    for c in 0..=n {
                        let e = big(full.get(&(a, b, c)).copied().unwrap_or(0));
                        assert_eq!(count_full(n, a, b, c), e, "full {n} {a} {b} {c}");
                    }
                }
            }
            let total: BigCount =
                (0..=n).flat_map(|m| (0..=n).flat_map(move |k| (0..=n).map(move |r| count_full(n, m, k, r)))).sum();
            assert_eq!(total, catalan(n));
        }
    }

    #[test]
    fn resolved_counts_flag_their_source() {
        let table = FullCountTable::new(6, 16).unwrap();
        assert_eq!(table.get(0, 3, 1).source, CountSource::Formula);
        let off = table.get(1, 3, 3);
        assert_eq!(off.source, CountSource::Enumeration);
        assert_eq!(off.value, big(0));
        assert_eq!(count_full_resolved(6, 1, 3, 3, 16).unwrap(), off);
        assert_eq!(count_full_resolved(20, 1, 3, 3, 16).unwrap().source, CountSource::FormulaIncomplete);
        assert_eq!(count_full_resolved(20, 0, 20, 20, 16).unwrap().source, CountSource::Formula);
    }

    #[test]
    fn psi_is_a_bijection_with_the_stated_statistics() {
        assert_eq!(psi(&PlaneTree::single_vertex()), PlaneTree::single_vertex());
        for n in 0..=8 {
            let trees: Vec<PlaneTree> = enumerate_trees(n).collect();
            let images: HashSet<PlaneTree> = trees.iter().map(psi).collect();
            assert_eq!(images.len(), trees.len());
            assert!(images.iter().all(|t| t.edges() == n));

            let mut before = BTreeMap::new();
            let mut after = BTreeMap::new();
            for t in &trees {
                let s = t.stats();
                let p = psi(t);
                assert_eq!(p.view().leftmost_path(), s.root_degree);
                if n >= 1 {
                    assert_eq!(p.stats().leaves, n + 1 - s.leaves);
                }
                assert_eq!(leaves_with_left_sibling(&p), s.internal);
                *before.entry((s.root_degree, s.internal, n + 1 - s.leaves)).or_insert(0) += 1;
                *after.entry((p.view().leftmost_path(), leaves_with_left_sibling(&p), p.stats().leaves)).or_insert(0) +=
                    1;
            }
            if n >= 1 {
                assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn psi_follows_the_join_recursion() {
        for n1 in 0..=3 {
            for n2 in 0..=3 {
                for t1 in enumerate_trees(n1) {
                    for t2 in enumerate_trees(n2) {
                        assert_eq!(psi(&join(&t1, &t2)), join(&psi(&t2), &psi(&t1)));
                    }
                }
            }
        }
    }

    #[test]
    fn parens_round_trip() {
        assert_eq!(to_parens(&PlaneTree::path(1)), "()");
        assert_eq!(to_parens(&PlaneTree::path(3)), "((()))");
        for n in 0..=8 {
            for t in enumerate_trees(n) {
                assert_eq!(from_parens(&to_parens(&t)).unwrap(), t);
                // leaf <-> "()"
                assert_eq!(to_parens(&t).matches("()").count(), if n == 0 { 0 } else { t.stats().leaves });
            }
        }
    }
}
