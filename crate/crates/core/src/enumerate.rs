//! Exhaustive generation of `T_n` and exact Gibbs sums over it.
//!
//! Trees are produced in lexicographic order of their parenthesis words
//! (`(` before `)`). Aggregations split `T_n` by the join decomposition
//! `T = T1 ⋉ T2` and reduce integer histograms, so parallel runs are
//! order-independent.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{rational_from_int, rational_pow, rational_to_f64, CompensatedSum};
use crate::properties::{Property, PropertyEvaluator, PropertyValue};
use crate::tree::{PlaneTree, TreeStats, TreeView};

/// Default largest `n` that may be enumerated (`C_16` is about 3.5e7).
pub const DEFAULT_GUARD: usize = 16;

/// Energy weights in `E(T) = α·d0 + β·d1 + γ·r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ThermoParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::param("alpha, beta and gamma must be finite"));
        }
        Ok(ThermoParams { alpha, beta, gamma })
    }

    pub fn uniform() -> Self {
        ThermoParams { alpha: 0.0, beta: 0.0, gamma: 0.0 }
    }

    pub fn energy(&self, s: &TreeStats) -> f64 {
        self.alpha * s.leaves as f64 + self.beta * s.internal as f64 + self.gamma * s.root_degree as f64
    }

    /// `(e^{-α}, e^{-β}, e^{-γ})`.
    pub fn weights(&self) -> (f64, f64, f64) {
        ((-self.alpha).exp(), (-self.beta).exp(), (-self.gamma).exp())
    }

    pub fn without_root(&self) -> Self {
        ThermoParams { gamma: 0.0, ..*self }
    }
}

/// Per-tree Gibbs weight `a^d0 · b^d1 · c^r`, either from energies or exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub enum GibbsWeights {
    Thermo(ThermoParams),
    Rational { a: BigRational, b: BigRational, c: BigRational },
}

impl GibbsWeights {
    pub fn rational(a: BigRational, b: BigRational, c: BigRational) -> Result<Self> {
        let zero = BigRational::zero();
        if a <= zero || b <= zero || c <= zero {
            return Err(Error::param("weights a, b, c must be positive"));
        }
        Ok(GibbsWeights::Rational { a, b, c })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GibbsWeights::Rational { .. })
    }

    /// `(a, b, c)` as doubles.
    pub fn abc_f64(&self) -> (f64, f64, f64) {
        match self {
            GibbsWeights::Thermo(p) => p.weights(),
            GibbsWeights::Rational { a, b, c } => (rational_to_f64(a), rational_to_f64(b), rational_to_f64(c)),
        }
    }

    /// The equivalent energy parameters (`α = −ln a` and so on).
    pub fn thermo(&self) -> ThermoParams {
        match self {
            GibbsWeights::Thermo(p) => *p,
            GibbsWeights::Rational { .. } => {
                let (a, b, c) = self.abc_f64();
                ThermoParams { alpha: -a.ln(), beta: -b.ln(), gamma: -c.ln() }
            }
        }
    }

    pub fn weight_f64(&self, s: &TreeStats) -> f64 {
        match self {
            GibbsWeights::Thermo(p) => (-p.energy(s)).exp(),
            GibbsWeights::Rational { .. } => {
                let (a, b, c) = self.abc_f64();
                a.powi(s.leaves as i32) * b.powi(s.internal as i32) * c.powi(s.root_degree as i32)
            }
        }
    }

    pub fn weight_exact(&self, s: &TreeStats) -> Option<BigRational> {
        match self {
            GibbsWeights::Thermo(_) => None,
            GibbsWeights::Rational { a, b, c } => {
                Some(rational_pow(a, s.leaves) * rational_pow(b, s.internal) * rational_pow(c, s.root_degree))
            }
        }
    }
}

impl From<ThermoParams> for GibbsWeights {
    fn from(p: ThermoParams) -> Self {
        GibbsWeights::Thermo(p)
    }
}

/// Enumeration limits and conditioning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub guard: usize,
    /// Restrict to trees of root degree at most this value.
    pub root_max: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { guard: DEFAULT_GUARD, root_max: None }
    }
}

impl ExactOptions {
    fn check(&self, n: usize) -> Result<()> {
        if n > self.guard {
            return Err(Error::EnumerationGuard { n, guard: self.guard });
        }
        Ok(())
    }

    fn admits(&self, s: &TreeStats) -> bool {
        self.root_max.map_or(true, |h| s.root_degree <= h)
    }
}

/// Lexicographic successor walk over balanced words with `n` pairs.
pub struct DyckWalker {
    n: usize,
    word: Vec<bool>,
    started: bool,
}

impl DyckWalker {
    pub fn new(n: usize) -> Self {
        let mut word = vec![true; n];
        word.resize(2 * n, false);
        DyckWalker { n, word, started: false }
    }

    /// Advances to the next tree; the view borrows the walker's buffer.
    pub fn advance(&mut self) -> Option<TreeView<'_>> {
        if !self.started {
            self.started = true;
            return Some(TreeView::new_unchecked(&self.word));
        }
        if !self.step() {
            return None;
        }
        Some(TreeView::new_unchecked(&self.word))
    }

    fn step(&mut self) -> bool {
        let mut opens = self.n;
        let mut closes = self.n;
        for i in (0..self.word.len()).rev() {
            if self.word[i] {
                opens -= 1;
                if opens > closes {
                    // Close here, then the smallest completion: all remaining opens first.
                    self.word[i] = false;
                    let remaining_opens = self.n - opens;
                    for (j, w) in self.word[i + 1..].iter_mut().enumerate() {
                        *w = j < remaining_opens;
                    }
                    return true;
                }
            } else {
                closes -= 1;
            }
        }
        false
    }
}

/// Iterator over `T_n`; yields each tree exactly once.
pub struct TreeIter {
    walker: DyckWalker,
}

impl Iterator for TreeIter {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        self.walker.advance().map(|v| v.to_owned_tree())
    }
}

pub fn enumerate_trees(n: usize) -> TreeIter {
    TreeIter { walker: DyckWalker::new(n) }
}

/// Folds over every tree of `T_n`, in parallel, splitting by the size of the
/// subtree under the leftmost root edge.
pub fn par_fold_trees<A, I, F, M>(n: usize, init: I, step: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, TreeView<'_>) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if n <= 8 {
        let mut acc = init();
        let mut w = DyckWalker::new(n);
        while let Some(t) = w.advance() {
            step(&mut acc, t);
        }
        return acc;
    }
    // T = "(" T2 ")" T1 with |T2| = s and |T1| = n - 1 - s.
    let tasks: Vec<(usize, PlaneTree)> =
        (0..n).flat_map(|s| enumerate_trees(s).map(move |t2| (s, t2))).collect();
    tasks
        .into_par_iter()
        .fold(&init, |mut acc, (s, t2)| {
            let mut word = Vec::with_capacity(2 * n);
            word.push(true);
            word.extend_from_slice(t2.steps());
            word.push(false);
            let prefix = word.len();
            let mut w = DyckWalker::new(n - 1 - s);
            while let Some(t1) = w.advance() {
                word.truncate(prefix);
                word.extend_from_slice(t1.steps());
                step(&mut acc, TreeView::new_unchecked(&word));
            }
            acc
        })
        .reduce(&init, &merge)
}

/// Number of trees of `T_n` for each full statistics tuple.
pub fn stats_histogram(n: usize, guard: usize) -> Result<HashMap<TreeStats, u64>> {
    ExactOptions { guard, root_max: None }.check(n)?;
    Ok(par_fold_trees(
        n,
        HashMap::new,
        |acc: &mut HashMap<TreeStats, u64>, t| *acc.entry(t.stats()).or_default() += 1,
        merge_counts,
    ))
}

fn merge_counts<K: std::hash::Hash + Eq>(mut a: HashMap<K, u64>, b: HashMap<K, u64>) -> HashMap<K, u64> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Property value key: built-in properties are integers, tolls are rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum ValueKey {
    Int(u64),
    Rational(BigRational),
}

impl ValueKey {
    fn to_rational(&self) -> BigRational {
        match self {
            ValueKey::Int(v) => rational_from_int(*v),
            ValueKey::Rational(r) => r.clone(),
        }
    }
}

type ValueHistogram = HashMap<(TreeStats, ValueKey), u64>;

fn value_histogram(n: usize, prop: &Property, opts: &ExactOptions) -> Result<ValueHistogram> {
    opts.check(n)?;
    let opts = *opts;
    Ok(par_fold_trees(
        n,
        || (HashMap::new(), PropertyEvaluator::new(), Vec::new()),
        |(acc, ev, buf): &mut (ValueHistogram, PropertyEvaluator, Vec<f64>), t| {
            let key = match prop {
                Property::Toll(_) => {
                    let (s, v) = ev.eval_exact(t, prop);
                    (s, ValueKey::Rational(v))
                }
                _ => {
                    let s = ev.eval_f64(t, std::slice::from_ref(prop), buf);
                    (s, ValueKey::Int(buf[0] as u64))
                }
            };
            if opts.admits(&key.0) {
                *acc.entry(key).or_default() += 1;
            }
        },
        |a, b| (merge_counts(a.0, b.0), a.1, a.2),
    )
    .0)
}

/// Weighted sums `Σ count · w(stats) · value^k` for `k = 0..=k_max`.
fn weighted_power_sums(hist: &ValueHistogram, w: &GibbsWeights, k_max: usize) -> Vec<PropertyValue> {
    let mut entries: Vec<_> = hist.iter().collect();
    entries.sort();
    match w {
        GibbsWeights::Rational { .. } => {
            let mut sums = vec![BigRational::zero(); k_max + 1];
            let mut weight_cache: HashMap<TreeStats, BigRational> = HashMap::new();
            for ((s, v), count) in entries {
                let weight = weight_cache.entry(*s).or_insert_with(|| w.weight_exact(s).expect("exact weights")).clone();
                let mut term = weight * rational_from_int(*count);
                let value = v.to_rational();
                for slot in sums.iter_mut() {
                    *slot += &term;
                    term *= &value;
                }
            }
            sums.into_iter().map(PropertyValue::Exact).collect()
        }
        GibbsWeights::Thermo(_) => {
            let mut sums = vec![CompensatedSum::new(); k_max + 1];
            for ((s, v), count) in entries {
                let value = match v {
                    ValueKey::Int(x) => *x as f64,
                    ValueKey::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
                };
                let mut term = w.weight_f64(s) * *count as f64;
                for slot in sums.iter_mut() {
                    slot.add(term);
                    term *= value;
                }
            }
            sums.into_iter().map(|s| PropertyValue::Float(s.value())).collect()
        }
    }
}

/// `Z = Σ_{T ∈ T_n} e^{-E(T)}` by enumeration.
pub fn exact_partition(n: usize, w: &GibbsWeights) -> Result<PropertyValue> {
    exact_partition_with(n, w, &ExactOptions::default())
}

pub fn exact_partition_with(n: usize, w: &GibbsWeights, opts: &ExactOptions) -> Result<PropertyValue> {
    let hist = value_histogram(n, &Property::Edges, opts)?;
    Ok(weighted_power_sums(&hist, w, 0).remove(0))
}

/// `E[P(T_n)^k]` for `k = 0..=k_max` under the Gibbs distribution.
pub fn exact_moments(n: usize, w: &GibbsWeights, prop: &Property, k_max: usize) -> Result<Vec<PropertyValue>> {
    exact_moments_with(n, w, prop, k_max, &ExactOptions::default())
}

pub fn exact_moments_with(
    n: usize,
    w: &GibbsWeights,
    prop: &Property,
    k_max: usize,
    opts: &ExactOptions,
) -> Result<Vec<PropertyValue>> {
    let hist = value_histogram(n, prop, opts)?;
    let sums = weighted_power_sums(&hist, w, k_max);
    let z = sums[0].clone();
    Ok(sums
        .into_iter()
        .map(|s| match (s, &z) {
            (PropertyValue::Exact(s), PropertyValue::Exact(z)) => PropertyValue::Exact(s / z),
            (s, z) => PropertyValue::Float(s.to_f64() / z.to_f64()),
        })
        .collect())
}

/// Histogram of property values with their total Gibbs weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    pub n: usize,
    /// `(value, total weight)` sorted by value.
    pub entries: Vec<(PropertyValue, PropertyValue)>,
    pub partition: PropertyValue,
}

pub fn exact_distribution(n: usize, w: &GibbsWeights, prop: &Property) -> Result<ExactDistribution> {
    exact_distribution_with(n, w, prop, &ExactOptions::default())
}

pub fn exact_distribution_with(
    n: usize,
    w: &GibbsWeights,
    prop: &Property,
    opts: &ExactOptions,
) -> Result<ExactDistribution> {
    let hist = value_histogram(n, prop, opts)?;
    let mut by_value: BTreeMap<ValueKey, ValueHistogram> = BTreeMap::new();
    for ((s, v), c) in hist {
        by_value.entry(v.clone()).or_default().insert((s, v), c);
    }
    let mut entries = Vec::with_capacity(by_value.len());
    let mut total = CompensatedSum::new();
    let mut total_exact = BigRational::zero();
    for (v, h) in by_value {
        let weight = weighted_power_sums(&h, w, 0).remove(0);
        match &weight {
            PropertyValue::Exact(x) => total_exact += x,
            PropertyValue::Float(x) => total.add(*x),
        }
        let value = match (&v, w.is_exact(), prop) {
            (_, _, Property::Toll(f)) if f.mode() == crate::toll::ArithmeticMode::Float => {
                PropertyValue::Float(rational_to_f64(&v.to_rational()))
            }
            _ => PropertyValue::Exact(v.to_rational()),
        };
        entries.push((value, weight));
    }
    let partition = if w.is_exact() { PropertyValue::Exact(total_exact) } else { PropertyValue::Float(total.value()) };
    Ok(ExactDistribution { n, entries, partition })
}

/// Gibbs probability of every tree in `T_n`, in enumeration order.
pub fn tree_probabilities(n: usize, w: &GibbsWeights, opts: &ExactOptions) -> Result<Vec<(PlaneTree, f64)>> {
    opts.check(n)?;
    let mut out = Vec::new();
    let mut w_iter = DyckWalker::new(n);
    while let Some(t) = w_iter.advance() {
        let s = t.stats();
        if opts.admits(&s) {
            out.push((t.to_owned_tree(), w.weight_f64(&s)));
        }
    }
    let z: CompensatedSum = out.iter().map(|(_, x)| *x).collect();
    let z = z.value();
    for (_, p) in &mut out {
        *p /= z;
    }
    Ok(out)
}
