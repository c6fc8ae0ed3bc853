//! Exact Gibbs sampling on `T_n` by recursive decomposition over the series tables.
//!
//! A tree is a sequence of root components, each a "planted" tree (one root
//! edge over a subtree). Root components are drawn from the renewal
//! recurrence of `z`, planted trees of size `j` from the three cases of `g1[j]`
//! (leaf, internal child, branching child), and branching children from the
//! convolution `g2[s] = Σ g1[i]·g[s−i]`. Every choice uses the ρ-scaled
//! tables, so no weight overflows, and the recursion runs on an explicit stack.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::GibbsWeights;
use crate::error::{Error, Result};
use crate::properties::{Property, PropertyEvaluator};
use crate::series::{build_tables, SeriesTables, WeightTriple};
use crate::tree::{PlaneTree, TreeStats, TreeView};

/// Name recorded in batch metadata for the random stream.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Trees per independently seeded stream in batch sampling.
pub const CHUNK_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug)]
enum Task {
    /// Unrestricted root components totalling `m` edges.
    Root(usize),
    /// At most `d` root components totalling `m` edges.
    RootBounded(usize, usize),
    /// A sequence of planted trees totalling `m` edges.
    Seq(usize),
    /// A root edge over a subtree with `j − 1` edges.
    Planted(usize),
    Close,
}

/// Picks an index in `lo..=hi` with probability `weight(i)/total`, scanning
/// inward from both ends since the weights concentrate there.
fn pick<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize, total: f64, weight: impl Fn(usize) -> f64) -> usize {
    debug_assert!(lo <= hi);
    let mut u = rng.gen::<f64>() * total;
    let (mut l, mut h) = (lo, hi);
    let mut last = lo;
    let mut visit = |i: usize, u: &mut f64| {
        let w = weight(i);
        if w > 0.0 {
            last = i;
            if *u < w {
                return true;
            }
            *u -= w;
        }
        false
    };
    loop {
        if visit(l, &mut u) {
            return l;
        }
        if l == h {
            break;
        }
        if visit(h, &mut u) {
            return h;
        }
        l += 1;
        h -= 1;
        if l > h {
            break;
        }
    }
    // Rounding left a sliver of mass unassigned; take the last positive weight.
    last
}

/// Sampling tables for the weights `(a, b, c)` up to a maximum size.
pub struct Sampler {
    weights: WeightTriple,
    tables: SeriesTables<f64>,
    /// `c·ĝ1[j]·(ρ/σ)^j`: weight of a first root component of size `j` in the
    /// σ-scaled renewal recurrence for `z`.
    root_weight: Vec<f64>,
}

impl Sampler {
    pub fn new(weights: WeightTriple, order: usize) -> Self {
        let tables = build_tables(&weights, order);
        let ratio = tables.scale() / tables.z_scale();
        let mut power = 1.0;
        let mut root_weight = Vec::with_capacity(order + 1);
        for j in 0..=order {
            root_weight.push(weights.c * tables.g1()[j] * power);
            power *= ratio;
        }
        Sampler { weights, tables, root_weight }
    }

    pub fn weights(&self) -> WeightTriple {
        self.weights
    }

    pub fn tables(&self) -> &SeriesTables<f64> {
        &self.tables
    }

    pub fn order(&self) -> usize {
        self.tables.order()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.order() {
            return Err(Error::TablesTooShort { order: self.order(), n });
        }
        Ok(())
    }

    /// Writes a Gibbs-distributed tree with `n` edges into `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, n: usize, rng: &mut R, out: &mut Vec<bool>) -> Result<()> {
        self.check(n)?;
        self.run(Task::Root(n), None, rng, out);
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PlaneTree> {
        let mut out = Vec::with_capacity(2 * n);
        self.sample_into(n, rng, &mut out)?;
        Ok(PlaneTree::from_steps_unchecked(out))
    }

    /// Tables for sampling conditioned on root degree at most `h`, sizes up to `max_n`.
    pub fn bounded_root_table(&self, h: usize, max_n: usize) -> Result<BoundedRootTable> {
        if h == 0 {
            return Err(Error::param("the root-degree bound must be at least 1"));
        }
        self.check(max_n)?;
        // With finitely many root components z_h grows like ρⁿ, so it is scaled by ρ.
        let c = self.weights.c;
        let g1 = self.tables.g1();
        let mut levels = vec![(0..=max_n).map(|m| if m == 0 { 1.0 } else { 0.0 }).collect::<Vec<f64>>()];
        for d in 1..=h.min(max_n) {
            let prev = &levels[d - 1];
            let row: Vec<f64> = (0..=max_n)
                .map(|m| if m == 0 { 1.0 } else { (1..=m).map(|j| c * g1[j] * prev[m - j]).sum() })
                .collect();
            levels.push(row);
        }
        Ok(BoundedRootTable { h, levels })
    }

    /// Gibbs sample conditioned on root degree at most `table.bound()`.
    pub fn sample_bounded_into<R: Rng + ?Sized>(
        &self,
        table: &BoundedRootTable,
        n: usize,
        rng: &mut R,
        out: &mut Vec<bool>,
    ) -> Result<()> {
        if n > table.max_n() {
            return Err(Error::TablesTooShort { order: table.max_n(), n });
        }
        self.run(Task::RootBounded(table.levels.len() - 1, n), Some(table), rng, out);
        Ok(())
    }

    fn run<R: Rng + ?Sized>(&self, start: Task, bounded: Option<&BoundedRootTable>, rng: &mut R, out: &mut Vec<bool>) {
        let g = self.tables.g();
        let g1 = self.tables.g1();
        let g2 = self.tables.g2();
        let b = self.weights.b;
        out.clear();
        let mut stack = vec![start];
        while let Some(task) = stack.pop() {
            match task {
                Task::Close => out.push(false),
                Task::Root(0) | Task::Seq(0) | Task::RootBounded(_, 0) => {}
                Task::Root(m) => {
                    let zt = self.tables.z();
                    let rw = &self.root_weight;
                    let j = pick(rng, 1, m, zt[m], |j| rw[j] * zt[m - j]);
                    stack.push(Task::Root(m - j));
                    stack.push(Task::Planted(j));
                }
                Task::RootBounded(d, m) => {
                    let levels = &bounded.expect("bounded table").levels;
                    let (c, prev) = (self.weights.c, &levels[d - 1]);
                    let j = pick(rng, 1, m, levels[d][m], |j| c * g1[j] * prev[m - j]);
                    stack.push(Task::RootBounded(d - 1, m - j));
                    stack.push(Task::Planted(j));
                }
                Task::Seq(m) => {
                    let i = pick(rng, 1, m, g[m], |i| g1[i] * g[m - i]);
                    stack.push(Task::Seq(m - i));
                    stack.push(Task::Planted(i));
                }
                Task::Planted(j) => {
                    out.push(true);
                    stack.push(Task::Close);
                    if j == 1 {
                        continue;
                    }
                    let s = j - 1;
                    let internal = b * g1[s];
                    if rng.gen::<f64>() * (internal + g2[s]) < internal {
                        stack.push(Task::Planted(s));
                    } else {
                        // Branching child: a first component of size i < s, then the rest.
                        let i = pick(rng, 1, s - 1, g2[s], |i| g1[i] * g[s - i]);
                        stack.push(Task::Seq(s - i));
                        stack.push(Task::Planted(i));
                    }
                }
            }
        }
    }

    /// Draws `count` trees in chunks of [`CHUNK_SIZE`], chunk `k` using the
    /// ChaCha8 stream `k` of `seed`, and folds each chunk into its own
    /// accumulator. The result is in chunk order and independent of the
    /// number of threads.
    pub fn par_chunks<A, I, F>(&self, spec: &DrawSpec, init: I, step: F) -> Result<Vec<A>>
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, TreeView<'_>) + Sync + Send,
    {
        self.check(spec.n)?;
        let bounded = match spec.root_max {
            Some(h) if h < spec.n => Some(self.bounded_root_table(h, spec.n)?),
            _ => None,
        };
        let chunks = spec.count.div_ceil(CHUNK_SIZE);
        Ok((0..chunks)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                rng.set_stream(k as u64);
                let mut acc = init();
                let mut word = Vec::with_capacity(2 * spec.n);
                let len = CHUNK_SIZE.min(spec.count - k * CHUNK_SIZE);
                for _ in 0..len {
                    match &bounded {
                        Some(t) => self.run(Task::RootBounded(t.levels.len() - 1, spec.n), Some(t), &mut rng, &mut word),
                        None => self.run(Task::Root(spec.n), None, &mut rng, &mut word),
                    }
                    step(&mut acc, TreeView::new_unchecked(&word));
                }
                acc
            })
            .collect())
    }
}

/// `z_h[d][m]`: σ-free weight of at most `d` root components totalling `m` edges.
#[derive(Clone, Debug)]
pub struct BoundedRootTable {
    h: usize,
    levels: Vec<Vec<f64>>,
}

impl BoundedRootTable {
    pub fn bound(&self) -> usize {
        self.h
    }

    pub fn max_n(&self) -> usize {
        self.levels[0].len() - 1
    }
}

/// What to draw: size, count, seed and an optional root-degree bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DrawSpec {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub root_max: Option<usize>,
}

/// A sampler for one size together with its random stream.
pub struct SamplerContext {
    sampler: Arc<Sampler>,
    n: usize,
    rng: ChaCha8Rng,
    bounded: Option<BoundedRootTable>,
}

impl SamplerContext {
    pub fn new(weights: &GibbsWeights, n: usize, seed: u64) -> Self {
        let sampler = Arc::new(Sampler::new(WeightTriple::from_gibbs(weights), n));
        SamplerContext { sampler, n, rng: ChaCha8Rng::seed_from_u64(seed), bounded: None }
    }

    /// Shares prebuilt tables; fails when they are shorter than `n`.
    pub fn with_sampler(sampler: Arc<Sampler>, n: usize, seed: u64) -> Result<Self> {
        sampler.check(n)?;
        Ok(SamplerContext { sampler, n, rng: ChaCha8Rng::seed_from_u64(seed), bounded: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sampler(&self) -> &Arc<Sampler> {
        &self.sampler
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One tree from the Gibbs distribution on `T_n`.
pub fn sample_tree(ctx: &mut SamplerContext) -> PlaneTree {
    ctx.sampler.sample(ctx.n, &mut ctx.rng).expect("context size checked at construction")
}

/// One tree from the Gibbs distribution restricted to root degree at most `h`.
pub fn sample_bounded_root(ctx: &mut SamplerContext, h: usize) -> Result<PlaneTree> {
    if ctx.bounded.as_ref().map(BoundedRootTable::bound) != Some(h) {
        ctx.bounded = Some(ctx.sampler.bounded_root_table(h, ctx.n)?);
    }
    let mut out = Vec::with_capacity(2 * ctx.n);
    ctx.sampler.sample_bounded_into(ctx.bounded.as_ref().expect("just built"), ctx.n, &mut ctx.rng, &mut out)?;
    Ok(PlaneTree::from_steps_unchecked(out))
}

/// Per-tree statistics and property values from a reproducible batch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: usize,
    pub n: usize,
    pub root_max: Option<usize>,
    pub weights: WeightTriple,
    pub algorithm: &'static str,
    pub properties: Vec<String>,
    pub stats: Vec<TreeStats>,
    /// Row-major, `properties.len()` values per tree.
    pub values: Vec<f64>,
    /// Parenthesis words, kept only when requested.
    pub trees: Option<Vec<String>>,
}

impl SampleBatch {
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.properties.len();
        &self.values[i * k..(i + 1) * k]
    }

    pub fn column_mean(&self, j: usize) -> f64 {
        let k = self.properties.len();
        let s: crate::numeric::CompensatedSum = (0..self.count).map(|i| self.values[i * k + j]).collect();
        s.value() / self.count as f64
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["index", "edges", "leaves", "internal", "root_degree"].join(",");
        for p in &self.properties {
            cols.push(',');
            cols.push_str(&csv_field(p));
        }
        if self.trees.is_some() {
            cols.push_str(",tree");
        }
        cols
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.csv_header())?;
        for (i, s) in self.stats.iter().enumerate() {
            write!(w, "{i},{},{},{},{}", s.edges, s.leaves, s.internal, s.root_degree)?;
            for v in self.row(i) {
                write!(w, ",{v}")?;
            }
            if let Some(trees) = &self.trees {
                write!(w, ",{}", trees[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_jsonl<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, s) in self.stats.iter().enumerate() {
            let mut rec = serde_json::Map::new();
            rec.insert("index".into(), i.into());
            rec.insert("stats".into(), serde_json::to_value(s).expect("plain struct"));
            let values: serde_json::Map<String, serde_json::Value> =
                self.properties.iter().cloned().zip(self.row(i).iter().map(|&v| v.into())).collect();
            rec.insert("values".into(), values.into());
            if let Some(trees) = &self.trees {
                rec.insert("tree".into(), trees[i].clone().into());
            }
            writeln!(w, "{}", serde_json::Value::Object(rec))?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Draws a batch and evaluates `properties` on every tree as it is generated.
pub fn sample_batch(
    sampler: &Sampler,
    spec: &DrawSpec,
    properties: &[Property],
    keep_trees: bool,
) -> Result<SampleBatch> {
    if spec.count == 0 {
        return Err(Error::param("count must be at least 1"));
    }
    struct Chunk {
        stats: Vec<TreeStats>,
        values: Vec<f64>,
        trees: Vec<String>,
        eval: PropertyEvaluator,
        buf: Vec<f64>,
    }
    let chunks = sampler.par_chunks(
        spec,
        || Chunk { stats: Vec::new(), values: Vec::new(), trees: Vec::new(), eval: PropertyEvaluator::new(), buf: Vec::new() },
        |c, t| {
            let s = c.eval.eval_f64(t, properties, &mut c.buf);
            c.stats.push(s);
            c.values.extend_from_slice(&c.buf);
            if keep_trees {
                c.trees.push(t.to_parens());
            }
        },
    )?;
    let mut batch = SampleBatch {
        seed: spec.seed,
        count: spec.count,
        n: spec.n,
        root_max: spec.root_max,
        weights: sampler.weights(),
        algorithm: RNG_ALGORITHM,
        properties: properties.iter().map(Property::name).collect(),
        stats: Vec::with_capacity(spec.count),
        values: Vec::with_capacity(spec.count * properties.len()),
        trees: keep_trees.then(Vec::new),
    };
    for c in chunks {
        batch.stats.extend(c.stats);
        batch.values.extend(c.values);
        if let Some(t) = &mut batch.trees {
            t.extend(c.trees);
        }
    }
    Ok(batch)
}
