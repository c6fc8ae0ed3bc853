//! The acceptance battery: every check run at a chosen scale, reported as
//! machine-readable pass/fail entries.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::asymptotics::analyze_toll;
use crate::counting::{
    catalan, count_by_internal, count_by_leaves, count_by_root, count_full, count_kr, count_mk, from_parens,
    leaves_with_left_sibling, psi, to_parens, BigCount,
};
use crate::enumerate::{enumerate_trees, stats_histogram, tree_probabilities, ExactOptions, GibbsWeights, ThermoParams};
use crate::error::Result;
use crate::numeric::rational_to_f64;
use crate::oracle::{bfs_wiener, depth_sums, eval_by_join};
use crate::properties::{
    eval_additive, internal_root_distance, leaf_root_distance, path_length, wiener_index, AdditiveProperty, Property,
};
use crate::sampler::{DrawSpec, Sampler};
use crate::series::{build_exact_tables, gn_explicit, partition_ratio, WeightTriple};
use crate::stats::{
    bounded_root_experiment, chi_square_gof, ratio_experiment, scaling_experiment, total_variation, EstimateMode,
    EstimateOptions, RatioReport, UNIFORM_INTEGRABILITY_NOTE,
};
use crate::toll::PolynomialToll;
use crate::tree::{join, subtree_records, unjoin, PlaneTree, RootConvention, TreeView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Exhaustive and exact checks at reduced bounds; the Monte Carlo
    /// scaling criteria are skipped.
    Quick,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            _ => Err(crate::Error::param(format!("unknown suite {s:?}; expected quick or full"))),
        }
    }
}

/// Sizes used by each criterion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scale {
    pub counting_max_n: usize,
    pub series_order: usize,
    pub sampler_draws: usize,
    pub ratio_samples: usize,
    pub scaling_samples: usize,
    pub bounded_samples: usize,
    pub monte_carlo: bool,
}

impl Scale {
    pub fn for_suite(suite: Suite) -> Self {
        match suite {
            Suite::Quick => Scale {
                counting_max_n: 8,
                series_order: 60,
                sampler_draws: 400_000,
                ratio_samples: 0,
                scaling_samples: 0,
                bounded_samples: 0,
                monte_carlo: false,
            },
            Suite::Full => Scale {
                counting_max_n: 10,
                series_order: 200,
                sampler_draws: 1_000_000,
                ratio_samples: 100_000,
                scaling_samples: 100_000,
                bounded_samples: 100_000,
                monte_carlo: true,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub status: Status,
    pub metrics: BTreeMap<String, f64>,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl CriterionResult {
    fn new(id: u32, name: &str) -> Self {
        CriterionResult {
            id,
            name: name.to_string(),
            status: Status::Pass,
            metrics: BTreeMap::new(),
            details: Vec::new(),
            seconds: 0.0,
        }
    }

    fn metric(&mut self, key: impl Into<String>, v: f64) {
        self.metrics.insert(key.into(), v);
    }

    /// Records `msg` and marks the criterion failed unless `ok`.
    fn require(&mut self, ok: bool, msg: impl Into<String>) {
        if !ok {
            self.status = Status::Fail;
            self.details.push(format!("FAIL: {}", msg.into()));
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.details.push(msg.into());
    }

    fn error(mut self, e: crate::Error) -> Self {
        self.status = Status::Fail;
        self.details.push(format!("error: {e}"));
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// `criterion 3 [pass] partition asymptotics (0.41 s)`.
    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        format!("criterion {} [{status}] {} ({:.2} s)", self.id, self.name, self.seconds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub scale: Scale,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

fn timed(f: impl FnOnce() -> CriterionResult) -> CriterionResult {
    let start = Instant::now();
    let mut r = f();
    r.seconds = start.elapsed().as_secs_f64();
    r
}

fn skipped(id: u32, name: &str) -> CriterionResult {
    let mut r = CriterionResult::new(id, name);
    r.status = Status::Skipped;
    r.note("Monte Carlo criterion; run the full suite");
    r
}

/// Runs criterion `id` (1 to 9) at the given scale.
pub fn run_criterion(id: u32, scale: &Scale, seed: u64) -> Option<CriterionResult> {
    let names = [
        "counting exactness",
        "generating-function consistency",
        "partition asymptotics",
        "sampler exactness",
        "simple subtree-additive ratios",
        "path-length scaling constant",
        "Wiener scaling constant",
        "bounded-root equivalence",
        "exhaustive identities",
    ];
    let name = *names.get(id.checked_sub(1)? as usize)?;
    if (5..=8).contains(&id) && !scale.monte_carlo {
        return Some(skipped(id, name));
    }
    Some(timed(|| match id {
        1 => counting_exactness(scale.counting_max_n),
        2 => series_consistency(scale.series_order),
        3 => partition_asymptotics(),
        4 => sampler_exactness(scale.sampler_draws, seed),
        5 => subtree_ratios(scale.ratio_samples, seed),
        6 => scaling_constant(&Property::PathLength, 6, 0.05, scale.scaling_samples, seed),
        7 => scaling_constant(&Property::Wiener, 7, 0.07, scale.scaling_samples, seed),
        8 => bounded_root(scale.bounded_samples, seed),
        _ => exhaustive_identities(),
    }))
}

pub fn verify(suite: Suite, seed: u64) -> VerifyReport {
    verify_with(suite, Scale::for_suite(suite), seed, |_| {})
}

/// Runs all criteria, calling `progress` after each.
pub fn verify_with(suite: Suite, scale: Scale, seed: u64, mut progress: impl FnMut(&CriterionResult)) -> VerifyReport {
    let mut criteria = Vec::new();
    for id in 1..=9 {
        let r = run_criterion(id, &scale, seed).expect("criterion id in range");
        progress(&r);
        criteria.push(r);
    }
    let all_passed = criteria.iter().all(CriterionResult::passed);
    VerifyReport { suite, scale, seed, criteria, all_passed }
}

pub fn counting_exactness(max_n: usize) -> CriterionResult {
    let mut r = CriterionResult::new(1, "counting exactness");
    let mut cells = 0u64;
    let mut off_regime_nonzero = 0u64;
    for n in 0..=max_n {
        let hist = match stats_histogram(n, max_n.max(crate::enumerate::DEFAULT_GUARD)) {
            Ok(h) => h,
            Err(e) => return r.error(e),
        };
        let mut by_k = vec![0u64; n + 2];
        let mut by_r = vec![0u64; n + 2];
        let mut by_m = vec![0u64; n + 2];
        let mut by_mk = HashMap::new();
        let mut by_kr = HashMap::new();
        for (s, &c) in &hist {
            by_k[s.leaves] += c;
            by_r[s.root_degree] += c;
            by_m[s.internal] += c;
            *by_mk.entry((s.internal, s.leaves)).or_insert(0u64) += c;
            *by_kr.entry((s.leaves, s.root_degree)).or_insert(0u64) += c;
        }
        let total: u64 = hist.values().sum();
        r.require(BigCount::from(total) == catalan(n), format!("catalan({n})"));
        for x in 0..=n {
            r.require(count_by_leaves(n, x) == BigCount::from(by_k[x]), format!("leaves n={n} k={x}"));
            r.require(count_by_root(n, x) == BigCount::from(by_r[x]), format!("root n={n} r={x}"));
            r.require(count_by_internal(n, x) == BigCount::from(by_m[x]), format!("internal n={n} m={x}"));
        }
        for a in 0..=n {
            for b in 0..=n {
                let mk = by_mk.get(&(a, b)).copied().unwrap_or(0);
                r.require(count_mk(n, a, b) == BigCount::from(mk), format!("mk n={n} m={a} k={b}"));
                let kr = by_kr.get(&(a, b)).copied().unwrap_or(0);
                r.require(count_kr(n, a, b) == BigCount::from(kr), format!("kr n={n} k={a} r={b}"));
                for root in 0..=n {
                    cells += 1;
                    let key = crate::TreeStats { edges: n, leaves: b, internal: a, root_degree: root };
                    let e = hist.get(&key).copied().unwrap_or(0);
                    let f = count_full(n, a, b, root);
                    if f.is_zero() && e > 0 {
                        off_regime_nonzero += 1;
                    }
                    r.require(f == BigCount::from(e), format!("full n={n} m={a} k={b} r={root}"));
                }
            }
        }
    }
    r.metric("max_n", max_n as f64);
    r.metric("full_cells_checked", cells as f64);
    r.metric("off_regime_nonzero_cells", off_regime_nonzero as f64);
    r
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn series_consistency(order: usize) -> CriterionResult {
    let mut r = CriterionResult::new(2, "generating-function consistency");
    let sets = [(ratio(1, 2), ratio(1, 1), ratio(7, 10)), (ratio(2, 1), ratio(3, 1), ratio(1, 1)), (ratio(1, 4), ratio(3, 4), ratio(5, 3))];
    for (a, b, c) in &sets {
        let t = build_exact_tables(a, b, c, order);
        let rec = t.recurrence_residual(a, b);
        let gs = t.g_star_residual();
        r.require(rec.iter().all(Zero::is_zero), format!("recurrence residual at (a,b,c)=({a},{b},{c})"));
        r.require(gs.iter().all(Zero::is_zero), format!("G* residual at (a,b,c)=({a},{b},{c})"));
    }
    r.metric("order", order as f64);
    let mut worst = 0.0f64;
    for (a, b) in [(0.5, 1.0), (2.0, 3.0), (0.25, 0.75)] {
        let ea = crate::numeric::exact_rational(a).expect("finite");
        let eb = crate::numeric::exact_rational(b).expect("finite");
        let t = build_exact_tables(&ea, &eb, &ratio(1, 1), 16);
        for n in 2..=16 {
            let y = rational_to_f64(&t.g()[n]);
            match gn_explicit(n, a, b) {
                Ok(x) => worst = worst.max((x - y).abs() / y.abs()),
                Err(e) => return r.error(e),
            }
        }
    }
    r.metric("gn_explicit_max_rel_error", worst);
    r.require(worst <= 1e-10, format!("gn_explicit relative error {worst:e}"));
    r
}

pub fn partition_asymptotics() -> CriterionResult {
    let mut r = CriterionResult::new(3, "partition asymptotics");
    let r500 = partition_ratio(500, 0.5, 1.0);
    let r2000 = partition_ratio(2000, 0.5, 1.0);
    r.metric("ratio_500", r500);
    r.metric("ratio_2000", r2000);
    r.require((0.98..=1.02).contains(&r2000), format!("ratio at 2000 is {r2000}"));
    r.require((r2000 - 1.0).abs() < (r500 - 1.0).abs(), "ratio at 2000 not closer to 1 than at 500");
    r
}

fn frequencies(sampler: &Sampler, spec: &DrawSpec) -> Result<HashMap<Vec<bool>, u64>> {
    let parts = sampler.par_chunks(spec, HashMap::new, |acc: &mut HashMap<Vec<bool>, u64>, t| {
        *acc.entry(t.steps().to_vec()).or_default() += 1
    })?;
    let mut total = HashMap::new();
    for p in parts {
        for (k, v) in p {
            *total.entry(k).or_default() += v;
        }
    }
    Ok(total)
}

/// `(tv, chi-square p)` of `draws` samples of `T_n` against the exact law.
pub fn sampler_fit(w: &GibbsWeights, n: usize, root_max: Option<usize>, draws: usize, seed: u64) -> Result<(f64, f64)> {
    let sampler = Sampler::new(WeightTriple::from_gibbs(w), n);
    let freq = frequencies(&sampler, &DrawSpec { n, count: draws, seed, root_max })?;
    let probs = tree_probabilities(n, w, &ExactOptions { root_max, ..ExactOptions::default() })?;
    let observed: Vec<u64> = probs.iter().map(|(t, _)| freq.get(t.steps()).copied().unwrap_or(0)).collect();
    let outside = draws as u64 - observed.iter().sum::<u64>();
    if outside > 0 {
        return Err(crate::Error::param(format!("{outside} draws fell outside the support")));
    }
    let p: Vec<f64> = probs.iter().map(|(_, p)| *p).collect();
    Ok((total_variation(&observed, &p), chi_square_gof(&observed, &p).2))
}

pub fn sampler_exactness(draws: usize, seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new(4, "sampler exactness");
    let ln2 = std::f64::consts::LN_2;
    let cases = [
        ((ln2, 0.0, 0.0), None),
        ((0.5, 1.0, 0.7), None),
        ((-0.4, 0.3, -0.6), None),
        ((ln2, 0.0, ln2), Some(2)),
    ];
    for (i, ((a, b, g), h)) in cases.into_iter().enumerate() {
        let w = match ThermoParams::new(a, b, g) {
            Ok(p) => GibbsWeights::Thermo(p),
            Err(e) => return r.error(e),
        };
        match sampler_fit(&w, 6, h, draws, seed.wrapping_add(i as u64)) {
            Ok((tv, p)) => {
                let label = format!("set{}", i + 1);
                r.metric(format!("{label}_tv"), tv);
                r.metric(format!("{label}_chi2_p"), p);
                r.note(format!("{label}: (α,β,γ)=({a:.4},{b},{g:.4}) root≤{h:?}"));
                r.require(tv < 0.01, format!("{label} tv {tv}"));
                r.require(p > 1e-3, format!("{label} chi-square p {p}"));
            }
            Err(e) => return r.error(e),
        }
    }
    r.metric("draws_per_set", draws as f64);
    r
}

fn record_report(r: &mut CriterionResult, key: &str, rep: &RatioReport) {
    for row in &rep.rows {
        r.metric(format!("{key}_n{}", row.n), row.observed);
        if row.observed_se > 0.0 {
            r.metric(format!("{key}_n{}_se", row.n), row.observed_se);
        }
    }
    if let Some(p) = rep.predicted {
        r.metric(format!("{key}_predicted"), p);
    }
    if let Some(e) = rep.relative_error() {
        r.metric(format!("{key}_rel_error"), e);
    }
}

pub fn subtree_ratios(samples: usize, seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new(5, "simple subtree-additive ratios");
    let w = GibbsWeights::Thermo(ThermoParams::uniform());
    let grid = [8, 10, 12, 400, 1600];
    for (i, (den, key)) in [(Property::LeafRoot, "pl_over_lr"), (Property::InternalRoot, "pl_over_ir")].iter().enumerate() {
        let rep = match ratio_experiment(
            &Property::PathLength,
            den,
            &w,
            &grid,
            samples,
            seed.wrapping_add(100 * i as u64),
            &EstimateOptions::default(),
        ) {
            Ok(rep) => rep,
            Err(e) => return r.error(e),
        };
        record_report(&mut r, key, &rep);
        let exact_trend = &rep.trend[..3];
        r.require(exact_trend.windows(2).all(|t| t[1] < t[0]), format!("{key} exact trend not decreasing"));
        let err = rep.relative_error().unwrap_or(f64::INFINITY);
        r.require(err < 0.05, format!("{key} at n=1600 off by {:.2}%", 100.0 * err));
    }
    r.note(UNIFORM_INTEGRABILITY_NOTE);
    r
}

pub fn scaling_constant(prop: &Property, id: u32, tol: f64, samples: usize, seed: u64) -> CriterionResult {
    let name = if id == 6 { "path-length scaling constant" } else { "Wiener scaling constant" };
    let mut r = CriterionResult::new(id, name);
    let (alpha, beta) = (0.5, 1.0);
    let exact = EstimateOptions { mode: EstimateMode::Exact, ..EstimateOptions::default() };
    let mc = EstimateOptions { mode: EstimateMode::MonteCarlo, ..EstimateOptions::default() };
    let trend = scaling_experiment(prop, alpha, beta, &[6, 12], 0, seed, &exact);
    let big = scaling_experiment(prop, alpha, beta, &[2000], samples, seed.wrapping_add(id as u64), &mc);
    let (trend, big) = match (trend, big) {
        (Ok(t), Ok(b)) => (t, b),
        (Err(e), _) | (_, Err(e)) => return r.error(e),
    };
    record_report(&mut r, "exact", &trend);
    record_report(&mut r, "mc", &big);
    r.require(trend.trend[1] < trend.trend[0], "exact ratio at n=12 not closer to Q than at n=6");
    let err = big.relative_error().unwrap_or(f64::INFINITY);
    r.require(err < tol, format!("n=2000 ratio off Q by {:.2}% (tolerance {:.0}%)", 100.0 * err, 100.0 * tol));
    r.note(UNIFORM_INTEGRABILITY_NOTE);
    r
}

pub fn bounded_root(samples: usize, seed: u64) -> CriterionResult {
    let mut r = CriterionResult::new(8, "bounded-root equivalence");
    let params = match ThermoParams::new(0.5, 1.0, 0.7) {
        Ok(p) => p,
        Err(e) => return r.error(e),
    };
    let exact = EstimateOptions { mode: EstimateMode::Exact, ..EstimateOptions::default() };
    let mc = EstimateOptions { mode: EstimateMode::MonteCarlo, ..EstimateOptions::default() };
    let small = bounded_root_experiment(&Property::PathLength, &params, 3, &[6, 8, 10], 0, seed, &exact);
    let big = bounded_root_experiment(&Property::PathLength, &params, 3, &[1000], samples, seed.wrapping_add(8), &mc);
    let (small, big) = match (small, big) {
        (Ok(s), Ok(b)) => (s, b),
        (Err(e), _) | (_, Err(e)) => return r.error(e),
    };
    record_report(&mut r, "exact", &small);
    record_report(&mut r, "mc", &big);
    if !small.monotone {
        r.note("exact ratios for n <= 10 do not decrease monotonically toward 1");
    }
    let err = big.relative_error().unwrap_or(f64::INFINITY);
    r.require(err < 0.05, format!("n=1000 ratio off 1 by {:.2}%", 100.0 * err));
    r.note(UNIFORM_INTEGRABILITY_NOTE);
    r
}

pub fn exhaustive_identities() -> CriterionResult {
    let mut r = CriterionResult::new(9, "exhaustive identities");
    let trees = |n: usize| -> Vec<PlaneTree> { enumerate_trees(n).collect() };
    let mut checked = 0u64;

    // join/unjoin, n <= 6
    for n1 in 0..=5 {
        for n2 in 0..=(5 - n1) {
            for t1 in trees(n1) {
                for t2 in trees(n2) {
                    let j = join(&t1, &t2);
                    r.require(j.edges() == n1 + n2 + 1, "join edge count");
                    r.require(unjoin(&j).ok() == Some((t1.clone(), t2.clone())), format!("unjoin(join({t1},{t2}))"));
                    checked += 1;
                }
            }
        }
    }
    for n in 1..=6 {
        for t in trees(n) {
            let ok = unjoin(&t).map(|(a, b)| join(&a, &b) == t).unwrap_or(false);
            r.require(ok, format!("join(unjoin({t}))"));
        }
    }
    r.require(unjoin(&PlaneTree::single_vertex()).is_err(), "single vertex has no decomposition");

    // ψ bijection and statistics, parenthesis round-trip, n <= 8
    for n in 0..=8 {
        let ts = trees(n);
        r.require(BigCount::from(ts.len()) == catalan(n), format!("enumeration size at n={n}"));
        let images: HashSet<PlaneTree> = ts.iter().map(psi).collect();
        r.require(images.len() == ts.len(), format!("ψ not injective at n={n}"));
        for t in &ts {
            let s = t.stats();
            let p = psi(t);
            r.require(p.edges() == n, "ψ preserves edges");
            r.require(p.view().leftmost_path() == s.root_degree, format!("ψ root degree at {t}"));
            r.require(leaves_with_left_sibling(&p) == s.internal, format!("ψ internal nodes at {t}"));
            if n >= 1 {
                r.require(p.stats().leaves == n + 1 - s.leaves, format!("ψ leaves at {t}"));
            }
            r.require(from_parens(&to_parens(t)).ok().as_ref() == Some(t), format!("parens round-trip at {t}"));
            checked += 1;
        }
    }

    // subtree formulas against BFS and depth oracles, additive recursion, records
    let probe = AdditiveProperty::new(|t: TreeView<'_>| (t.edges() * t.edges() + t.root_degree()) as i64, 3i64);
    for n in 0..=7 {
        for t in trees(n) {
            r.require(wiener_index(&t) == bfs_wiener(&t), format!("Wiener vs BFS at {t}"));
            let (all, leaf, internal) = depth_sums(&t);
            r.require(path_length(&t) == all, format!("path length at {t}"));
            r.require(leaf_root_distance(&t) == leaf, format!("leaf-root distance at {t}"));
            r.require(internal_root_distance(&t) == internal, format!("internal-root distance at {t}"));
            r.require(eval_additive(&probe, &t) == eval_by_join(&probe, &t), format!("join recursion at {t}"));
            let recs = subtree_records(&t);
            r.require(recs.len() == n, "one record per non-root vertex");
            for rec in &recs {
                let zero = usize::from(rec.standard.root_degree == 0);
                let one = usize::from(rec.standard.root_degree == 1);
                r.require(
                    rec.extended.leaves == rec.standard.leaves + zero
                        && rec.extended.internal == rec.standard.internal + one
                        && rec.stats(RootConvention::Extended) == rec.extended,
                    format!("record conventions at {t}"),
                );
            }
            checked += 1;
        }
    }

    // scaling-constant invariants
    for src in ["t+1", "(t+1)*(n-t)", "l0", "l1", "t^2*L0 + 1", "n*l1"] {
        let f = PolynomialToll::parse(src).expect("built-in toll");
        let a = match analyze_toll(&f) {
            Ok(a) => a,
            Err(e) => return r.error(e),
        };
        for k in 1..=5 {
            r.require((a.v_k(k) + 0.5 - a.v_prime * k as f64).abs() < 1e-12, format!("V_k identity for {src} k={k}"));
        }
        if !a.uniform_flag {
            continue;
        }
        r.require(a.q_constant(0.0, 0.0).map(|q| q == 1.0).unwrap_or(false), format!("Q({src},0,0) = 1"));
        for (al, be) in [(0.5, 1.0), (-0.7, 0.3), (1.0, -1.0)] {
            let q = a.q_constant(al, be).unwrap_or(f64::NAN);
            for k in 1..=3 {
                let qk = a.q_from_q_k(k, al, be).unwrap_or(f64::NAN);
                r.require((qk - q).abs() <= 1e-10 * q.abs(), format!("k-root identity for {src} k={k}"));
            }
        }
    }

    r.metric("trees_checked", checked as f64);
    r
}
