//! Moment estimation (exact or Monte Carlo) and ratio experiments against the
//! predicted scaling constants.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::asymptotics::analyze_toll;
use crate::enumerate::{exact_moments_with, ExactOptions, GibbsWeights, ThermoParams, DEFAULT_GUARD};
use crate::error::{Error, Result};
use crate::properties::{Property, PropertyEvaluator};
use crate::sampler::{DrawSpec, Sampler};
use crate::series::WeightTriple;

/// Printed with every Monte Carlo ratio report.
pub const UNIFORM_INTEGRABILITY_NOTE: &str = "limits of mean ratios assume uniform integrability of P/n^V'; \
     the underlying results establish convergence in distribution only";

/// `½ Σ |observed/N − p|`.
pub fn total_variation(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    0.5 * observed.iter().zip(probs).map(|(&o, &p)| (o as f64 / total as f64 - p).abs()).sum::<f64>()
}

/// Pearson goodness-of-fit: `(statistic, degrees of freedom, p-value)`.
///
/// `probs` may be unnormalised; cells with zero probability are skipped.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> (f64, usize, f64) {
    let total: u64 = observed.iter().sum();
    let mass: f64 = probs.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            continue;
        }
        let e = total as f64 * p / mass;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let df = cells.saturating_sub(1).max(1);
    let p = 1.0 - ChiSquared::new(df as f64).expect("positive df").cdf(stat);
    (stat, df, p)
}

/// Running mean and variance (Welford), mergeable in a fixed order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, o: &Welford) {
        if o.count == 0 {
            return;
        }
        let n = self.count + o.count;
        let d = o.mean - self.mean;
        self.mean += d * o.count as f64 / n as f64;
        self.m2 += o.m2 + d * d * self.count as f64 * o.count as f64 / n as f64;
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

/// Joint running moments of two quantities measured on the same draws.
#[derive(Clone, Copy, Debug, Default)]
struct Paired {
    a: Welford,
    b: Welford,
    cab: f64,
}

impl Paired {
    fn push(&mut self, x: f64, y: f64) {
        let dx = x - self.a.mean;
        self.a.push(x);
        self.b.push(y);
        self.cab += dx * (y - self.b.mean);
    }

    fn merge(&mut self, o: &Paired) {
        if o.a.count == 0 {
            return;
        }
        let (n1, n2) = (self.a.count as f64, o.a.count as f64);
        let (dx, dy) = (o.a.mean - self.a.mean, o.b.mean - self.b.mean);
        self.cab += o.cab + dx * dy * n1 * n2 / (n1 + n2);
        self.a.merge(&o.a);
        self.b.merge(&o.b);
    }

    /// Delta-method standard error of `mean(a)/mean(b)`.
    fn ratio_se(&self) -> f64 {
        let n = self.a.count as f64;
        let r = self.a.mean / self.b.mean;
        let cov = if n > 1.0 { self.cab / (n - 1.0) } else { 0.0 };
        let var = (self.a.variance() - 2.0 * r * cov + r * r * self.b.variance()).max(0.0);
        (var / n).sqrt() / self.b.mean.abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EnumerationExact,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum EstimateMode {
    /// Exact when `n` is within the enumeration guard, Monte Carlo above.
    #[default]
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateOptions {
    pub mode: EstimateMode,
    pub guard: usize,
    pub root_max: Option<usize>,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { mode: EstimateMode::Auto, guard: DEFAULT_GUARD, root_max: None }
    }
}

impl EstimateOptions {
    fn use_exact(&self, n: usize) -> bool {
        match self.mode {
            EstimateMode::Auto => n <= self.guard,
            EstimateMode::Exact => true,
            EstimateMode::MonteCarlo => false,
        }
    }
}

/// An estimate of `E[P(T_n)^k]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub property: String,
    pub n: usize,
    pub params: ThermoParams,
    pub root_max: Option<usize>,
    pub k: u32,
    pub estimate: f64,
    /// Zero exactly when `method` is exact.
    pub std_error: f64,
    pub samples: usize,
    pub method: Method,
    /// The exact rational value, when rational weights were supplied.
    pub exact_value: Option<String>,
}

fn is_deterministic(p: &Property) -> bool {
    matches!(p, Property::Edges | Property::Vertices)
}

/// `E[P^k]` under the Gibbs weights, by enumeration or by `count` exact samples.
pub fn estimate_moment(
    n: usize,
    w: &GibbsWeights,
    prop: &Property,
    k: u32,
    count: usize,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<MomentEstimate> {
    let params = w.thermo();
    let base = MomentEstimate {
        property: prop.name(),
        n,
        params,
        root_max: opts.root_max,
        k,
        estimate: 0.0,
        std_error: 0.0,
        samples: 0,
        method: Method::EnumerationExact,
        exact_value: None,
    };
    if is_deterministic(prop) && opts.mode != EstimateMode::MonteCarlo {
        let v = if *prop == Property::Edges { n } else { n + 1 } as f64;
        return Ok(MomentEstimate { estimate: v.powi(k as i32), ..base });
    }
    if opts.use_exact(n) {
        let exact = ExactOptions { guard: opts.guard, root_max: opts.root_max };
        let m = exact_moments_with(n, w, prop, k as usize, &exact)?.remove(k as usize);
        return Ok(MomentEstimate {
            estimate: m.to_f64(),
            exact_value: m.as_exact().map(ToString::to_string),
            ..base
        });
    }
    if count < 2 {
        return Err(Error::param("Monte Carlo estimation needs count >= 2"));
    }
    let sampler = Sampler::new(WeightTriple::from_gibbs(w), n);
    let spec = DrawSpec { n, count, seed, root_max: opts.root_max };
    let acc = mc_welford(&sampler, &spec, std::slice::from_ref(prop), k)?.remove(0);
    Ok(MomentEstimate {
        estimate: acc.mean(),
        std_error: acc.std_error(),
        samples: count,
        method: Method::MonteCarlo,
        ..base
    })
}

/// Per-property Welford accumulators of `P^k` over a sampled batch.
pub fn mc_welford(sampler: &Sampler, spec: &DrawSpec, props: &[Property], k: u32) -> Result<Vec<Welford>> {
    let chunks = sampler.par_chunks(
        spec,
        || (vec![Welford::default(); props.len()], PropertyEvaluator::new(), Vec::new()),
        |(acc, ev, buf): &mut (Vec<Welford>, PropertyEvaluator, Vec<f64>), t| {
            ev.eval_f64(t, props, buf);
            for (a, v) in acc.iter_mut().zip(buf.iter()) {
                a.push(v.powi(k as i32));
            }
        },
    )?;
    let mut total = vec![Welford::default(); props.len()];
    for (c, _, _) in &chunks {
        for (t, a) in total.iter_mut().zip(c) {
            t.merge(a);
        }
    }
    Ok(total)
}

fn mc_paired(sampler: &Sampler, spec: &DrawSpec, a: &Property, b: &Property) -> Result<Paired> {
    let props = [a.clone(), b.clone()];
    let chunks = sampler.par_chunks(
        spec,
        || (Paired::default(), PropertyEvaluator::new(), Vec::new()),
        |(acc, ev, buf): &mut (Paired, PropertyEvaluator, Vec<f64>), t| {
            ev.eval_f64(t, &props, buf);
            acc.push(buf[0], buf[1]);
        },
    )?;
    let mut total = Paired::default();
    for (c, _, _) in &chunks {
        total.merge(c);
    }
    Ok(total)
}

/// One grid point of a ratio experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    pub numerator: f64,
    pub numerator_se: f64,
    pub denominator: f64,
    pub denominator_se: f64,
    pub observed: f64,
    pub observed_se: f64,
    pub method: Method,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub numerator: String,
    pub denominator: String,
    pub rows: Vec<RatioRow>,
    pub predicted: Option<f64>,
    /// `|observed − predicted|` per grid point.
    pub trend: Vec<f64>,
    /// Whether `trend` never increases along the grid.
    pub monotone: bool,
    pub note: String,
}

impl RatioReport {
    fn new(numerator: String, denominator: String, rows: Vec<RatioRow>, predicted: Option<f64>) -> Self {
        let trend: Vec<f64> = match predicted {
            Some(p) => rows.iter().map(|r| (r.observed - p).abs()).collect(),
            None => Vec::new(),
        };
        let monotone = trend.windows(2).all(|w| w[1] <= w[0]);
        let mc = rows.iter().any(|r| r.method == Method::MonteCarlo);
        RatioReport {
            numerator,
            denominator,
            rows,
            predicted,
            trend,
            monotone,
            note: if mc { UNIFORM_INTEGRABILITY_NOTE.to_string() } else { String::new() },
        }
    }

    pub fn last(&self) -> &RatioRow {
        self.rows.last().expect("non-empty grid")
    }

    /// `|observed/predicted − 1|` at the largest `n`.
    pub fn relative_error(&self) -> Option<f64> {
        self.predicted.map(|p| (self.last().observed / p - 1.0).abs())
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,numerator,numerator_se,denominator,denominator_se,observed,observed_se,predicted,abs_error,method,samples")?;
        for (i, r) in self.rows.iter().enumerate() {
            let method = match r.method {
                Method::EnumerationExact => "enumeration-exact",
                Method::MonteCarlo => "monte-carlo",
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.n,
                r.numerator,
                r.numerator_se,
                r.denominator,
                r.denominator_se,
                r.observed,
                r.observed_se,
                self.predicted.map_or(String::new(), |p| p.to_string()),
                self.trend.get(i).map_or(String::new(), |d| d.to_string()),
                method,
                r.samples
            )?;
        }
        Ok(())
    }
}

fn check_grid(grid: &[usize]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("the n grid is empty"));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::param("the n grid must be strictly increasing"));
    }
    Ok(())
}

/// Known limits of `E[a]/E[b]` under uniform weights, rescaled by `Q` ratios
/// for other weights: path length is asymptotically twice the leaf-root
/// distance and four times the internal-root distance.
pub fn predicted_ratio(a: &Property, b: &Property, alpha: f64, beta: f64) -> Option<f64> {
    let uniform = |p: &Property| -> Option<f64> {
        match p {
            Property::PathLength => Some(1.0),
            Property::LeafRoot => Some(0.5),
            Property::InternalRoot => Some(0.25),
            _ => None,
        }
    };
    if a == b {
        return Some(1.0);
    }
    let (ua, ub) = (uniform(a)?, uniform(b)?);
    let q = |p: &Property| analyze_toll(&p.as_toll()?).ok()?.q_constant(alpha, beta).ok();
    Some(ua / ub * q(a)? / q(b)?)
}

/// `E[a]/E[b]` under one set of weights across an `n` grid. Monte Carlo
/// points evaluate both properties on the same trees.
pub fn ratio_experiment(
    a: &Property,
    b: &Property,
    w: &GibbsWeights,
    n_grid: &[usize],
    count: usize,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<RatioReport> {
    check_grid(n_grid)?;
    let p = w.thermo();
    let mut rows = Vec::new();
    for (i, &n) in n_grid.iter().enumerate() {
        if opts.use_exact(n) {
            let ea = estimate_moment(n, w, a, 1, count, seed, opts)?;
            let eb = estimate_moment(n, w, b, 1, count, seed, opts)?;
            rows.push(exact_row(n, ea.estimate, eb.estimate));
        } else {
            let sampler = Sampler::new(WeightTriple::from_gibbs(w), n);
            let spec = DrawSpec { n, count, seed: seed.wrapping_add(i as u64), root_max: opts.root_max };
            let acc = mc_paired(&sampler, &spec, a, b)?;
            rows.push(RatioRow {
                n,
                numerator: acc.a.mean(),
                numerator_se: acc.a.std_error(),
                denominator: acc.b.mean(),
                denominator_se: acc.b.std_error(),
                observed: acc.a.mean() / acc.b.mean(),
                observed_se: acc.ratio_se(),
                method: Method::MonteCarlo,
                samples: count,
            });
        }
    }
    Ok(RatioReport::new(a.name(), b.name(), rows, predicted_ratio(a, b, p.alpha, p.beta)))
}

fn exact_row(n: usize, num: f64, den: f64) -> RatioRow {
    RatioRow {
        n,
        numerator: num,
        numerator_se: 0.0,
        denominator: den,
        denominator_se: 0.0,
        observed: num / den,
        observed_se: 0.0,
        method: Method::EnumerationExact,
        samples: 0,
    }
}

/// Ratio of means of the same property under two independent settings.
#[allow(clippy::too_many_arguments)]
fn two_setting_ratio(
    prop: &Property,
    num: (&GibbsWeights, Option<usize>),
    den: (&GibbsWeights, Option<usize>),
    n_grid: &[usize],
    count: usize,
    seed: u64,
    opts: &EstimateOptions,
    predicted: f64,
    label: (&str, &str),
) -> Result<RatioReport> {
    check_grid(n_grid)?;
    let mut rows = Vec::new();
    for (i, &n) in n_grid.iter().enumerate() {
        let s = seed.wrapping_add(2 * i as u64);
        let on = EstimateOptions { root_max: num.1, ..*opts };
        let od = EstimateOptions { root_max: den.1, ..*opts };
        let a = estimate_moment(n, num.0, prop, 1, count, s, &on)?;
        let b = estimate_moment(n, den.0, prop, 1, count, s + 1, &od)?;
        let observed = a.estimate / b.estimate;
        let rel = ((a.std_error / a.estimate).powi(2) + (b.std_error / b.estimate).powi(2)).sqrt();
        rows.push(RatioRow {
            n,
            numerator: a.estimate,
            numerator_se: a.std_error,
            denominator: b.estimate,
            denominator_se: b.std_error,
            observed,
            observed_se: observed.abs() * rel,
            method: if a.method == Method::MonteCarlo || b.method == Method::MonteCarlo {
                Method::MonteCarlo
            } else {
                Method::EnumerationExact
            },
            samples: a.samples.max(b.samples),
        });
    }
    Ok(RatioReport::new(label.0.to_string(), label.1.to_string(), rows, Some(predicted)))
}

/// `E_{(α,β,0)}[P^f] / E_{(0,0,0)}[P^f]` across the grid against `Q(f, α, β)`.
pub fn scaling_experiment(
    f: &Property,
    alpha: f64,
    beta: f64,
    n_grid: &[usize],
    count: usize,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<RatioReport> {
    let toll = f.as_toll().ok_or_else(|| Error::param(format!("{} has no polynomial toll", f.name())))?;
    let q = analyze_toll(&toll)?.q_constant(alpha, beta)?;
    let weighted = GibbsWeights::Thermo(ThermoParams::new(alpha, beta, 0.0)?);
    let uniform = GibbsWeights::Thermo(ThermoParams::uniform());
    two_setting_ratio(
        f,
        (&weighted, None),
        (&uniform, None),
        n_grid,
        count,
        seed,
        opts,
        q,
        (&format!("{}@({alpha},{beta},0)", f.name()), &format!("{}@(0,0,0)", f.name())),
    )
}

/// Mean of `P^f` under `(α,β,γ)` restricted to root degree at most `h`,
/// over its mean under `(α,β,0)` without restriction; the predicted limit is 1.
pub fn bounded_root_experiment(
    f: &Property,
    params: &ThermoParams,
    h: usize,
    n_grid: &[usize],
    count: usize,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<RatioReport> {
    if h == 0 {
        return Err(Error::param("the root-degree bound must be at least 1"));
    }
    let bounded = GibbsWeights::Thermo(*params);
    let free = GibbsWeights::Thermo(params.without_root());
    let p = params;
    two_setting_ratio(
        f,
        (&bounded, Some(h)),
        (&free, None),
        n_grid,
        count,
        seed,
        opts,
        1.0,
        (
            &format!("{}@({},{},{})|root<={h}", f.name(), p.alpha, p.beta, p.gamma),
            &format!("{}@({},{},0)", f.name(), p.alpha, p.beta),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    fn uniform() -> GibbsWeights {
        GibbsWeights::Thermo(ThermoParams::uniform())
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 1.5).collect();
        let mut whole = Welford::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Welford::default();
        let mut b = Welford::default();
        xs[..317].iter().for_each(|&x| a.push(x));
        xs[317..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean() - whole.mean()).abs() < 1e-12);
        assert!((a.variance() - whole.variance()).abs() < 1e-9);
    }

    #[test]
    fn deterministic_and_exact_estimates() {
        let w = GibbsWeights::Thermo(ThermoParams::new(0.3, 0.9, -0.2).unwrap());
        let e = estimate_moment(500, &w, &Property::Edges, 1, 10, 1, &EstimateOptions::default()).unwrap();
        assert_eq!((e.estimate, e.std_error, e.method), (500.0, 0.0, Method::EnumerationExact));

        let one = BigRational::one();
        let exact = GibbsWeights::rational(one.clone(), one.clone(), one).unwrap();
        let e = estimate_moment(3, &exact, &Property::PathLength, 1, 10, 1, &EstimateOptions::default()).unwrap();
        assert_eq!(e.exact_value.as_deref(), Some("22/5"));
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn monte_carlo_agrees_with_enumeration() {
        let sets = [ThermoParams::uniform(), ThermoParams::new(0.5, 1.0, 0.0).unwrap(), ThermoParams::new(-0.3, 0.4, 0.6).unwrap()];
        let props = [Property::PathLength, Property::Wiener, Property::LeafRoot, Property::InternalRoot, Property::Leaves, Property::RootDegree];
        let mc = EstimateOptions { mode: EstimateMode::MonteCarlo, ..EstimateOptions::default() };
        for (i, p) in sets.iter().enumerate() {
            let w = GibbsWeights::Thermo(*p);
            for prop in &props {
                let exact = estimate_moment(12, &w, prop, 1, 0, 0, &EstimateOptions::default()).unwrap();
                let est = estimate_moment(12, &w, prop, 1, 40_000, 100 + i as u64, &mc).unwrap();
                assert!(
                    (est.estimate - exact.estimate).abs() < 3.5 * est.std_error,
                    "{prop} {p:?}: {} vs {} (se {})",
                    est.estimate,
                    exact.estimate,
                    est.std_error
                );
            }
        }
    }

    #[test]
    fn estimates_are_reproducible() {
        let mc = EstimateOptions { mode: EstimateMode::MonteCarlo, ..EstimateOptions::default() };
        let a = estimate_moment(200, &uniform(), &Property::Wiener, 2, 5000, 9, &mc).unwrap();
        let b = estimate_moment(200, &uniform(), &Property::Wiener, 2, 5000, 9, &mc).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn standard_error_shrinks_like_inverse_root_count() {
        let mc = EstimateOptions { mode: EstimateMode::MonteCarlo, ..EstimateOptions::default() };
        let se: Vec<f64> = [10_000, 40_000, 160_000]
            .iter()
            .map(|&c| estimate_moment(60, &uniform(), &Property::PathLength, 1, c, 77, &mc).unwrap().std_error)
            .collect();
        for w in se.windows(2) {
            assert!((w[0] / w[1] / 2.0 - 1.0).abs() < 0.2, "{se:?}");
        }
    }

    #[test]
    fn ratio_of_a_property_with_itself() {
        let opts = EstimateOptions::default();
        let r = ratio_experiment(&Property::PathLength, &Property::PathLength, &uniform(), &[4, 8, 30], 2000, 3, &opts).unwrap();
        assert!(r.rows.iter().all(|row| (row.observed - 1.0).abs() < 1e-12));
        assert_eq!(r.predicted, Some(1.0));
        assert!(ratio_experiment(&Property::PathLength, &Property::LeafRoot, &uniform(), &[8, 6], 10, 1, &opts).is_err());
    }

    #[test]
    fn exact_ratios_trend_towards_their_limits() {
        let opts = EstimateOptions::default();
        let r = ratio_experiment(&Property::PathLength, &Property::LeafRoot, &uniform(), &[8, 10, 12], 0, 0, &opts).unwrap();
        assert_eq!(r.predicted, Some(2.0));
        assert!(r.monotone, "{:?}", r.trend);
        let r = ratio_experiment(&Property::PathLength, &Property::InternalRoot, &uniform(), &[8, 10, 12], 0, 0, &opts).unwrap();
        assert_eq!(r.predicted, Some(4.0));
        assert!(r.monotone, "{:?}", r.trend);
    }

    #[test]
    fn scaling_experiment_at_uniform_weights_is_one() {
        let opts = EstimateOptions::default();
        let r = scaling_experiment(&Property::PathLength, 0.0, 0.0, &[3, 6, 9], 0, 0, &opts).unwrap();
        assert!(r.rows.iter().all(|row| (row.observed - 1.0).abs() < 1e-12));
        assert_eq!(r.predicted, Some(1.0));
        let r = scaling_experiment(&Property::PathLength, 0.5, 1.0, &[6, 9, 12], 0, 0, &opts).unwrap();
        assert!(r.trend[2] < r.trend[0]);
        assert!(scaling_experiment(&"t*l0 + L1^2".parse().unwrap(), 0.5, 1.0, &[6], 0, 0, &opts).is_err());
    }

    #[test]
    fn bounded_root_with_vacuous_bound() {
        let p = ThermoParams::new(0.5, 1.0, 0.0).unwrap();
        let r = bounded_root_experiment(&Property::PathLength, &p, 10, &[4, 7, 10], 0, 0, &EstimateOptions::default()).unwrap();
        assert!(r.rows.iter().all(|row| (row.observed - 1.0).abs() < 1e-12));
    }

    #[test]
    fn chi_square_and_tv() {
        let (stat, df, p) = chi_square_gof(&[50, 50], &[0.5, 0.5]);
        assert_eq!((stat, df), (0.0, 1));
        assert!((p - 1.0).abs() < 1e-12);
        let (_, _, p) = chi_square_gof(&[90, 10], &[0.5, 0.5]);
        assert!(p < 1e-10);
        assert!((total_variation(&[3, 1], &[0.5, 0.5]) - 0.25).abs() < 1e-15);
    }
}
