//! `treegibbs`: counting, exact moments, partition functions, sampling,
//! scaling predictions and the acceptance battery from the command line.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when an internal check
//! fails (a panic, or a failed `verify` criterion).

mod experiment;
mod output;

use std::collections::HashSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use treegibbs::asymptotics::{analyze_toll, predict, ReferenceLaw};
use treegibbs::counting::{
    count_by_internal, count_by_leaves, count_by_root, count_full_resolved, count_kr, count_mk,
    FullCountTable,
};
use treegibbs::enumerate::{
    exact_moments_with, exact_partition_with, stats_histogram, tree_probabilities, ExactOptions, GibbsWeights,
    ThermoParams, DEFAULT_GUARD,
};
use treegibbs::properties::{Property, PropertyEvaluator};
use treegibbs::sampler::{sample_batch, DrawSpec, Sampler, RNG_ALGORITHM};
use treegibbs::series::{partition_asymptotic_for, partition_exact, partition_rational, WeightTriple};
use treegibbs::toll::PolynomialToll;
use treegibbs::verify::{verify_with, Scale, Suite, DEFAULT_SEED};
use treegibbs::Error;

use output::{Metadata, Table};

#[derive(Parser, Debug, Serialize)]
#[command(name = "treegibbs", version, about = "Plane trees under leaf/internal/root-degree Gibbs weights")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "TREEGIBBS_THREADS")]
    threads: Option<usize>,

    /// Write here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Output format; tables default to csv, summaries to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// List every tree with n edges, its Gibbs probability and property values.
    Enumerate(EnumerateArgs),
    /// Exact moments E[P^k] by enumeration.
    ExactMoments(MomentArgs),
    /// Closed-form counts next to enumeration histograms.
    Count(CountArgs),
    /// Partition function from the series recursion and its large-n estimate.
    Partition(PartitionArgs),
    /// Draw exact Gibbs samples and evaluate properties on them.
    Sample(SampleArgs),
    /// Degree analysis and scaling constant Q of a polynomial toll.
    Predict(PredictArgs),
    /// Run ratio, scaling and bounded-root experiments from a JSON config.
    Experiment(ExperimentArgs),
    /// Run the acceptance battery.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct WeightArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Exact weights a b c (per leaf, internal node, root child) as rationals
    /// such as 1/2 or 0.25; replaces --alpha/--beta/--gamma.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], conflicts_with_all = ["alpha", "beta", "gamma"])]
    weights: Option<Vec<String>>,
}

/// `p/q`, an integer, or a plain decimal, parsed exactly.
fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || anyhow::anyhow!("{s:?} is not a rational number (expected p/q, an integer or a decimal)");
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            bail!("{s:?} has a zero denominator");
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let r = BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

impl WeightArgs {
    fn resolve(&self) -> Result<GibbsWeights> {
        match &self.weights {
            Some(v) => {
                let [a, b, c] = [&v[0], &v[1], &v[2]].map(|s| parse_rational(s));
                Ok(GibbsWeights::rational(a?, b?, c?)?)
            }
            None => Ok(GibbsWeights::Thermo(ThermoParams::new(self.alpha, self.beta, self.gamma)?)),
        }
    }
}

fn parse_props(list: &[String]) -> Result<Vec<Property>> {
    list.iter().map(|s| s.parse::<Property>().with_context(|| format!("property {s:?}"))).collect()
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated property ids (e v d0 d1 r pl wi lr ir) or toll expressions.
    #[arg(long, value_delimiter = ',', default_value = "pl,wi")]
    props: Vec<String>,
    /// Keep only trees of root degree at most this.
    #[arg(long)]
    root_max: Option<usize>,
    /// Largest n that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Args, Debug, Serialize)]
struct MomentArgs {
    /// One or more sizes, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "pl")]
    props: Vec<String>,
    /// Emit moments k = 1..=K.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    root_max: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CountBy {
    Leaves,
    Root,
    Internal,
    Full,
    Mk,
    Kr,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    by: CountBy,
    /// Enumeration is skipped above this n and the enumerated column left empty.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
}

#[derive(Args, Debug, Serialize)]
struct PartitionArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "pl")]
    props: Vec<String>,
    #[arg(long)]
    root_max: Option<usize>,
    /// Include each tree as a parenthesis word.
    #[arg(long)]
    trees: bool,
    #[command(flatten)]
    weights: WeightArgs,
}

#[derive(Args, Debug, Serialize)]
struct PredictArgs {
    /// Polynomial in t, l0, l1 (subtree) and n, L0, L1 (whole tree), e.g. "(t+1)*(n-t)".
    #[arg(long)]
    toll: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
}

#[derive(Args, Debug, Serialize)]
struct ExperimentArgs {
    /// JSON config; see the README for the schema.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    Quick,
    Full,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
    suite: SuiteArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

struct Emitter<'a> {
    cli: &'a Cli,
    meta: Metadata,
}

impl Emitter<'_> {
    fn format(&self, default: Format) -> Format {
        self.cli.format.unwrap_or(default)
    }

    fn table(&self, t: &Table) -> Result<()> {
        let mut w = output::open(self.cli.output.as_deref())?;
        match self.format(Format::Csv) {
            Format::Csv => {
                self.meta.write_csv_comment(&mut w)?;
                t.write_csv(&mut w)?;
            }
            Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&self.meta.wrap(t.to_json()))?)?,
        }
        w.flush()?;
        Ok(())
    }

    fn json(&self, v: Value) -> Result<()> {
        let mut w = output::open(self.cli.output.as_deref())?;
        writeln!(w, "{}", serde_json::to_string_pretty(&self.meta.wrap(v))?)?;
        w.flush()?;
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    let (name, seed) = match &cli.command {
        Command::Enumerate(_) => ("enumerate", None),
        Command::ExactMoments(_) => ("exact-moments", None),
        Command::Count(_) => ("count", None),
        Command::Partition(_) => ("partition", None),
        Command::Sample(a) => ("sample", Some(a.seed)),
        Command::Predict(_) => ("predict", None),
        Command::Experiment(_) => ("experiment", None),
        Command::Verify(a) => ("verify", Some(a.seed)),
    };
    let mut config = serde_json::to_value(cli)?;
    let mut meta_seed = seed;
    let mut experiment_cfg = None;
    if let Command::Experiment(a) = &cli.command {
        let src = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
        let cfg = experiment::ExperimentConfig::parse(&src)?;
        config["experiment_config"] = serde_json::to_value(&cfg)?;
        meta_seed = Some(cfg.seed);
        experiment_cfg = Some(cfg);
    }
    let out = Emitter { cli, meta: Metadata::new(name, config, meta_seed) };
    match &cli.command {
        Command::Enumerate(a) => enumerate(&out, a)?,
        Command::ExactMoments(a) => exact_moments(&out, a)?,
        Command::Count(a) => count(&out, a)?,
        Command::Partition(a) => partition(&out, a)?,
        Command::Sample(a) => sample(&out, a)?,
        Command::Predict(a) => predict_cmd(&out, a)?,
        Command::Experiment(_) => {
            let cfg = experiment_cfg.expect("parsed above");
            let res = experiment::run(&cfg, |name| eprintln!("running {name}"))?;
            match out.format(Format::Csv) {
                Format::Csv => {
                    let mut w = output::open(cli.output.as_deref())?;
                    out.meta.write_csv_comment(&mut w)?;
                    res.table.write_csv(&mut w)?;
                    writeln!(w, "# summary: {}", res.summary)?;
                    w.flush()?;
                }
                Format::Json => out.json(res.summary)?,
            }
        }
        Command::Verify(a) => return verify_cmd(&out, a),
    }
    Ok(ExitCode::SUCCESS)
}

fn enumerate(out: &Emitter, a: &EnumerateArgs) -> Result<()> {
    let w = a.weights.resolve()?;
    let props = parse_props(&a.props)?;
    let opts = ExactOptions { guard: a.guard, root_max: a.root_max };
    let trees = tree_probabilities(a.n, &w, &opts)?;
    let z = if w.is_exact() { exact_partition_with(a.n, &w, &opts)?.as_exact().cloned() } else { None };
    let mut header = vec!["index", "tree", "edges", "leaves", "internal", "root_degree", "weight", "probability"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    header.extend(props.iter().map(Property::name));
    let mut table = Table::new(header);
    let mut ev = PropertyEvaluator::new();
    for (i, (t, p)) in trees.iter().enumerate() {
        let s = t.stats();
        let (weight, prob) = match (w.weight_exact(&s), &z) {
            (Some(x), Some(z)) => (x.to_string(), (x / z).to_string()),
            _ => (w.weight_f64(&s).to_string(), p.to_string()),
        };
        let mut row = vec![
            i.to_string(),
            t.to_parens(),
            s.edges.to_string(),
            s.leaves.to_string(),
            s.internal.to_string(),
            s.root_degree.to_string(),
            weight,
            prob,
        ];
        for prop in &props {
            row.push(ev.eval_exact(t.view(), prop).1.to_string());
        }
        table.push(row);
    }
    out.table(&table)
}

fn exact_moments(out: &Emitter, a: &MomentArgs) -> Result<()> {
    let w = a.weights.resolve()?;
    let props = parse_props(&a.props)?;
    if a.k == 0 {
        bail!("--k must be at least 1");
    }
    let opts = ExactOptions { guard: a.guard, root_max: a.root_max };
    let p = w.thermo();
    let mut table = Table::new(["n", "k", "property", "alpha", "beta", "gamma", "value"]);
    for &n in &a.n {
        for prop in &props {
            let moments = exact_moments_with(n, &w, prop, a.k, &opts)?;
            for (k, m) in moments.iter().enumerate().skip(1) {
                table.push(vec![
                    n.to_string(),
                    k.to_string(),
                    prop.name(),
                    p.alpha.to_string(),
                    p.beta.to_string(),
                    p.gamma.to_string(),
                    m.to_string(),
                ]);
            }
        }
    }
    out.table(&table)
}

fn count(out: &Emitter, a: &CountArgs) -> Result<()> {
    let n = a.n;
    let hist = if n <= a.guard { Some(stats_histogram(n, a.guard)?) } else { None };
    let enumerated = |f: &dyn Fn(&treegibbs::TreeStats) -> bool| -> Option<u64> {
        hist.as_ref().map(|h| h.iter().filter(|(s, _)| f(s)).map(|(_, c)| c).sum())
    };
    let flag = |formula: &treegibbs::counting::BigCount, e: Option<u64>| match e {
        Some(e) => (e.to_string(), (*formula == e.into()).to_string()),
        None => (String::new(), String::new()),
    };
    let table = match a.by {
        CountBy::Leaves | CountBy::Root | CountBy::Internal => {
            let (col, range) = match a.by {
                CountBy::Leaves => ("k", if n == 0 { 0..=0 } else { 1..=n }),
                CountBy::Root => ("r", if n == 0 { 0..=0 } else { 1..=n }),
                _ => ("m", if n == 0 { 0..=0 } else { 0..=n - 1 }),
            };
            let mut t = Table::new(["n", col, "formula", "enumerated", "match"]);
            for x in range {
                let (formula, e) = match a.by {
                    CountBy::Leaves => (count_by_leaves(n, x), enumerated(&|s| s.leaves == x)),
                    CountBy::Root => (count_by_root(n, x), enumerated(&|s| s.root_degree == x)),
                    _ => (count_by_internal(n, x), enumerated(&|s| s.internal == x)),
                };
                let (e, ok) = flag(&formula, e);
                t.push(vec![n.to_string(), x.to_string(), formula.to_string(), e, ok]);
            }
            t
        }
        CountBy::Mk | CountBy::Kr => {
            let (c1, c2) = if a.by == CountBy::Mk { ("m", "k") } else { ("k", "r") };
            let mut t = Table::new(["n", c1, c2, "formula", "enumerated", "match"]);
            for x in 0..=n {
                for y in 0..=n {
                    let (formula, e) = if a.by == CountBy::Mk {
                        (count_mk(n, x, y), enumerated(&|s| s.internal == x && s.leaves == y))
                    } else {
                        (count_kr(n, x, y), enumerated(&|s| s.leaves == x && s.root_degree == y))
                    };
                    if formula == 0u32.into() && e.unwrap_or(0) == 0 {
                        continue;
                    }
                    let (e, ok) = flag(&formula, e);
                    t.push(vec![n.to_string(), x.to_string(), y.to_string(), formula.to_string(), e, ok]);
                }
            }
            t
        }
        CountBy::Full => {
            let mut t = Table::new(["n", "m", "k", "r", "formula", "enumerated", "source", "match"]);
            let table = if n <= a.guard { Some(FullCountTable::new(n, a.guard)?) } else { None };
            let mut cells = HashSet::new();
            if let Some(h) = &hist {
                cells.extend(h.keys().map(|s| (s.internal, s.leaves, s.root_degree)));
            }
            for m in 0..=n {
                for k in 0..=n - m {
                    for r in 0..=k.max(n - m) {
                        let fc = match &table {
                            Some(tb) => tb.get(m, k, r),
                            None => count_full_resolved(n, m, k, r, a.guard)?,
                        };
                        if fc.value == 0u32.into() && !cells.contains(&(m, k, r)) {
                            continue;
                        }
                        let e = table.as_ref().map(|tb| tb.enumerated(m, k, r));
                        let (e, ok) = flag(&fc.value, e);
                        let source = serde_json::to_value(fc.source)?.as_str().unwrap_or_default().to_string();
                        t.push(vec![
                            n.to_string(),
                            m.to_string(),
                            k.to_string(),
                            r.to_string(),
                            fc.value.to_string(),
                            e,
                            source,
                            ok,
                        ]);
                    }
                }
            }
            t
        }
    };
    out.table(&table)
}

fn partition(out: &Emitter, a: &PartitionArgs) -> Result<()> {
    let w = a.weights.resolve()?;
    let p = w.thermo();
    let mut t = Table::new(["n", "alpha", "beta", "gamma", "exact", "asymptotic", "ratio"]);
    for &n in &a.n {
        let float = partition_exact(n, &p);
        let exact = match &w {
            GibbsWeights::Rational { a, b, c } => partition_rational(n, a, b, c).to_string(),
            GibbsWeights::Thermo(_) => float.to_scientific(),
        };
        let (asym, ratio) = match partition_asymptotic_for(n, &p) {
            Ok(e) => (e.to_scientific(), float.ratio(&e).to_string()),
            Err(_) => (String::new(), String::new()),
        };
        t.push(vec![n.to_string(), p.alpha.to_string(), p.beta.to_string(), p.gamma.to_string(), exact, asym, ratio]);
    }
    out.table(&t)
}

fn sample(out: &Emitter, a: &SampleArgs) -> Result<()> {
    let w = a.weights.resolve()?;
    let props = parse_props(&a.props)?;
    if a.count == 0 {
        bail!("--count must be at least 1");
    }
    if a.root_max == Some(0) && a.n > 0 {
        bail!("--root-max must be at least 1 for n >= 1");
    }
    let sampler = Sampler::new(WeightTriple::from_gibbs(&w), a.n);
    let spec = DrawSpec { n: a.n, count: a.count, seed: a.seed, root_max: a.root_max };
    let batch = sample_batch(&sampler, &spec, &props, a.trees)?;
    let mut wr = output::open(out.cli.output.as_deref())?;
    match out.format(Format::Csv) {
        Format::Csv => {
            out.meta.write_csv_comment(&mut wr)?;
            writeln!(wr, "# rng: {RNG_ALGORITHM}")?;
            batch.write_csv(&mut wr)?;
        }
        Format::Json => {
            let mut meta = serde_json::to_value(&out.meta)?;
            meta["rng"] = RNG_ALGORITHM.into();
            meta["weights"] = serde_json::to_value(batch.weights)?;
            writeln!(wr, "{}", json!({ "metadata": meta }))?;
            batch.write_jsonl(&mut wr)?;
        }
    }
    wr.flush()?;
    Ok(())
}

fn predict_cmd(out: &Emitter, a: &PredictArgs) -> Result<()> {
    let f = PolynomialToll::parse(&a.toll)?;
    let analysis = analyze_toll(&f)?;
    let (q, reference, hypothesis) = match predict(&f, a.alpha, a.beta) {
        Ok(p) => (Some(p.q), Some(p.reference), Value::Null),
        Err(Error::HypothesisViolated(msg)) => (None, None, Value::String(msg)),
        Err(e) => return Err(e.into()),
    };
    let reference = reference.map(|r| match r {
        ReferenceLaw::Airy => "airy",
        ReferenceLaw::WienerExcursion => "wiener-excursion",
        ReferenceLaw::Degenerate => "degenerate",
        ReferenceLaw::Unspecified => "unspecified",
    });
    match out.format(Format::Json) {
        Format::Json => out.json(json!({
            "toll": f.to_string(),
            "delta": analysis.delta,
            "deltas": { "n": analysis.delta_n, "d0": analysis.delta_d0, "d1": analysis.delta_d1 },
            "uniform": analysis.uniform_flag,
            "subtree_positive": analysis.subtree_positive_flag,
            "vprime": analysis.v_prime,
            "q": q,
            "reference": reference,
            "hypothesis_violated": hypothesis,
        })),
        Format::Csv => {
            let mut t = Table::new(["toll", "delta", "delta_n", "delta_d0", "delta_d1", "vprime", "q"]);
            t.push(vec![
                f.to_string(),
                analysis.delta.to_string(),
                analysis.delta_n.to_string(),
                analysis.delta_d0.to_string(),
                analysis.delta_d1.to_string(),
                analysis.v_prime.to_string(),
                q.map_or(String::new(), |q| q.to_string()),
            ]);
            out.table(&t)
        }
    }
}

fn verify_cmd(out: &Emitter, a: &VerifyArgs) -> Result<ExitCode> {
    let suite = match a.suite {
        SuiteArg::Quick => Suite::Quick,
        SuiteArg::Full => Suite::Full,
    };
    let report = verify_with(suite, Scale::for_suite(suite), a.seed, |c| eprintln!("{}", c.summary_line()));
    match out.format(Format::Json) {
        Format::Json => out.json(serde_json::to_value(&report)?)?,
        Format::Csv => {
            let mut t = Table::new(["id", "name", "status", "seconds", "metrics"]);
            for c in &report.criteria {
                let metrics = c.metrics.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                t.push(vec![
                    c.id.to_string(),
                    c.name.clone(),
                    serde_json::to_value(c.status)?.as_str().unwrap_or_default().to_string(),
                    format!("{:.3}", c.seconds),
                    metrics,
                ]);
            }
            out.table(&t)?;
        }
    }
    Ok(if report.all_passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let r = |s: &str| parse_rational(s).unwrap().to_string();
        assert_eq!(r("1/2"), "1/2");
        assert_eq!(r("0.25"), "1/4");
        assert_eq!(r("-1.5"), "-3/2");
        assert_eq!(r("3"), "3");
        assert_eq!(r(".5"), "1/2");
        for bad in ["", "x", "1/0", "1e3", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
