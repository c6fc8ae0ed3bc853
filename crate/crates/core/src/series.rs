//! Coefficients of the weighted generating functions `G(x,a,b)`, `G*(x,a,b)`
//! and `G(x,a,b,c) = 1/(1 − c·G*)`, with exact and asymptotic partition functions.
//!
//! Floating-point tables store `g[n]/ρⁿ` (and `z[n]/σⁿ`) so values stay of
//! order `n^{-3/2}` instead of overflowing near `n ≈ 500`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};
use serde::Serialize;

use crate::counting::{binomial, catalan};
use crate::enumerate::{GibbsWeights, ThermoParams};
use crate::error::{Error, Result};
use crate::numeric::{exact_rational, format_from_ln, rational_pow, rational_to_f64};

/// Leaf, internal-node and root-degree weights `(e^{-α}, e^{-β}, e^{-γ})`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl WeightTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0 && a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::param("weights a, b, c must be positive and finite"));
        }
        Ok(WeightTriple { a, b, c })
    }

    pub fn from_thermo(p: &ThermoParams) -> Self {
        let (a, b, c) = p.weights();
        WeightTriple { a, b, c }
    }

    pub fn from_gibbs(w: &GibbsWeights) -> Self {
        let (a, b, c) = w.abc_f64();
        WeightTriple { a, b, c }
    }

    pub fn rho(&self) -> f64 {
        self.a + self.b + 2.0 * self.a.sqrt()
    }

    pub fn rho_bar(&self) -> f64 {
        self.a + self.b - 2.0 * self.a.sqrt()
    }

    /// `G*(x)` from its closed form, valid for `0 ≤ x ≤ 1/ρ`.
    pub fn g_star_closed(&self, x: f64) -> f64 {
        let WeightTriple { a, b, .. } = *self;
        let psi = (1.0 - 2.0 * (a + b) * x + ((a + b) * (a + b) - 4.0 * a) * x * x).max(0.0);
        (1.0 + (a - b) * x - psi.sqrt()) / (2.0 * (1.0 - (b - 1.0) * x))
    }

    /// Exponential growth rate of `z[n] = [xⁿ]G(x,a,b,c)`.
    ///
    /// This is `ρ` unless `c·G*(1/ρ) > 1`, in which case the pole of
    /// `1/(1 − c·G*)` comes first and the rate is its reciprocal.
    pub fn z_growth(&self) -> f64 {
        let rho = self.rho();
        let at_singularity = self.c * self.g_star_closed(1.0 / rho);
        if at_singularity <= 1.0 {
            return rho;
        }
        let (mut lo, mut hi) = (0.0, 1.0 / rho);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.c * self.g_star_closed(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        2.0 / (lo + hi)
    }
}

/// `ρ = e^{-α} + e^{-β} + 2e^{-α/2}`, the dominant singularity of `G` is `1/ρ`.
pub fn rho(alpha: f64, beta: f64) -> f64 {
    (-alpha).exp() + (-beta).exp() + 2.0 * (-alpha / 2.0).exp()
}

pub fn rho_bar(alpha: f64, beta: f64) -> f64 {
    (-alpha).exp() + (-beta).exp() - 2.0 * (-alpha / 2.0).exp()
}

/// Coefficient arrays to a fixed truncation order.
///
/// * `g[n]`: trees with `n` edges weighted by `a^{d0} b^{d1}`
/// * `g1[n]`: the same restricted to root degree 1 ("planted" trees)
/// * `g2[n] = g[n] − g1[n] − [n=0]`: root degree at least 2
/// * `z[n]`: all trees weighted by `a^{d0} b^{d1} c^{r}`
///
/// Floating tables hold `g[n]/ρⁿ`, `g1[n]/ρⁿ`, `g2[n]/ρⁿ` and `z[n]/σⁿ`;
/// exact tables are unscaled.
#[derive(Clone, Debug)]
pub struct SeriesTables<T> {
    g: Vec<T>,
    g1: Vec<T>,
    g2: Vec<T>,
    z: Vec<T>,
    scale: f64,
    z_scale: f64,
}

impl<T> SeriesTables<T> {
    pub fn order(&self) -> usize {
        self.g.len() - 1
    }

    pub fn g(&self) -> &[T] {
        &self.g
    }

    pub fn g1(&self) -> &[T] {
        &self.g1
    }

    pub fn g2(&self) -> &[T] {
        &self.g2
    }

    pub fn z(&self) -> &[T] {
        &self.z
    }

    /// `ρ` for the `g` arrays (1 for exact tables).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `σ` for the `z` array (1 for exact tables).
    pub fn z_scale(&self) -> f64 {
        self.z_scale
    }
}

/// One pass of the combinatorial DP.
///
/// `inv` divides each coefficient index by the `g` scale, and `z_ratio`
/// is `(g scale)/(z scale)`.
fn run_dp<T: Clone + Num>(a: &T, b: &T, c: &T, inv: &T, z_ratio: &T, order: usize) -> SeriesTables<T> {
    let mut g: Vec<T> = Vec::with_capacity(order + 1);
    let mut g1: Vec<T> = Vec::with_capacity(order + 1);
    let mut g2: Vec<T> = Vec::with_capacity(order + 1);
    for s in 0..=order {
        let planted = match s {
            0 => T::zero(),
            1 => a.clone() * inv.clone(),
            _ => (b.clone() * g1[s - 1].clone() + g2[s - 1].clone()) * inv.clone(),
        };
        let mut branched = T::zero();
        for i in 1..s {
            branched = branched + g1[i].clone() * g[s - i].clone();
        }
        let total = if s == 0 { T::one() } else { planted.clone() + branched.clone() };
        g1.push(planted);
        g2.push(branched);
        g.push(total);
    }
    // c·g1[j]·(ρ/σ)^j, reused by every z[n].
    let mut weighted = Vec::with_capacity(order + 1);
    let mut power = T::one();
    for j in 0..=order {
        weighted.push(c.clone() * g1[j].clone() * power.clone());
        power = power * z_ratio.clone();
    }
    let mut z: Vec<T> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = if n == 0 { T::one() } else { T::zero() };
        for j in 1..=n {
            acc = acc + weighted[j].clone() * z[n - j].clone();
        }
        z.push(acc);
    }
    SeriesTables { g, g1, g2, z, scale: 1.0, z_scale: 1.0 }
}

/// Scaled floating tables to order `order`, `O(order²)`.
pub fn build_tables(w: &WeightTriple, order: usize) -> SeriesTables<f64> {
    let rho = w.rho();
    let sigma = w.z_growth();
    let mut t = run_dp(&w.a, &w.b, &w.c, &(1.0 / rho), &(rho / sigma), order);
    t.scale = rho;
    t.z_scale = sigma;
    t
}

/// Unscaled exact tables for rational weights.
pub fn build_exact_tables(a: &BigRational, b: &BigRational, c: &BigRational, order: usize) -> SeriesTables<BigRational> {
    let one = BigRational::one();
    run_dp(a, b, c, &one, &one, order)
}

impl SeriesTables<f64> {
    /// `ln g[n]` (unscaled).
    pub fn ln_g(&self, n: usize) -> f64 {
        self.g[n].ln() + n as f64 * self.scale.ln()
    }

    /// `ln z[n]` (unscaled).
    pub fn ln_z(&self, n: usize) -> f64 {
        self.z[n].ln() + n as f64 * self.z_scale.ln()
    }

    pub fn g_unscaled(&self, n: usize) -> f64 {
        self.ln_g(n).exp()
    }

    /// Largest relative residual of `G = 1 + xG² + (a−1)xG + (b−1)xGG*` over
    /// coefficients `1..=order`.
    pub fn recurrence_residual(&self, w: &WeightTriple) -> f64 {
        let inv = 1.0 / self.scale;
        let (g, g1) = (&self.g, &self.g1);
        let mut worst = 0.0f64;
        for n in 1..=self.order() {
            let m = n - 1;
            let sq: f64 = (0..=m).map(|i| g[i] * g[m - i]).sum();
            let mixed: f64 = (0..=m).map(|i| g[i] * g1[m - i]).sum();
            let rhs = inv * (sq + (w.a - 1.0) * g[m] + (w.b - 1.0) * mixed);
            let scale = g[n].abs().max(inv * (sq.abs() + ((w.a - 1.0) * g[m]).abs() + ((w.b - 1.0) * mixed).abs()));
            worst = worst.max((g[n] - rhs).abs() / scale);
        }
        worst
    }

    /// Largest relative residual of `G − G·G* = 1` over coefficients `1..=order`.
    pub fn g_star_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 1..=self.order() {
            let conv: f64 = (0..=n).map(|j| self.g[j] * self.g1[n - j]).sum();
            worst = worst.max((self.g[n] - conv).abs() / self.g[n]);
        }
        worst
    }
}

impl SeriesTables<BigRational> {
    /// Coefficients of `G − 1 − xG² − (a−1)xG − (b−1)xGG*`; all zero when consistent.
    pub fn recurrence_residual(&self, a: &BigRational, b: &BigRational) -> Vec<BigRational> {
        let one = BigRational::one();
        let (g, g1) = (&self.g, &self.g1);
        (0..=self.order())
            .map(|n| {
                let mut r = g[n].clone();
                if n == 0 {
                    r -= &one;
                } else {
                    let m = n - 1;
                    for i in 0..=m {
                        r -= &g[i] * &g[m - i];
                        r -= (b - &one) * &g[i] * &g1[m - i];
                    }
                    r -= (a - &one) * &g[m];
                }
                r
            })
            .collect()
    }

    /// Coefficients of `G − G·G* − 1`.
    pub fn g_star_residual(&self) -> Vec<BigRational> {
        (0..=self.order())
            .map(|n| {
                let mut r = self.g[n].clone();
                for j in 0..=n {
                    r -= &self.g[j] * &self.g1[n - j];
                }
                if n == 0 {
                    r -= BigRational::one();
                }
                r
            })
            .collect()
    }
}

/// `g[n]` from the square-root closed form `G = (P − √Ψ)/(2x)` with
/// `P = 1 + (2−a−b)x` and `Ψ = 1 − 2(a+b)x + ((a+b)² − 4a)x²`.
///
/// Float validation path only; the truncated series for `√Ψ` is expanded
/// with the usual convolution recurrence.
pub fn closed_form_coefficients(a: f64, b: f64, order: usize) -> Vec<f64> {
    let psi = [1.0, -2.0 * (a + b), (a + b) * (a + b) - 4.0 * a];
    let len = order + 2;
    let mut s = vec![0.0; len];
    s[0] = 1.0;
    for n in 1..len {
        let coeff = psi.get(n).copied().unwrap_or(0.0);
        let conv: f64 = (1..n).map(|i| s[i] * s[n - i]).sum();
        s[n] = (coeff - conv) / 2.0;
    }
    let p = [1.0, 2.0 - a - b];
    (0..=order).map(|n| (p.get(n + 1).copied().unwrap_or(0.0) - s[n + 1]) / 2.0).collect()
}

/// `G_n(a,b) = 2^{-(n+1)} Σ_{0≤k≤(n+1)/2} C_{n−k} binom(n−k+1,k) (a+b)^{n−2k+1} (4a−(a+b)²)^k`,
/// evaluated in exact rationals from the binary values of `a` and `b`.
///
/// The closed form holds for `n ≥ 2`; smaller `n` fall back to the DP.
pub fn gn_explicit(n: usize, a: f64, b: f64) -> Result<f64> {
    let ra = exact_rational(a).ok_or_else(|| Error::param("a must be finite"))?;
    let rb = exact_rational(b).ok_or_else(|| Error::param("b must be finite"))?;
    if n < 2 {
        let t = build_exact_tables(&ra, &rb, &BigRational::one(), n);
        return Ok(rational_to_f64(&t.g[n]));
    }
    Ok(rational_to_f64(&gn_explicit_exact(n, &ra, &rb)))
}

pub fn gn_explicit_exact(n: usize, a: &BigRational, b: &BigRational) -> BigRational {
    let sum_ab = a + b;
    let disc = BigRational::from_integer(4.into()) * a - &sum_ab * &sum_ab;
    let mut total = BigRational::zero();
    for k in 0..=(n + 1) / 2 {
        let combinatorial = BigInt::from(catalan(n - k)) * BigInt::from(binomial((n - k + 1) as i64, k as i64));
        total += BigRational::from_integer(combinatorial) * rational_pow(&sum_ab, n + 1 - 2 * k) * rational_pow(&disc, k);
    }
    total / BigRational::from_integer(BigInt::one() << (n + 1))
}

/// A positive value kept as `scaled · e^{log_scale}` so it survives outside `f64` range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Partition {
    pub n: usize,
    pub scaled: f64,
    pub log_scale: f64,
}

impl Partition {
    pub fn ln(&self) -> f64 {
        self.scaled.ln() + self.log_scale
    }

    /// The plain value; infinite when it overflows.
    pub fn value(&self) -> f64 {
        self.ln().exp()
    }

    /// `self / other` computed in log space.
    pub fn ratio(&self, other: &Partition) -> f64 {
        (self.ln() - other.ln()).exp()
    }

    /// Scientific notation valid for any magnitude.
    pub fn to_scientific(&self) -> String {
        format_from_ln(self.ln())
    }
}

impl SeriesTables<f64> {
    /// `Σ_{T∈T_n} a^{d0} b^{d1} c^{r}`.
    pub fn partition(&self, n: usize) -> Partition {
        Partition { n, scaled: self.z[n], log_scale: n as f64 * self.z_scale.ln() }
    }

    /// `Σ_{T∈T_n} a^{d0} b^{d1}` (root weight ignored).
    pub fn partition_without_root(&self, n: usize) -> Partition {
        Partition { n, scaled: self.g[n], log_scale: n as f64 * self.scale.ln() }
    }
}

/// `Z_{(n,α,β,γ)}` from the series DP.
pub fn partition_exact(n: usize, p: &ThermoParams) -> Partition {
    let w = WeightTriple::from_thermo(p);
    let t = build_tables(&w, n);
    if p.gamma == 0.0 {
        t.partition_without_root(n)
    } else {
        t.partition(n)
    }
}

/// Exact `Z` for rational weights.
pub fn partition_rational(n: usize, a: &BigRational, b: &BigRational, c: &BigRational) -> BigRational {
    build_exact_tables(a, b, c, n).z[n].clone()
}

/// Leading-order estimate `√(e^{-α/2}ρ)/(2√π) · ρⁿ · n^{-3/2}` (`γ = 0`).
pub fn partition_asymptotic(n: usize, alpha: f64, beta: f64) -> Partition {
    let r = rho(alpha, beta);
    let prefactor = ((-alpha / 2.0).exp() * r).sqrt() / (2.0 * std::f64::consts::PI.sqrt());
    Partition { n, scaled: prefactor * (n as f64).powf(-1.5), log_scale: n as f64 * r.ln() }
}

/// As [`partition_asymptotic`], refusing `γ ≠ 0` where no estimate is available.
pub fn partition_asymptotic_for(n: usize, p: &ThermoParams) -> Result<Partition> {
    if p.gamma != 0.0 {
        return Err(Error::param("the partition-function estimate covers gamma = 0 only"));
    }
    if n == 0 {
        return Err(Error::param("the partition-function estimate needs n >= 1"));
    }
    Ok(partition_asymptotic(n, p.alpha, p.beta))
}

/// `Z_exact / Z_estimate` at `γ = 0`.
pub fn partition_ratio(n: usize, alpha: f64, beta: f64) -> f64 {
    let exact = partition_exact(n, &ThermoParams { alpha, beta, gamma: 0.0 });
    exact.ratio(&partition_asymptotic(n, alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{exact_partition, GibbsWeights};
    use crate::numeric::rational_from_int;
    use crate::properties::PropertyValue;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn uniform_exact(order: usize) -> SeriesTables<BigRational> {
        build_exact_tables(&q(1, 1), &q(1, 1), &q(1, 1), order)
    }

    #[test]
    fn catalan_specialisation() {
        let t = uniform_exact(20);
        for n in 0..=20 {
            assert_eq!(t.g()[n], BigRational::from_integer(catalan(n).into()));
            assert_eq!(t.z()[n], t.g()[n]);
        }
        assert_eq!(t.g1()[0], q(0, 1));
        let f = build_tables(&WeightTriple::new(1.0, 1.0, 1.0).unwrap(), 20);
        for n in 0..=5 {
            assert!((f.g_unscaled(n) - [1.0, 1.0, 2.0, 5.0, 14.0, 42.0][n]).abs() < 1e-9);
        }
        for n in 0..=20 {
            assert!((f.z()[n] - f.g()[n]).abs() <= 1e-12 * f.g()[n]);
        }
    }

    #[test]
    fn weighted_examples() {
        let t = build_exact_tables(&q(2, 1), &q(1, 1), &q(1, 1), 4);
        assert_eq!(t.g()[2], q(6, 1));
        assert_eq!(partition_rational(3, &q(1, 2), &q(1, 2), &q(1, 2)), q(17, 64));
        assert_eq!(partition_exact(3, &ThermoParams::uniform()).value().round(), 5.0);
        let ln2 = std::f64::consts::LN_2;
        let z = partition_exact(3, &ThermoParams::new(ln2, ln2, ln2).unwrap()).value();
        assert!((z - 0.265625).abs() < 1e-14);
    }

    #[test]
    fn exact_identities_to_order_200() {
        for (a, b) in [(q(1, 2), q(1, 1)), (q(3, 1), q(2, 5)), (q(7, 3), q(5, 4))] {
            let t = build_exact_tables(&a, &b, &q(1, 3), 200);
            assert!(t.recurrence_residual(&a, &b).iter().all(Zero::is_zero));
            assert!(t.g_star_residual().iter().all(Zero::is_zero));
            assert!(t.g().iter().all(|x| *x > BigRational::zero()));
            assert!(t.g1().iter().skip(1).all(|x| *x > BigRational::zero()));
        }
    }

    #[test]
    fn float_identities() {
        for w in [(0.5, 1.0, 1.0), (2.0, 0.3, 0.5), (0.1, 4.0, 3.0)] {
            let w = WeightTriple::new(w.0, w.1, w.2).unwrap();
            let t = build_tables(&w, 400);
            assert!(t.recurrence_residual(&w) < 1e-10);
            assert!(t.g_star_residual() < 1e-10);
            assert!(t.z().iter().all(|x| *x >= 0.0));
            assert!(t.g1().iter().all(|x| *x >= 0.0));
        }
    }

    #[test]
    fn matches_enumeration() {
        let params = [ThermoParams::new(0.5, 1.0, 0.0).unwrap(), ThermoParams::new(-0.3, 0.2, 0.7).unwrap(), {
            let l = std::f64::consts::LN_2;
            ThermoParams::new(l, l, l).unwrap()
        }];
        for p in params {
            let tables = build_tables(&WeightTriple::from_thermo(&p), 12);
            for n in 0..=12 {
                let e = exact_partition(n, &GibbsWeights::Thermo(p)).unwrap().to_f64();
                let s = partition_exact(n, &p).value();
                assert!((e - s).abs() <= 1e-12 * e, "n={n} {p:?} {e} {s}");
                let g = tables.partition_without_root(n).value();
                let e0 = exact_partition(n, &GibbsWeights::Thermo(p.without_root())).unwrap().to_f64();
                assert!((g - e0).abs() <= 1e-12 * e0);
            }
        }
        let w = GibbsWeights::rational(q(1, 2), q(3, 2), q(2, 3)).unwrap();
        for n in 0..=9 {
            assert_eq!(
                exact_partition(n, &w).unwrap(),
                PropertyValue::Exact(partition_rational(n, &q(1, 2), &q(3, 2), &q(2, 3)))
            );
        }
    }

    #[test]
    fn explicit_gn() {
        assert_eq!(gn_explicit(2, 1.0, 1.0).unwrap(), 2.0);
        assert_eq!(gn_explicit(2, 2.0, 1.0).unwrap(), 6.0);
        assert_eq!(gn_explicit(1, 2.0, 1.0).unwrap(), 2.0);
        for (a, b) in [(0.5, 1.0), (2.0, 3.0), (0.25, 0.75)] {
            let ra = exact_rational(a).unwrap();
            let rb = exact_rational(b).unwrap();
            let t = build_exact_tables(&ra, &rb, &rational_from_int(1), 16);
            for n in 2..=16 {
                assert_eq!(gn_explicit_exact(n, &ra, &rb), t.g()[n]);
                let x = gn_explicit(n, a, b).unwrap();
                let y = rational_to_f64(&t.g()[n]);
                assert!((x - y).abs() <= 1e-10 * y);
            }
        }
    }

    #[test]
    fn closed_form_expansion_agrees() {
        for (a, b) in [(1.0, 1.0), (0.6, 0.37), (2.0, 1.5)] {
            let w = WeightTriple::new(a, b, 1.0).unwrap();
            let t = build_tables(&w, 30);
            let cf = closed_form_coefficients(a, b, 30);
            for n in 0..=30 {
                let g = t.g_unscaled(n);
                assert!((cf[n] - g).abs() <= 1e-9 * g, "n={n}: {} vs {g}", cf[n]);
            }
        }
    }

    #[test]
    fn g_star_closed_form_matches_series() {
        let w = WeightTriple::new(0.7, 1.3, 1.0).unwrap();
        let t = build_tables(&w, 400);
        let x = 0.5 / w.rho();
        let series: f64 = t.g1().iter().enumerate().map(|(j, v)| v * (x * w.rho()).powi(j as i32)).sum();
        assert!((series - w.g_star_closed(x)).abs() < 1e-12);
    }

    #[test]
    fn z_growth_follows_the_dominant_singularity() {
        // c large enough that the pole of 1/(1 − cG*) dominates
        let w = WeightTriple::new(0.6, 0.4, 5.0).unwrap();
        let sigma = w.z_growth();
        assert!(sigma > w.rho());
        let t = build_tables(&w, 3000);
        let ratio = t.z()[3000] / t.z()[2999];
        assert!((ratio - 1.0).abs() < 1e-6, "{ratio}");
        let exact = build_exact_tables(&exact_rational(0.6).unwrap(), &exact_rational(0.4).unwrap(), &q(5, 1), 40);
        for n in [10, 25, 40] {
            let e = rational_to_f64(&exact.z()[n]);
            assert!((t.partition(n).value() - e).abs() <= 1e-10 * e);
        }
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(0.0, 0.0), 4.0);
        assert_eq!(rho_bar(0.0, 0.0), 0.0);
        for (a, b) in [(0.5, 1.0), (-1.0, 2.0), (3.0, -0.5)] {
            assert!(rho(a, b) > rho_bar(a, b) && rho(a, b) > 0.0);
        }
        let w = WeightTriple::from_thermo(&ThermoParams::new(0.5, 1.0, 0.0).unwrap());
        let t = build_tables(&w, 5001);
        let growth = t.g()[5001] / t.g()[5000] * t.scale();
        assert!((growth / w.rho() - 1.0).abs() < 0.01);
    }

    #[test]
    fn asymptotic_partition() {
        let p = partition_asymptotic(10, 0.0, 0.0);
        let catalan_estimate = 4f64.powi(10) / (std::f64::consts::PI.sqrt() * 10f64.powf(1.5));
        assert!((p.value() - catalan_estimate).abs() < 1e-9 * catalan_estimate);
        let r500 = partition_ratio(500, 0.5, 1.0);
        let r2000 = partition_ratio(2000, 0.5, 1.0);
        assert!((0.98..=1.02).contains(&r2000), "{r2000}");
        assert!((r2000 - 1.0).abs() < (r500 - 1.0).abs());
        assert!(partition_asymptotic_for(10, &ThermoParams::new(0.0, 0.0, 1.0).unwrap()).is_err());
    }
}
