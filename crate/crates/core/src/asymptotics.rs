//! Degree analysis of polynomial tolls and the large-n scaling constants
//! `V'(f)`, `V_k(f)`, `Q_k` and `Q(f, α, β)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::rho;
use crate::toll::{Exponents, PolynomialToll};

/// Degree statistics of the maximal monomials of a toll.
///
/// Variables are grouped as `(t, n)`, `(l0, L0)` and `(l1, L1)`. When the
/// maximal monomials disagree on the per-group degrees, `uniform_flag` is
/// false and the group degrees are the largest seen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TollAnalysis {
    pub delta: u32,
    pub delta_n: u32,
    pub delta_d0: u32,
    pub delta_d1: u32,
    pub uniform_flag: bool,
    /// Every maximal monomial has positive degree in `(t, l0, l1)`.
    pub subtree_positive_flag: bool,
    pub v_prime: f64,
}

fn total_degree(e: &Exponents) -> u32 {
    e.iter().sum()
}

fn groups(e: &Exponents) -> (u32, u32, u32) {
    (e[0] + e[3], e[1] + e[4], e[2] + e[5])
}

fn subtree_degree(e: &Exponents) -> u32 {
    e[0] + e[1] + e[2]
}

pub fn analyze_toll(f: &PolynomialToll) -> Result<TollAnalysis> {
    if f.is_zero() {
        return Err(Error::ZeroToll);
    }
    let delta = f.terms().map(|(e, _)| total_degree(e)).max().expect("non-zero toll");
    let maximal: Vec<&Exponents> = f.terms().map(|(e, _)| e).filter(|e| total_degree(e) == delta).collect();
    let first = groups(maximal[0]);
    let uniform_flag = maximal.iter().all(|e| groups(e) == first);
    let subtree_positive_flag = maximal.iter().all(|e| subtree_degree(e) > 0);
    let max_group = |i: usize| maximal.iter().map(|e| [groups(e).0, groups(e).1, groups(e).2][i]).max().unwrap_or(0);
    let v_prime = if subtree_positive_flag { (2 * delta + 1) as f64 / 2.0 } else { (delta + 1) as f64 };
    Ok(TollAnalysis {
        delta,
        delta_n: max_group(0),
        delta_d0: max_group(1),
        delta_d1: max_group(2),
        uniform_flag,
        subtree_positive_flag,
        v_prime,
    })
}

impl TollAnalysis {
    /// `V_k(f)`: `((2δ+1)k − 1)/2`, or `(2(δ+1)k − 1)/2` when some maximal
    /// monomial has no subtree variable.
    pub fn v_k(&self, k: u32) -> f64 {
        let per = if self.subtree_positive_flag { 2 * self.delta + 1 } else { 2 * (self.delta + 1) };
        (per * k) as f64 / 2.0 - 0.5
    }

    fn require_uniform(&self) -> Result<()> {
        if !self.uniform_flag {
            return Err(Error::HypothesisViolated(
                "maximal monomials differ in their (t,n), (l0,L0) or (l1,L1) degrees".into(),
            ));
        }
        Ok(())
    }

    /// The `k`-independent base of `Q_k`, without the `√(ρ e^{-α/2})` prefactor.
    fn q_base(&self, alpha: f64, beta: f64) -> f64 {
        let r = rho(alpha, beta);
        let (d0, d1) = (self.delta_d0 as f64, self.delta_d1 as f64);
        let half = (-alpha / 2.0).exp();
        if self.subtree_positive_flag {
            (half + 1.0).powf(d0 - 1.0) * (-alpha / 4.0 * (2.0 * d0 - 1.0)).exp() * (-beta * d1).exp()
                / r.powf(2.0 * d0 + 2.0 * d1 - 1.0).sqrt()
        } else {
            (half + 1.0).powf(d0) * (-alpha * d0 / 2.0).exp() * (-beta * d1).exp() / r.powf(d0 + d1)
        }
    }

    /// `Q_k(f, δ_d0, δ_d1, α, β) = √(ρ e^{-α/2}) · base^k`.
    pub fn q_k(&self, k: u32, alpha: f64, beta: f64) -> f64 {
        let prefactor = (rho(alpha, beta) * (-alpha / 2.0).exp()).sqrt();
        prefactor * self.q_base(alpha, beta).powi(k as i32)
    }

    /// `Q(f, α, β)` in closed form.
    pub fn q_constant(&self, alpha: f64, beta: f64) -> Result<f64> {
        self.require_uniform()?;
        let power_of_two = 2f64.powi((self.delta_d0 + 2 * self.delta_d1) as i32);
        Ok(power_of_two * self.q_base(alpha, beta))
    }

    /// `Q` as the `k`-th root of `[Q_k(1;0,0)/Q_k(f;0,0)]·[Q_k(f;α,β)/Q_k(1;α,β)]`.
    pub fn q_from_q_k(&self, k: u32, alpha: f64, beta: f64) -> Result<f64> {
        self.require_uniform()?;
        let unit = constant_toll_analysis();
        let ratio = unit.q_k(k, 0.0, 0.0) / self.q_k(k, 0.0, 0.0) * self.q_k(k, alpha, beta) / unit.q_k(k, alpha, beta);
        Ok(ratio.powf(1.0 / k as f64))
    }
}

/// Analysis of the toll `f = 1`.
fn constant_toll_analysis() -> TollAnalysis {
    TollAnalysis {
        delta: 0,
        delta_n: 0,
        delta_d0: 0,
        delta_d1: 0,
        uniform_flag: true,
        subtree_positive_flag: false,
        v_prime: 1.0,
    }
}

pub fn v_k(analysis: &TollAnalysis, k: u32) -> f64 {
    analysis.v_k(k)
}

pub fn q_k(analysis: &TollAnalysis, k: u32, alpha: f64, beta: f64) -> f64 {
    analysis.q_k(k, alpha, beta)
}

pub fn q_constant(analysis: &TollAnalysis, alpha: f64, beta: f64) -> Result<f64> {
    analysis.q_constant(alpha, beta)
}

/// Predicted limit of `E_{(α,β,0)}[P^f(T_n)] / E_{(0,0,0)}[P^f(T_n)]`.
///
/// Passing from the distributional limit to the limit of means assumes
/// uniform integrability of `P^f/n^{V'(f)}`.
pub fn predict_mean_ratio(f: &PolynomialToll, alpha: f64, beta: f64) -> Result<f64> {
    analyze_toll(f)?.q_constant(alpha, beta)
}

/// The uniform-case limit law that `Q` rescales.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceLaw {
    /// A multiple of the Brownian excursion area `∫e`.
    Airy,
    /// The excursion double integral `∬(e(s) + e(t) − 2 min e)`.
    WienerExcursion,
    /// A deterministic limit after normalisation.
    Degenerate,
    /// Not identified for this toll.
    Unspecified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitPrediction {
    pub v_prime: f64,
    pub q: f64,
    pub reference: ReferenceLaw,
    pub analysis: TollAnalysis,
}

pub fn predict(f: &PolynomialToll, alpha: f64, beta: f64) -> Result<LimitPrediction> {
    let analysis = analyze_toll(f)?;
    let q = analysis.q_constant(alpha, beta)?;
    let reference = if !analysis.subtree_positive_flag {
        ReferenceLaw::Degenerate
    } else if analysis.delta == 1 {
        ReferenceLaw::Airy
    } else if analysis.delta == 2 && is_wiener_shaped(f) {
        ReferenceLaw::WienerExcursion
    } else {
        ReferenceLaw::Unspecified
    };
    Ok(LimitPrediction { v_prime: analysis.v_prime, q, reference, analysis })
}

/// Maximal monomials drawn from `t·n` and `t²` only, as in `(t+1)(n−t)`.
fn is_wiener_shaped(f: &PolynomialToll) -> bool {
    let tn: Exponents = [1, 0, 0, 1, 0, 0];
    let tt: Exponents = [2, 0, 0, 0, 0, 0];
    f.terms().filter(|(e, _)| total_degree(e) == 2).all(|(e, _)| *e == tn || *e == tt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analysis(src: &str) -> TollAnalysis {
        analyze_toll(&PolynomialToll::parse(src).unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn degree_examples() {
        let a = analysis("t+1");
        assert_eq!((a.delta, a.delta_n, a.delta_d0, a.delta_d1), (1, 1, 0, 0));
        assert!(a.subtree_positive_flag && a.uniform_flag);
        assert_eq!(a.v_prime, 1.5);

        let a = analysis("(t+1)*(n-t)");
        assert_eq!((a.delta, a.delta_n, a.delta_d0, a.delta_d1), (2, 2, 0, 0));
        assert!(a.subtree_positive_flag);
        assert_eq!(a.v_prime, 2.5);

        let a = analysis("n");
        assert!(!a.subtree_positive_flag);
        assert_eq!(a.v_prime, 2.0);

        let a = analysis("t*l0 + L1^2");
        assert!(!a.uniform_flag);
        assert!(matches!(a.q_constant(0.1, 0.2), Err(Error::HypothesisViolated(_))));
        assert!(analyze_toll(&PolynomialToll::zero()).is_err());
    }

    #[test]
    fn q_is_one_at_uniform_weights() {
        for src in ["t+1", "(t+1)*(n-t)", "l0", "l1", "n", "l0*L1^2 + t^3", "L0^2*L1", "t*l1^2*n"] {
            let a = analysis(src);
            if a.uniform_flag {
                assert!(close(a.q_constant(0.0, 0.0).unwrap(), 1.0, 1e-15), "{src}");
            }
        }
    }

    #[test]
    fn path_length_constant() {
        let a = analysis("t+1");
        let w = analysis("(t+1)*(n-t)");
        for i in 0..=10 {
            for j in 0..=10 {
                let (alpha, beta) = (-1.0 + 0.2 * i as f64, -1.0 + 0.2 * j as f64);
                let corollary =
                    rho(alpha, beta).sqrt() / (((-alpha / 2.0).exp() + 1.0) * (-alpha / 4.0).exp());
                assert!(close(a.q_constant(alpha, beta).unwrap(), corollary, 1e-12));
                assert!(close(w.q_constant(alpha, beta).unwrap(), corollary, 1e-12));
            }
        }
    }

    #[test]
    fn leaf_and_internal_constants() {
        let (alpha, beta) = (0.5, 1.0);
        let r = rho(alpha, beta);
        let lr = analysis("l0").q_constant(alpha, beta).unwrap();
        assert!(close(lr, 2.0 * (-alpha / 4.0).exp() / r.sqrt(), 1e-14));
        // Half of Q(l0) is the multiplier of the leaf-root corollary.
        assert!(close(lr / 2.0, (-alpha / 4.0).exp() / r.sqrt(), 1e-14));
        let ir = analysis("l1").q_constant(alpha, beta).unwrap();
        let corollary = (-beta).exp() / (r.sqrt() * (-alpha / 4.0).exp() * ((-alpha / 2.0).exp() + 1.0));
        assert!(close(ir / 4.0, corollary, 1e-14));
    }

    #[test]
    fn q_k_roots_are_k_independent() {
        for src in ["t+1", "(t+1)*(n-t)", "l0", "l1^2*n", "n", "L0*n + l0*t"] {
            let a = analysis(src);
            for (alpha, beta) in [(0.5, 1.0), (-0.7, 0.3), (1.0, -1.0)] {
                let q = a.q_constant(alpha, beta).unwrap();
                for k in 1..=3 {
                    assert!(close(a.q_from_q_k(k, alpha, beta).unwrap(), q, 1e-10), "{src} k={k}");
                }
            }
        }
    }

    #[test]
    fn v_k_identity() {
        for src in ["t+1", "(t+1)*(n-t)", "n", "l0^3*L1"] {
            let a = analysis(src);
            for k in 1..=5 {
                assert_eq!(a.v_k(k) + 0.5, a.v_prime * k as f64);
            }
        }
    }

    #[test]
    fn reference_laws() {
        let law = |s: &str| predict(&PolynomialToll::parse(s).unwrap(), 0.0, 0.0).unwrap().reference;
        assert_eq!(law("t+1"), ReferenceLaw::Airy);
        assert_eq!(law("l0"), ReferenceLaw::Airy);
        assert_eq!(law("(t+1)*(n-t)"), ReferenceLaw::WienerExcursion);
        assert_eq!(law("n"), ReferenceLaw::Degenerate);
        assert_eq!(law("t^3"), ReferenceLaw::Unspecified);
        assert_eq!(predict_mean_ratio(&PolynomialToll::parse("t+1").unwrap(), 0.0, 0.0).unwrap(), 1.0);
    }
}
