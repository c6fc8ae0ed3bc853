//! Small numeric helpers shared by the exact and Monte Carlo paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn rational_pow(x: &BigRational, k: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= x;
    }
    out
}

/// `x` as an exact rational; fails on non-finite input.
pub fn exact_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numerator or denominator overflow f64.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let num = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

pub fn rational_from_int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Decimal scientific rendering of `exp(ln_value)`, which may be far outside `f64` range.
pub fn format_from_ln(ln_value: f64) -> String {
    if ln_value == f64::NEG_INFINITY {
        return "0".into();
    }
    if !ln_value.is_finite() {
        return format!("{}", ln_value.exp());
    }
    let log10 = ln_value / std::f64::consts::LN_10;
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    if mantissa >= 9.999_999_999_999_5 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    format!("{mantissa:.12}e{exponent}")
}

pub fn is_zero_rational(x: &BigRational) -> bool {
    x.is_zero()
}
