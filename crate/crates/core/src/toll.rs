//! Polynomial tolls `f(T_v, T)` in the subtree statistics `(t, l0, l1)` and the
//! whole-tree statistics `(n, L0, L1)`, with a small expression parser.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tree::TreeStats;

/// Variable names in exponent-vector order.
pub const VARIABLES: [&str; 6] = ["t", "l0", "l1", "n", "L0", "L1"];

/// Exponents of `t, l0, l1, n, L0, L1`.
pub type Exponents = [u32; 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithmeticMode {
    /// Rational coefficients; evaluation is exact.
    Exact,
    /// Coefficients were supplied as doubles; evaluation is in `f64`.
    Float,
}

/// A polynomial toll in reduced form: distinct monomials, no zero coefficients.
#[derive(Clone, PartialEq)]
pub struct PolynomialToll {
    terms: BTreeMap<Exponents, BigRational>,
    mode: ArithmeticMode,
}

impl PolynomialToll {
    pub fn zero() -> Self {
        PolynomialToll { terms: BTreeMap::new(), mode: ArithmeticMode::Exact }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_terms([(c, [0; 6])])
    }

    /// The single variable with the given index into [`VARIABLES`].
    pub fn variable(index: usize) -> Self {
        let mut e = [0; 6];
        e[index] = 1;
        Self::from_terms([(BigRational::one(), e)])
    }

    /// Builds an exact toll, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (BigRational, Exponents)>>(terms: I) -> Self {
        let mut out = PolynomialToll::zero();
        for (c, e) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Builds a toll whose coefficients are doubles; evaluation switches to `f64`.
    pub fn from_f64_terms<I: IntoIterator<Item = (f64, Exponents)>>(terms: I) -> Result<Self> {
        let mut out = PolynomialToll::zero();
        for (c, e) in terms {
            let c = BigRational::from_float(c).ok_or_else(|| Error::param("toll coefficients must be finite"))?;
            out.add_term(e, c);
        }
        out.mode = ArithmeticMode::Float;
        Ok(out)
    }

    /// Parses expressions such as `"(t+1)*(n-t)"` or `"3/2*l0^2 + L1"`.
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens: &tokens, pos: 0, len: src.chars().count() };
        let poly = p.expr()?;
        if let Some(tok) = p.tokens.get(p.pos) {
            return Err(Error::Toll { column: tok.column, reason: "unexpected trailing input".into() });
        }
        Ok(poly)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn combine_mode(&self, other: &Self) -> ArithmeticMode {
        if self.mode == ArithmeticMode::Float || other.mode == ArithmeticMode::Float {
            ArithmeticMode::Float
        } else {
            ArithmeticMode::Exact
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out.mode = self.combine_mode(other);
        out
    }

    pub fn neg(&self) -> Self {
        PolynomialToll {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            mode: self.mode,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = PolynomialToll::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                out.add_term(e, ca * cb);
            }
        }
        out.mode = self.combine_mode(other);
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = PolynomialToll::constant(BigRational::one());
        out.mode = self.mode;
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates `Σ_v f(T_v, T)` exactly from extended subtree stats and the whole-tree stats.
    ///
    /// The sum factorises per monomial into a whole-tree factor times a sum of
    /// subtree factors, so each distinct `(t, l0, l1)` exponent triple is summed once.
    pub fn eval_exact_on(&self, subtrees: &[TreeStats], whole: &TreeStats) -> BigRational {
        let mut local_cache: BTreeMap<[u32; 3], BigUint> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let local = [e[0], e[1], e[2]];
            let sum = local_cache.entry(local).or_insert_with(|| local_sum_exact(subtrees, local)).clone();
            let global = BigUint::from(whole.edges).pow(e[3])
                * BigUint::from(whole.leaves).pow(e[4])
                * BigUint::from(whole.internal).pow(e[5]);
            let factor = BigInt::from(sum * global);
            total += c * BigRational::from_integer(factor);
        }
        total
    }

    /// Double-precision counterpart of [`eval_exact_on`](Self::eval_exact_on).
    pub fn eval_f64_on(&self, subtrees: &[TreeStats], whole: &TreeStats) -> f64 {
        let mut total = 0.0;
        let mut last_local: Option<([u32; 3], f64)> = None;
        for (e, c) in &self.terms {
            let local = [e[0], e[1], e[2]];
            let sum = match last_local {
                Some((l, s)) if l == local => s,
                _ => {
                    let s = subtrees
                        .iter()
                        .map(|st| {
                            powu(st.edges as f64, local[0])
                                * powu(st.leaves as f64, local[1])
                                * powu(st.internal as f64, local[2])
                        })
                        .sum();
                    last_local = Some((local, s));
                    s
                }
            };
            let global = powu(whole.edges as f64, e[3])
                * powu(whole.leaves as f64, e[4])
                * powu(whole.internal as f64, e[5]);
            total += c.to_f64().unwrap_or(f64::NAN) * global * sum;
        }
        total
    }
}

fn powu(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

fn local_sum_exact(subtrees: &[TreeStats], e: [u32; 3]) -> BigUint {
    let fast = subtrees.iter().try_fold(0u128, |acc, st| {
        let a = (st.edges as u128).checked_pow(e[0])?;
        let b = (st.leaves as u128).checked_pow(e[1])?;
        let c = (st.internal as u128).checked_pow(e[2])?;
        acc.checked_add(a.checked_mul(b)?.checked_mul(c)?)
    });
    match fast {
        Some(v) => BigUint::from(v),
        None => subtrees
            .iter()
            .map(|st| {
                BigUint::from(st.edges).pow(e[0]) * BigUint::from(st.leaves).pow(e[1]) * BigUint::from(st.internal).pow(e[2])
            })
            .sum(),
    }
}

impl fmt::Display for PolynomialToll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest total degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse(e.iter().sum::<u32>()));
        for (i, (e, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e
                .iter()
                .zip(VARIABLES)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolynomialToll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialToll({self})")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let column = i + 1;
        let ch = chars[i];
        let simple = match ch {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, column });
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let mut value = parse_decimal(&chars[start..i].iter().collect::<String>(), column)?;
            if i < chars.len() && chars[i] == '/' {
                let dstart = i + 1;
                let mut j = dstart;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == dstart {
                    return Err(Error::Toll { column: i + 1, reason: "expected an integer denominator after '/'".into() });
                }
                let den: BigInt = chars[dstart..j].iter().collect::<String>().parse().expect("digits");
                if den.is_zero() {
                    return Err(Error::Toll { column: dstart + 1, reason: "zero denominator".into() });
                }
                value /= BigRational::from_integer(den);
                i = j;
            }
            out.push(Token { tok: Tok::Num(value), column });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            match VARIABLES.iter().position(|v| *v == name) {
                Some(idx) => out.push(Token { tok: Tok::Var(idx), column }),
                None => {
                    return Err(Error::Toll {
                        column,
                        reason: format!("unknown variable '{name}' (expected one of t, l0, l1, n, L0, L1)"),
                    })
                }
            }
            continue;
        }
        return Err(Error::Toll { column, reason: format!("unexpected character '{ch}'") });
    }
    Ok(out)
}

fn parse_decimal(s: &str, column: usize) -> Result<BigRational> {
    let bad = || Error::Toll { column, reason: format!("malformed number '{s}'") };
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if int.is_empty() || frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(BigRational::new(num, den))
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len + 1, |t| t.column)
    }

    fn err<T>(&self, reason: &str) -> Result<T> {
        Err(Error::Toll { column: self.column(), reason: reason.into() })
    }

    fn expr(&mut self) -> Result<PolynomialToll> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolynomialToll> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolynomialToll> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if let Some(Tok::Caret) = self.peek() {
                    self.pos += 1;
                    let exp = match self.peek() {
                        Some(Tok::Num(v)) if v.is_integer() => v.to_integer().to_u32(),
                        _ => None,
                    };
                    match exp {
                        Some(k) => {
                            self.pos += 1;
                            Ok(base.pow(k))
                        }
                        None => self.err("expected a non-negative integer exponent after '^'"),
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<PolynomialToll> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(PolynomialToll::constant(v))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(PolynomialToll::variable(i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, a variable or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_wiener_toll() {
        let f = PolynomialToll::parse("(t+1)*(n-t)").unwrap();
        // t*n - t^2 + n - t
        assert_eq!(f.len(), 4);
        let e = |t, n| [t, 0, 0, n, 0, 0];
        let got: BTreeMap<_, _> = f.terms().map(|(e, c)| (*e, c.clone())).collect();
        assert_eq!(got[&e(1, 1)], q(1, 1));
        assert_eq!(got[&e(2, 0)], q(-1, 1));
        assert_eq!(got[&e(0, 1)], q(1, 1));
        assert_eq!(got[&e(1, 0)], q(-1, 1));
        assert_eq!(f.mode(), ArithmeticMode::Exact);
    }

    #[test]
    fn parses_rationals_powers_and_unicode_operators() {
        let f = PolynomialToll::parse("3/2 * l0^2 − 0.25·L1 + 0").unwrap();
        let got: BTreeMap<_, _> = f.terms().map(|(e, c)| (*e, c.clone())).collect();
        assert_eq!(got[&[0, 2, 0, 0, 0, 0]], q(3, 2));
        assert_eq!(got[&[0, 0, 0, 0, 0, 1]], q(-1, 4));
        assert_eq!(got.len(), 2);
        assert!(PolynomialToll::parse("t - t").unwrap().is_zero());
        assert_eq!(PolynomialToll::parse("-(t+1)^2").unwrap().to_string(), "-t^2 - 2*t - 1");
    }

    #[test]
    fn reports_columns() {
        let col = |s: &str| match PolynomialToll::parse(s) {
            Err(Error::Toll { column, .. }) => column,
            other => panic!("{other:?}"),
        };
        assert_eq!(col("t + x"), 5);
        assert_eq!(col("(t+1"), 5);
        assert_eq!(col("t^n"), 3);
        assert_eq!(col("1/0"), 3);
        assert_eq!(col("t $"), 3);
        assert_eq!(col("t t"), 3);
    }

    #[test]
    fn float_mode_is_sticky() {
        let f = PolynomialToll::from_f64_terms([(0.5, [1, 0, 0, 0, 0, 0])]).unwrap();
        let g = PolynomialToll::parse("n").unwrap();
        assert_eq!(f.mul(&g).mode(), ArithmeticMode::Float);
        assert_eq!(g.mul(&g).mode(), ArithmeticMode::Exact);
    }
}
