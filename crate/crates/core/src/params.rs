//! Deformation parameters (q, r), the derived constants d, Q, a, a^{1/2},
//! and the precision policy shared by every other module.

use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{pow10, Prec, Real, Scalar};

/// A ± label. Used for the root branch of `a`, for R^±, G_±, F_± and for
/// the sign of the dotted/undotted cross relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!("not a sign: {other:?}"))),
        }
    }
}

/// A real parameter given as text: an integer, a decimal or a ratio `n/m`.
/// Keeping the text lets `1/3` be rounded once at whatever precision is in use.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ParamValue(String);

impl ParamValue {
    pub fn to_real(&self, prec: Prec) -> Real {
        let parse = |t: &str| {
            let v = Float::parse(t.trim()).expect("validated at construction");
            Float::with_val(prec.bits(), v)
        };
        match self.0.split_once('/') {
            Some((n, d)) => parse(n) / parse(d),
            None => parse(&self.0),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for ParamValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let ok = |t: &str| Float::parse(t.trim()).is_ok();
        let valid = match s.split_once('/') {
            Some((n, d)) => ok(n) && ok(d) && Float::with_val(64, Float::parse(d.trim()).unwrap()) != 0,
            None => ok(s),
        };
        if valid && !s.trim().is_empty() {
            Ok(ParamValue(s.trim().to_string()))
        } else {
            Err(Error::InvalidParameter(format!("not a number or ratio: {s:?}")))
        }
    }
}

impl TryFrom<String> for ParamValue {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ParamValue> for String {
    fn from(v: ParamValue) -> String {
        v.0
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue(v.to_string())
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue(format!("{v:?}"))
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        v.parse().unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Minimum number of decimal digits accepted.
pub const MIN_DIGITS: u32 = 30;

/// Deformation parameters and everything derived from them.
#[derive(Clone, Debug)]
pub struct ParameterSet {
    pub q_text: ParamValue,
    pub r_text: ParamValue,
    pub branch: Sign,
    pub digits: u32,
    pub prec: Prec,
    pub q: Real,
    pub r: Real,
    pub d: Real,
    /// Q = a + a⁻¹ = −ε_{αβ}ε^{αβ}.
    pub big_q: Real,
    pub a: Real,
    pub sqrt_a: Real,
    pub tolerance: Real,
}

/// Build a parameter set. `branch` picks the root a = (Q ± √(Q²−4))/2.
pub fn make_params(
    q: impl Into<ParamValue>,
    r: impl Into<ParamValue>,
    branch: Sign,
    digits: u32,
) -> Result<ParameterSet> {
    let (q_text, r_text) = (q.into(), r.into());
    if digits < MIN_DIGITS {
        return Err(Error::InvalidParameter(format!("precision {digits} < {MIN_DIGITS} digits")));
    }
    let prec = Prec::from_digits(digits);
    let bits = prec.bits();
    let qv = q_text.to_real(prec);
    let rv = r_text.to_real(prec);
    if qv <= 0 {
        return Err(Error::InvalidParameter(format!("q = {q_text} must be positive")));
    }
    let d = Float::with_val(bits, 1) - Float::with_val(bits, rv.clone().square());
    if d.is_zero() {
        return Err(Error::DegenerateParameter { r: r_text.to_string() });
    }
    let two_r2 = Float::with_val(bits, rv.clone().square()) * 2u32;
    let q_inv = Float::with_val(bits, qv.clone().recip());
    let big_q = (two_r2 + &qv + q_inv) / &d;
    if big_q < 2 {
        return Err(Error::SubcriticalQ { q_big: big_q.to_string_radix(10, Some(12)) });
    }
    let disc = Float::with_val(bits, big_q.clone().square() - 4u32).sqrt();
    let a = match branch {
        Sign::Plus => Float::with_val(bits, &big_q + &disc) / 2u32,
        Sign::Minus => Float::with_val(bits, &big_q - &disc) / 2u32,
    };
    let sqrt_a = Float::with_val(bits, a.sqrt_ref());
    let tolerance = pow10(prec, -(digits as i32) / 2);
    let p = ParameterSet { q_text, r_text, branch, digits, prec, q: qv, r: rv, d, big_q, a, sqrt_a, tolerance };
    p.check_invariants()?;
    Ok(p)
}

impl ParameterSet {
    /// Override the residual acceptance threshold.
    pub fn with_tolerance(mut self, tol: Real) -> Self {
        self.tolerance = Float::with_val(self.prec.bits(), tol);
        self
    }

    pub fn with_tolerance_exp(self, exp: i32) -> Self {
        let t = pow10(self.prec, exp);
        self.with_tolerance(t)
    }

    fn check_invariants(&self) -> Result<()> {
        let bits = self.prec.bits();
        let inv = Float::with_val(bits, self.a.clone().recip());
        let r1 = Float::with_val(bits, &self.a + &inv) - &self.big_q;
        let r2 = Float::with_val(bits, self.sqrt_a.clone().square()) - &self.a;
        for (id, res) in [("a-plus-inverse-is-q", r1), ("sqrt-a-squared", r2)] {
            if res.clone().abs() > self.tolerance {
                return Err(Error::ConstructionIdentityFailure {
                    id: id.into(),
                    residual: res.to_string_radix(10, Some(3)),
                    tolerance: self.tolerance.to_string_radix(10, Some(3)),
                });
            }
        }
        Ok(())
    }

    pub fn is_classical(&self) -> bool {
        self.q == 1 && self.r.is_zero()
    }

    pub fn real(&self, x: i64) -> Real {
        Float::with_val(self.prec.bits(), x)
    }

    pub fn scalar(&self, x: i64) -> Scalar {
        Scalar::from_int(self.prec, x)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.prec)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.prec)
    }

    /// a^{k/2}.
    pub fn a_half_pow(&self, k: i32) -> Real {
        let bits = self.prec.bits();
        let base = if k >= 0 { self.sqrt_a.clone() } else { Float::with_val(bits, self.sqrt_a.clone().recip()) };
        let mut out = Float::with_val(bits, 1);
        for _ in 0..k.unsigned_abs() {
            out *= &base;
        }
        out
    }

    /// Threshold below which a pivot counts as zero.
    pub fn pivot_threshold(&self) -> Real {
        pow10(self.prec, -(2 * self.digits as i32) / 3)
    }

    /// Coefficients smaller than this are dropped from algebra elements.
    pub fn drop_threshold(&self) -> Real {
        Float::with_val(self.prec.bits(), self.tolerance.clone().square())
    }

    /// Short label such as `q=2,r=1/3,+`.
    pub fn label(&self) -> String {
        format!("q={},r={},{}", self.q_text, self.r_text, self.branch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_point() {
        let p = make_params(1, 0, Sign::Plus, 60).unwrap();
        assert_eq!(p.d, 1);
        assert_eq!(p.big_q, 2);
        assert_eq!(p.a, 1);
        assert_eq!(p.sqrt_a, 1);
        let m = make_params(1, 0, Sign::Minus, 60).unwrap();
        assert_eq!(m.a, 1);
    }

    #[test]
    fn degenerate_r() {
        assert!(matches!(make_params(1, 1, Sign::Plus, 60), Err(Error::DegenerateParameter { .. })));
        assert!(matches!(make_params(1, -1, Sign::Plus, 60), Err(Error::DegenerateParameter { .. })));
    }

    #[test]
    fn large_r_is_subcritical() {
        assert!(matches!(make_params(1, 2, Sign::Plus, 60), Err(Error::SubcriticalQ { .. })));
    }

    #[test]
    fn low_precision_rejected() {
        assert!(matches!(make_params(1, 0, Sign::Plus, 10), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn ratio_text_round_trips() {
        let v: ParamValue = "1/3".parse().unwrap();
        let p = Prec::from_digits(60);
        let x = v.to_real(p) * 3u32;
        assert!((x - 1u32).abs() < pow10(p, -59));
        assert!("1/0".parse::<ParamValue>().is_err());
        assert!("abc".parse::<ParamValue>().is_err());
    }

    #[test]
    fn half_powers() {
        let p = make_params(2, 0, Sign::Plus, 60).unwrap();
        let a32 = p.a_half_pow(3);
        let back = a32 * p.a_half_pow(-3);
        assert!((back - 1u32).abs() < p.tolerance);
    }
}
