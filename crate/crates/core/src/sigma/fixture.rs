//! The displayed metric matrices, stored as shorthand expressions and
//! compared entry by entry against the traced metric.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ParameterSet, Sign};
use crate::scalar::{sci, Scalar};
use crate::tensor::Tensor;

/// The fixture shipped with the crate.
pub const DEFAULT_FIXTURE: &str = include_str!("../../fixtures/metric_display.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricFixture {
    pub description: String,
    /// Upper-metric entries that must agree with the trace definition.
    pub required: Vec<[usize; 2]>,
    pub upper: [[String; 4]; 4],
    pub lower: [[String; 4]; 4],
}

impl MetricFixture {
    pub fn builtin() -> Self {
        serde_json::from_str(DEFAULT_FIXTURE).expect("bundled fixture parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let fx: MetricFixture =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        // Parse every entry up front so a bad file is a config error, not a failed record.
        for e in fx.upper.iter().chain(fx.lower.iter()).flatten() {
            Expr::parse(e)?;
        }
        Ok(fx)
    }
}

/// Values of the shorthand symbols at one point and sign.
pub fn shorthands(p: &ParameterSet, s: Sign) -> BTreeMap<&'static str, Scalar> {
    let bits = p.prec.bits();
    let k = s.value();
    let re = |x: rug::Float| Scalar::from_real(x);
    let qh = rug::Float::with_val(bits, p.q.sqrt_ref());
    let qh = rug::Float::with_val(bits, &qh + rug::Float::with_val(bits, qh.clone().recip()));
    let q_inv = rug::Float::with_val(bits, p.q.clone().recip());
    let qm = rug::Float::with_val(bits, &p.q - &q_inv) / &p.big_q;
    BTreeMap::from([
        ("A1", re(p.a_half_pow(-3 * k))),
        ("A2", re(p.a_half_pow(k))),
        ("A3", re(p.a_half_pow(-k))),
        ("A4", re(p.a_half_pow(3 * k))),
        ("Qh", re(qh)),
        ("Qm", re(qm)),
        ("Q", re(p.big_q.clone())),
        ("q", re(p.q.clone())),
        ("r", re(p.r.clone())),
        ("d", re(p.d.clone())),
        ("a", re(p.a.clone())),
        ("i", Scalar::i(p.prec)),
    ])
}

/// Arithmetic expression over named complex symbols: + − * / ^n and parentheses.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(String),
    Sym(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Config(format!("fixture expression {:?}: {what} at {}", String::from_utf8_lossy(self.src), self.pos))
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Bin(c as char, Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Bin(c as char, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = self.peek() == Some(b'-');
            if neg {
                self.pos += 1;
            }
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let n: i32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| self.err("integer exponent expected"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit() || *c == b'.') {
                    self.pos += 1;
                }
                Ok(Expr::Num(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                    self.pos += 1;
                }
                Ok(Expr::Sym(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            _ => Err(self.err("operand expected")),
        }
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.sum()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, env: &BTreeMap<&str, Scalar>, p: &ParameterSet) -> Result<Scalar> {
        Ok(match self {
            Expr::Num(t) => {
                let v = rug::Float::parse(t).map_err(|e| Error::Config(format!("bad number {t:?}: {e}")))?;
                Scalar::from_real(rug::Float::with_val(p.prec.bits(), v))
            }
            Expr::Sym(name) => env
                .get(name.as_str())
                .cloned()
                .ok_or_else(|| Error::Config(format!("unknown fixture symbol {name:?}")))?,
            Expr::Neg(e) => -e.eval(env, p)?,
            Expr::Bin(op, l, r) => {
                let (l, r) = (l.eval(env, p)?, r.eval(env, p)?);
                match op {
                    '+' => l + r,
                    '-' => l - r,
                    '*' => l * r,
                    _ => l / r,
                }
            }
            Expr::Pow(b, n) => {
                let b = b.eval(env, p)?;
                let b = if *n < 0 { b.recip() } else { b };
                let mut acc = Scalar::one(p.prec);
                for _ in 0..n.unsigned_abs() {
                    acc *= &b;
                }
                acc
            }
        })
    }
}

/// One compared matrix entry.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureEntry {
    pub matrix: &'static str,
    pub sign: Sign,
    pub row: usize,
    pub col: usize,
    pub expression: String,
    pub displayed: String,
    pub computed: String,
    pub residual: String,
    pub matches: bool,
    pub required: bool,
}

/// Compare both displayed matrices for one sign against the computed ones.
pub fn compare(
    p: &ParameterSet,
    fx: &MetricFixture,
    s: Sign,
    upper: &Tensor,
    lower: &Tensor,
) -> Result<Vec<FixtureEntry>> {
    let env = shorthands(p, s);
    let mut out = Vec::with_capacity(32);
    for (name, table, computed) in [("upper", &fx.upper, upper), ("lower", &fx.lower, lower)] {
        for (row, line) in table.iter().enumerate() {
            for (col, text) in line.iter().enumerate() {
                let shown = Expr::parse(text)?.eval(&env, p)?;
                let got = computed.get(&[row, col]);
                let res = (&shown - got).abs();
                out.push(FixtureEntry {
                    matrix: name,
                    sign: s,
                    row,
                    col,
                    expression: text.clone(),
                    displayed: format!("{shown:.20}"),
                    computed: format!("{got:.20}"),
                    residual: sci(&res),
                    matches: res <= p.tolerance,
                    required: name == "upper" && fx.required.contains(&[row, col]),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;

    #[test]
    fn parses_and_evaluates() {
        let p = make_params(2, 0, Sign::Plus, 40).unwrap();
        let env = shorthands(&p, Sign::Plus);
        let v = Expr::parse("-(2+1)^2/4*i").unwrap().eval(&env, &p).unwrap();
        assert!((v - Scalar::i(p.prec).scale(&p.real(-9)).scale(&crate::scalar::ratio(p.prec, 1, 4)))
            .within(&p.tolerance));
        let half = Expr::parse("Q^-1").unwrap().eval(&env, &p).unwrap();
        assert!((half * Scalar::from_real(p.big_q.clone()) - p.one()).within(&p.tolerance));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Expr::parse("2*").is_err());
        assert!(Expr::parse("(A1").is_err());
        assert!(Expr::parse("A1 A2").is_err());
    }

    #[test]
    fn builtin_fixture_parses() {
        let fx = MetricFixture::builtin();
        for e in fx.upper.iter().chain(fx.lower.iter()).flatten() {
            Expr::parse(e).unwrap();
        }
    }
}
