//! Complex scalars at a fixed binary precision, backed by MPFR floats.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::ops::Pow;
use rug::Float;

/// Working precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prec(u32);

/// Guard bits added on top of the requested decimal digits.
const GUARD_BITS: u32 = 64;

impl Prec {
    pub fn from_digits(digits: u32) -> Self {
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32;
        Prec(bits + GUARD_BITS)
    }

    pub fn bits(self) -> u32 {
        self.0
    }
}

/// Real scalar type.
pub type Real = Float;

pub fn real(prec: Prec, x: f64) -> Real {
    Float::with_val(prec.0, x)
}

/// `num/den` rounded once at the working precision.
pub fn ratio(prec: Prec, num: i64, den: i64) -> Real {
    Float::with_val(prec.0, num) / Float::with_val(prec.0, den)
}

/// `10^exp` at the working precision.
pub fn pow10(prec: Prec, exp: i32) -> Real {
    Float::with_val(prec.0, 10).pow(exp)
}

/// Complex number as a pair of MPFR floats sharing one precision.
#[derive(Clone, PartialEq)]
pub struct Scalar {
    re: Float,
    im: Float,
}

impl Scalar {
    pub fn zero(prec: Prec) -> Self {
        Scalar { re: Float::new(prec.0), im: Float::new(prec.0) }
    }

    pub fn one(prec: Prec) -> Self {
        Scalar::from_real(Float::with_val(prec.0, 1))
    }

    pub fn i(prec: Prec) -> Self {
        Scalar { re: Float::new(prec.0), im: Float::with_val(prec.0, 1) }
    }

    pub fn from_f64(prec: Prec, x: f64) -> Self {
        Scalar::from_real(Float::with_val(prec.0, x))
    }

    pub fn from_int(prec: Prec, x: i64) -> Self {
        Scalar::from_real(Float::with_val(prec.0, x))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Scalar { re, im }
    }

    pub fn new(re: Float, im: Float) -> Self {
        Scalar { re, im }
    }

    pub fn prec(&self) -> Prec {
        Prec(self.re.prec())
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    /// Modulus |z|.
    pub fn abs(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True when |z| ≤ tol.
    pub fn within(&self, tol: &Float) -> bool {
        self.abs() <= *tol
    }

    /// Multiply by a real scalar.
    pub fn scale(&self, k: &Float) -> Self {
        let p = self.re.prec();
        Scalar { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    /// Multiply by i.
    pub fn times_i(&self) -> Self {
        let p = self.re.prec();
        Scalar { re: Float::with_val(p, -&self.im), im: self.re.clone() }
    }

    /// `self += a * b` without intermediate allocation of the product.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// `self -= a * b`.
    pub fn sub_mul(&mut self, a: &Scalar, b: &Scalar) {
        self.re -= &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im -= &a.re * &b.im;
        self.im -= &a.im * &b.re;
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.re.prec();
        if self.im.is_zero() && self.re >= 0 {
            return Scalar::from_real(Float::with_val(p, self.re.sqrt_ref()));
        }
        let m = self.abs();
        let re = Float::with_val(p, (Float::with_val(p, &m + &self.re) / 2u32).sqrt());
        let mut im = Float::with_val(p, (Float::with_val(p, &m - &self.re) / 2u32).sqrt());
        if self.im < 0 {
            im = -im;
        }
        Scalar { re, im }
    }

    pub fn recip(&self) -> Self {
        let p = self.re.prec();
        let n = Float::with_val(p, self.re.clone().square() + self.im.clone().square());
        Scalar { re: Float::with_val(p, &self.re / &n), im: Float::with_val(p, -(Float::with_val(p, &self.im / &n))) }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        let re = self.re.to_string_radix(10, Some(digits));
        if self.im.is_zero() {
            return write!(f, "{re}");
        }
        let im = Float::with_val(self.im.prec(), self.im.abs_ref()).to_string_radix(10, Some(digits));
        let sign = if self.im < 0 { '-' } else { '+' };
        write!(f, "{re}{sign}{im}i")
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let p = self.re.prec();
        Scalar { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let p = self.re.prec();
        Scalar { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut out = Scalar::zero(self.prec());
        out.add_mul(self, o);
        out
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.recip()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let p = self.re.prec();
        Scalar { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self -= &o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

/// Short human-readable magnitude, e.g. `3.1e-62`.
pub fn sci(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(2));
    // MPFR renders as `d.de±x`; normalise to a compact form.
    match s.split_once('e') {
        Some((m, e)) => format!("{m}e{}", e.trim_start_matches('+')),
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_of_i() {
        let p = Prec::from_digits(60);
        let z = Scalar::i(p).conj();
        assert_eq!(z, -Scalar::i(p));
    }

    #[test]
    fn sqrt_four() {
        let p = Prec::from_digits(60);
        let two = Scalar::from_int(p, 4).sqrt();
        assert_eq!(two, Scalar::from_int(p, 2));
    }

    #[test]
    fn sqrt_two_squares_back() {
        let p = Prec::from_digits(60);
        let s = Scalar::from_int(p, 2).sqrt();
        let back = &s * &s - Scalar::from_int(p, 2);
        assert!(back.within(&pow10(p, -55)));
        assert!(s.re().to_string_radix(10, Some(12)).starts_with("1.41421356237"));
    }

    #[test]
    fn complex_sqrt_and_division() {
        let p = Prec::from_digits(40);
        let z = Scalar::new(real(p, -3.0), real(p, 4.0));
        let w = z.sqrt();
        assert!((&w * &w - &z).within(&pow10(p, -35)));
        let q = &z / &w;
        assert!((&q - &w).within(&pow10(p, -35)));
    }

    #[test]
    fn add_mul_matches_product() {
        let p = Prec::from_digits(40);
        let a = Scalar::new(real(p, 1.5), real(p, -2.0));
        let b = Scalar::new(real(p, 0.25), real(p, 3.0));
        let mut acc = Scalar::one(p);
        acc.add_mul(&a, &b);
        assert_eq!(acc, Scalar::one(p) + &a * &b);
    }
}
