//! Extended-precision scalars.
//!
//! [`PrecisionContext`] fixes a working precision in decimal digits; every
//! extended-precision routine takes one explicitly. [`BigComplex`] is a plain
//! rectangular complex number over MPFR floats. Binary operations produce a
//! result at the larger of the two operand precisions, so constants built at
//! low precision (exact small integers) mix freely with working values.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision, in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    /// Binary64-equivalent precision.
    pub const STANDARD: PrecisionContext = PrecisionContext { digits: 16 };
    /// Default precision for the confluent predictor path.
    pub const EXTENDED: PrecisionContext = PrecisionContext { digits: 60 };

    pub fn new(digits: u32) -> Result<Self> {
        if digits < 16 {
            return Err(Error::InvalidInput(format!(
                "precision must be at least 16 digits, got {digits}"
            )));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Working epsilon `10^(1-D)`.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(1 - self.digits as i32)
    }

    /// Mantissa bits, including 24 guard bits.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + 24
    }

    pub fn is_extended(&self) -> bool {
        self.digits >= 60
    }

    pub fn float(&self, x: f64) -> Float {
        Float::with_val(self.bits(), x)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn complex(&self, re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(self.bits(), re, im)
    }

    pub fn from_c64(&self, z: Complex64) -> BigComplex {
        BigComplex::from_f64(self.bits(), z.re, z.im)
    }

    pub fn zero(&self) -> BigComplex {
        self.complex(0.0, 0.0)
    }

    pub fn one(&self) -> BigComplex {
        self.complex(1.0, 0.0)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Complex number with MPFR components.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.20e} {:+.20e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec().max(k.prec());
        Self {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        Self {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -(&self.im / n)),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Complex exponential.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self {
            re: Float::with_val(p, &r * &c),
            im: Float::with_val(p, &r * &s),
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, self.abs().ln_ref());
        Self { re, im: self.arg() }
    }

    /// Principal power `self^w = exp(w ln self)`.
    pub fn powc(&self, w: &BigComplex) -> Self {
        (w * &self.ln()).exp()
    }

    /// `x^self` for real positive `x` given through `ln x`.
    pub fn exp_base(&self, ln_x: &Float) -> Self {
        self.scale(ln_x).exp()
    }

    pub fn sin(&self) -> Self {
        // sin(a+ib) = sin a cosh b + i cos a sinh b
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        Self {
            re: Float::with_val(p, &s * &ch),
            im: Float::with_val(p, &c * &sh),
        }
    }

    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        let p = self.prec();
        if r.is_zero() {
            return self.clone();
        }
        // principal branch
        let mut a = Float::with_val(p, &r + &self.re);
        a /= 2;
        let a = a.sqrt();
        let mut b = Float::with_val(p, &r - &self.re);
        b /= 2;
        let mut b = b.sqrt();
        if self.im.is_sign_negative() {
            b = -b;
        }
        Self { re: a, im: b }
    }
}

impl From<&BigComplex> for Complex64 {
    fn from(z: &BigComplex) -> Self {
        z.to_c64()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'b BigComplex) -> BigComplex {
                let f: fn(&BigComplex, &BigComplex) -> BigComplex = $body;
                f(self, rhs)
            }
        }
        impl $trait<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'b BigComplex) -> BigComplex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let p = a.prec().max(b.prec());
    BigComplex {
        re: Float::with_val(p, &a.re + &b.re),
        im: Float::with_val(p, &a.im + &b.im),
    }
});

binop!(Sub, sub, |a, b| {
    let p = a.prec().max(b.prec());
    BigComplex {
        re: Float::with_val(p, &a.re - &b.re),
        im: Float::with_val(p, &a.im - &b.im),
    }
});

binop!(Mul, mul, |a, b| {
    let p = a.prec().max(b.prec());
    let mut re = Float::with_val(p, &a.re * &b.re);
    re -= &a.im * &b.im;
    let mut im = Float::with_val(p, &a.re * &b.im);
    im += &a.im * &b.re;
    BigComplex { re, im }
});

binop!(Div, div, |a, b| {
    let p = a.prec().max(b.prec());
    let n = Float::with_val(p, b.norm_sqr());
    let mut re = Float::with_val(p, &a.re * &b.re);
    re += &a.im * &b.im;
    let mut im = Float::with_val(p, &a.im * &b.re);
    im -= &a.re * &b.im;
    re /= &n;
    im /= &n;
    BigComplex { re, im }
});

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -(self.clone())
    }
}

impl Add<f64> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: f64) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.prec(), &self.re + rhs),
            im: self.im.clone(),
        }
    }
}

impl Add<f64> for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: f64) -> BigComplex {
        (&self) + rhs
    }
}

impl Sub<f64> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: f64) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.prec(), &self.re - rhs),
            im: self.im.clone(),
        }
    }
}

impl Sub<f64> for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: f64) -> BigComplex {
        (&self) - rhs
    }
}

impl Mul<f64> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: f64) -> BigComplex {
        self.scale_f64(rhs)
    }
}

impl Mul<f64> for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: f64) -> BigComplex {
        self.scale_f64(rhs)
    }
}

impl Div<f64> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: f64) -> BigComplex {
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re / rhs),
            im: Float::with_val(p, &self.im / rhs),
        }
    }
}

impl Div<f64> for BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: f64) -> BigComplex {
        (&self) / rhs
    }
}

/// Product of a sequence, multiplied left to right.
pub fn product<'a, I: IntoIterator<Item = &'a BigComplex>>(one: BigComplex, it: I) -> BigComplex {
    it.into_iter().fold(one, |acc, z| acc * z)
}

/// Sum of a sequence, added left to right.
pub fn sum<'a, I: IntoIterator<Item = &'a BigComplex>>(zero: BigComplex, it: I) -> BigComplex {
    it.into_iter().fold(zero, |acc, z| acc + z)
}

/// Parse a decimal literal at the context precision.
pub fn parse_float(ctx: &PrecisionContext, s: &str) -> Float {
    let v = Float::parse(s).expect("embedded decimal literal");
    Float::with_val(ctx.bits(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_floor_is_sixteen_digits() {
        assert!(PrecisionContext::new(15).is_err());
        assert_eq!(PrecisionContext::new(60).unwrap(), PrecisionContext::EXTENDED);
        assert!(PrecisionContext::EXTENDED.bits() > 199);
    }

    #[test]
    fn exp_ln_roundtrip() {
        let ctx = PrecisionContext::EXTENDED;
        let z = ctx.complex(0.3, -1.7);
        let w = z.ln().exp();
        let err = (&w - &z).abs_f64();
        assert!(err < 1e-55, "{err}");
    }

    #[test]
    fn division_inverts_multiplication() {
        let ctx = PrecisionContext::EXTENDED;
        let a = ctx.complex(1.25, 3.5);
        let b = ctx.complex(-0.75, 0.125);
        let c = &(&a * &b) / &b;
        assert!((&c - &a).abs_f64() < 1e-55);
    }

    #[test]
    fn sqrt_is_principal() {
        let ctx = PrecisionContext::STANDARD;
        let r = ctx.complex(-4.0, -0.0).sqrt().to_c64();
        assert!((r - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        let r = ctx.complex(3.0, 4.0).sqrt().to_c64();
        assert!((r - Complex64::new(2.0, 1.0)).norm() < 1e-15);
    }
}
