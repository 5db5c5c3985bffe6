use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use super::bernoulli::bernoulli_float;
use crate::error::{Error, Result};
use crate::mp::{BigComplex, PrecisionContext};

/// Spouge coefficients for one working precision.
struct Spouge {
    a: u32,
    bits: u32,
    /// `c[0] = sqrt(2 pi)`, `c[k] = (-1)^(k-1) (a-k)^(k-1/2) e^(a-k) / (k-1)!`
    c: Vec<Float>,
}

/// Spouge parameter for `D` digits: the relative error bound
/// `a^(-1/2) (2 pi)^(-(a+1/2))` falls below `10^(-D-1)`.
fn spouge_parameter(digits: u32) -> u32 {
    let target = (digits as f64 + 1.0) * std::f64::consts::LN_10;
    let mut a = 2u32;
    while (a as f64 + 0.5) * std::f64::consts::TAU.ln() + 0.5 * (a as f64).ln() < target {
        a += 1;
    }
    a
}

fn spouge(ctx: &PrecisionContext) -> Arc<Spouge> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Spouge>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("spouge cache").get(&ctx.digits()) {
        return s.clone();
    }
    let a = spouge_parameter(ctx.digits());
    // the alternating coefficients cancel; carry their largest magnitude as guard bits
    let max_log2 = (1..a)
        .map(|k| {
            let k = k as f64;
            let ak = a as f64 - k;
            ((k - 0.5) * ak.ln() + ak - ln_factorial(k as u32 - 1)) / std::f64::consts::LN_2
        })
        .fold(0.0f64, f64::max);
    let bits = ctx.bits() + max_log2.ceil() as u32 + 32;
    let mut c = Vec::with_capacity(a as usize);
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    c.push(two_pi.sqrt());
    let mut fact = Float::with_val(bits, 1u32);
    for k in 1..a {
        if k > 1 {
            fact *= k - 1;
        }
        let ak = Float::with_val(bits, a - k);
        let pow = Float::with_val(bits, ak.ln_ref()) * (Float::with_val(bits, k) - 0.5f64);
        let mut v = (pow + &ak).exp() / &fact;
        if k % 2 == 0 {
            v = -v;
        }
        c.push(v);
    }
    let s = Arc::new(Spouge { a, bits, c });
    cache.lock().expect("spouge cache").insert(ctx.digits(), s.clone());
    s
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn is_nonpositive_integer(z: &BigComplex) -> bool {
    z.im.is_zero() && z.re <= 0 && z.re.is_integer()
}

// Gamma(z + 1) for Re z >= -1/2 by Spouge's formula, at the cached working precision.
fn spouge_gamma_shifted(z: &BigComplex, sp: &Spouge) -> BigComplex {
    let z = z.with_prec(sp.bits);
    let mut series = BigComplex::from_real(sp.c[0].clone());
    for (k, ck) in sp.c.iter().enumerate().skip(1) {
        let d = &z + k as f64;
        series = series + d.recip().scale(ck);
    }
    let za = &z + sp.a as f64;
    let expo = &z + 0.5;
    let lead = (&expo * &za.ln() - &za).exp();
    lead * series
}

/// Complex Gamma function at the context precision.
pub fn gamma_mp(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re.to_f64()));
    }
    let sp = spouge(ctx);
    let out = if z.re < 0.5 {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let zw = z.with_prec(sp.bits);
        let pi = Float::with_val(sp.bits, Constant::Pi);
        let one_minus = -&zw + 1.0;
        let g = spouge_gamma_shifted(&one_minus, &sp) / &one_minus;
        let s = zw.scale(&pi).sin();
        BigComplex::from_real(pi) / (s * g)
    } else {
        let zw = z.with_prec(sp.bits);
        spouge_gamma_shifted(&zw, &sp) / &zw
    };
    Ok(out.with_prec(ctx.bits()))
}

/// Log-Gamma. For `Re z > 0` this is the branch analytic in the right
/// half-plane and real on the positive axis; elsewhere the principal
/// logarithm of `Gamma(z)`.
pub fn log_gamma_mp(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re.to_f64()));
    }
    if z.re <= 0 {
        return Ok(gamma_mp(z, ctx)?.ln());
    }
    let bits = ctx.bits() + 32;
    let z = z.with_prec(bits);
    // shift to |w| >= R so the Stirling series reaches the working epsilon
    let r = 0.5 * ctx.digits() as f64 + 10.0;
    let mut w = z.clone();
    let mut shift_log = BigComplex::from_f64(bits, 0.0, 0.0);
    while w.abs_f64() < r {
        shift_log = shift_log + w.ln();
        w = w + 1.0;
    }
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let half_ln_2pi = Float::with_val(bits, two_pi.ln_ref()) / 2u32;
    let lw = w.ln();
    let mut acc = &(&w - 0.5) * &lw - &w;
    acc.re += &half_ln_2pi;
    let inv = w.recip();
    let inv2 = inv.square();
    let mut pow = inv;
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    for k in 1.. {
        let b = bernoulli_float(2 * k, bits);
        let coef = b / ((2 * k * (2 * k - 1)) as u32);
        let term = pow.scale(&coef);
        let small = term.abs() < Float::with_val(bits, &eps * acc.abs());
        acc = acc + term;
        if small || k > 4 * ctx.digits() as usize {
            break;
        }
        pow = &pow * &inv2;
    }
    Ok((acc - shift_log).with_prec(ctx.bits()))
}

/// Binary64 complex Gamma (Spouge at 16 digits).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    let ctx = PrecisionContext::STANDARD;
    Ok(gamma_mp(&ctx.from_c64(z), &ctx)?.to_c64())
}

pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    let ctx = PrecisionContext::STANDARD;
    Ok(log_gamma_mp(&ctx.from_c64(z), &ctx)?.to_c64())
}

/// `1 / Gamma(z)`, zero at the poles.
pub fn rgamma(z: Complex64) -> Complex64 {
    match gamma(z) {
        Ok(g) => 1.0 / g,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
        (a - b).abs_f64() / b.abs_f64()
    }

    #[test]
    fn half_is_sqrt_pi() {
        for digits in [16u32, 30, 60, 90] {
            let ctx = PrecisionContext::new(digits).unwrap();
            let g = gamma_mp(&ctx.complex(0.5, 0.0), &ctx).unwrap();
            let sp = BigComplex::from_real(ctx.pi().sqrt());
            assert!(rel(&g, &sp) < ctx.epsilon(), "D = {digits}");
        }
    }

    #[test]
    fn quarter_against_agm() {
        // Gamma(1/4)^2 = (2 pi)^(3/2) / AGM(1, sqrt 2)
        let ctx = PrecisionContext::EXTENDED;
        let b = ctx.bits() + 20;
        let one = Float::with_val(b, 1);
        let agm = Float::with_val(b, one.agm_ref(&Float::with_val(b, 2).sqrt()));
        let two_pi = Float::with_val(b, Constant::Pi) * 2u32;
        let two_pi_15 = Float::with_val(b, (&two_pi).pow(&Float::with_val(b, 1.5)));
        let g2 = Float::with_val(b, two_pi_15 / agm);
        let expect = BigComplex::from_real(g2.sqrt());
        let g = gamma_mp(&ctx.complex(0.25, 0.0), &ctx).unwrap();
        assert!(rel(&g, &expect) < 1e-57);
        let g = gamma(Complex64::new(0.25, 0.0)).unwrap();
        assert!((g.re - 3.625_609_908_221_908).abs() < 1e-14);
    }

    #[test]
    fn poles() {
        assert_eq!(gamma(Complex64::new(0.0, 0.0)), Err(Error::GammaPole(0.0)));
        assert_eq!(gamma(Complex64::new(-3.0, 0.0)), Err(Error::GammaPole(-3.0)));
        assert!(gamma(Complex64::new(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn recurrence_and_reflection_extended() {
        let ctx = PrecisionContext::EXTENDED;
        let tol = 10f64.powi(3 - 60);
        for (re, im) in [(0.3, 0.0), (-2.7, 1.1), (5.5, -7.0), (0.01, 30.0), (-0.4, -0.2)] {
            let z = ctx.complex(re, im);
            let g = gamma_mp(&z, &ctx).unwrap();
            let g1 = gamma_mp(&(&z + 1.0), &ctx).unwrap();
            assert!(rel(&g1, &(&z * &g)) < tol, "{re} {im}");
            let gm = gamma_mp(&(-&z + 1.0), &ctx).unwrap();
            let s = z.scale(&ctx.pi()).sin();
            let lhs = (g * gm * s).scale(&ctx.pi().recip());
            assert!((&lhs - &ctx.one()).abs_f64() < 10f64.powi(4 - 60));
        }
    }

    #[test]
    fn log_gamma_consistent() {
        let ctx = PrecisionContext::new(40).unwrap();
        for (re, im) in [(0.25, 3.0), (1.5, -0.5), (10.0, 40.0), (0.7, 0.0)] {
            let z = ctx.complex(re, im);
            let lg = log_gamma_mp(&z, &ctx).unwrap();
            let g = gamma_mp(&z, &ctx).unwrap();
            assert!(rel(&lg.exp(), &g) < 1e-37);
        }
        // continuity of the branch: Im log Gamma(1/4 + i t/2) follows the
        // asymptotic theta function at large t
        let t = 1000.0f64;
        let lg = log_gamma(Complex64::new(0.25, t / 2.0)).unwrap();
        let theta = lg.im - t / 2.0 * std::f64::consts::PI.ln();
        let asym = t / 2.0 * (t / std::f64::consts::TAU).ln() - t / 2.0 - std::f64::consts::PI / 8.0 + 1.0 / (48.0 * t);
        assert!((theta - asym).abs() < 1e-9);
        // log Gamma(1) = 0, log Gamma(2) = 0
        assert!(log_gamma(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-15);
    }
}
