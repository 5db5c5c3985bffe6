use std::sync::OnceLock;

use num_complex::Complex64;
use rug::Float;

use super::bernoulli::{bernoulli, bernoulli_float};
use super::stieltjes::STIELTJES;
use crate::error::{Error, Result};
use crate::mp::{BigComplex, PrecisionContext};

const STIELTJES_BITS: u32 = 266;

fn stieltjes_table() -> &'static [Float] {
    static T: OnceLock<Vec<Float>> = OnceLock::new();
    T.get_or_init(|| {
        STIELTJES
            .iter()
            .map(|s| Float::with_val(STIELTJES_BITS, Float::parse(s).expect("literal")))
            .collect()
    })
}

/// Riemann zeta at the context precision: Laurent expansion about the
/// pole when it converges fast enough, Euler-Maclaurin otherwise.
pub fn zeta_mp(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let x = s - 1.0;
    if x.is_zero() {
        return Err(Error::ZetaPole);
    }
    if let Some(v) = laurent(&x, ctx) {
        return Ok(v);
    }
    Ok(euler_maclaurin(s, ctx))
}

/// Laurent series `1/x + sum (-1)^n gamma_n x^n / n!`, or `None` when the
/// Berndt bound `|gamma_n| <= 4 (n-1)!/pi^n` on the dropped tail exceeds the
/// working epsilon.
fn laurent(x: &BigComplex, ctx: &PrecisionContext) -> Option<BigComplex> {
    let table = stieltjes_table();
    let n_terms = table.len();
    let r = x.abs_f64();
    if r > 0.1 || ctx.bits() + 8 > STIELTJES_BITS {
        return None;
    }
    let rho = r / std::f64::consts::PI;
    let tail = 4.0 / n_terms as f64 * rho.powi(n_terms as i32) / (1.0 - rho);
    // |zeta| >= 1/r - 1 on this disc
    if tail > ctx.epsilon() * 0.01 * (1.0 / r - 1.0) {
        return None;
    }
    let bits = ctx.bits() + 16;
    let x = x.with_prec(bits);
    // Horner in x with coefficients (-1)^n gamma_n / n!
    let mut fact = Float::with_val(bits, 1u32);
    let coefs: Vec<Float> = table
        .iter()
        .enumerate()
        .map(|(n, g)| {
            if n > 0 {
                fact *= n as u32;
            }
            let c = Float::with_val(bits, g / &fact);
            if n % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut acc = BigComplex::from_real(coefs[n_terms - 1].clone());
    for c in coefs.iter().rev().skip(1) {
        acc = &acc * &x;
        acc.re += c;
    }
    Some((acc + x.recip()).with_prec(ctx.bits()))
}

/// Euler-Maclaurin summation with `N` chosen from the precision and `|s|`,
/// and the correction series summed until it falls below epsilon.
pub(crate) fn euler_maclaurin(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let bits = ctx.bits() + 32;
    let s = s.with_prec(bits);
    let mut n = ctx.digits() as u64 + s.abs_f64().ceil() as u64 + 10;
    loop {
        if let Some(v) = em_with(&s, n, bits, ctx) {
            return v.with_prec(ctx.bits());
        }
        n *= 2;
    }
}

fn em_with(s: &BigComplex, n: u64, bits: u32, ctx: &PrecisionContext) -> Option<BigComplex> {
    let mut sum = BigComplex::from_f64(bits, 1.0, 0.0);
    let neg_s = -s;
    for k in 2..n {
        let lk = Float::with_val(bits, k).ln();
        sum = sum + neg_s.exp_base(&lk);
    }
    let ln_n = Float::with_val(bits, n).ln();
    let n_pow = neg_s.exp_base(&ln_n); // N^-s
    let nf = Float::with_val(bits, n);
    sum = sum + n_pow.scale(&nf) / (s - 1.0);
    sum = sum + n_pow.scale_f64(0.5);
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 4));
    let inv_n2 = Float::with_val(bits, nf.square_ref()).recip();
    // term_k = B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    let mut poch = s.clone();
    let mut npow = n_pow.scale(&nf.clone().recip());
    let mut fact = Float::with_val(bits, 2u32);
    let mut prev = f64::INFINITY;
    for k in 1..(4 * ctx.digits() as usize + 200) {
        let b = bernoulli_float(2 * k, bits);
        let term = (&poch * &npow).scale(&Float::with_val(bits, &b / &fact));
        let mag = term.abs_f64();
        sum = sum + &term;
        if Float::with_val(bits, term.abs()) < Float::with_val(bits, &eps * sum.abs()) {
            return Some(sum);
        }
        if mag > prev && k > 4 {
            // asymptotic series turned around before converging
            return None;
        }
        prev = mag;
        let a = s + (2 * k - 1) as f64;
        let b2 = s + (2 * k) as f64;
        poch = poch * a * b2;
        npow = npow.scale(&inv_n2);
        fact *= ((2 * k + 1) * (2 * k + 2)) as u32;
    }
    None
}

/// Binary64 zeta.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    let ctx = PrecisionContext::STANDARD;
    Ok(zeta_mp(&ctx.from_c64(s), &ctx)?.to_c64())
}

fn bernoulli_f64() -> &'static [f64] {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| (0..=60).map(|n| bernoulli(n).to_f64()).collect())
}

/// Binary64 Euler-Maclaurin, for moderate `|Im s|` off the pole.
/// `N = |Im s| + 20` keeps the correction series at ratio below 1/(2 pi)^2.
pub fn zeta_em_f64(s: Complex64) -> Complex64 {
    let n = s.im.abs().ceil() as u64 + 20;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let n_pow = (-s * nf.ln()).exp();
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    let b = bernoulli_f64();
    let mut poch = s;
    let mut npow = n_pow / nf;
    let mut fact = 2.0;
    for k in 1..30 {
        let term = b[2 * k] / fact * poch * npow;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        poch *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        npow /= nf * nf;
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma;

    #[test]
    fn zeta_two() {
        for digits in [16u32, 60] {
            let ctx = PrecisionContext::new(digits).unwrap();
            let z = zeta_mp(&ctx.complex(2.0, 0.0), &ctx).unwrap();
            let pi = ctx.pi();
            let expect = Float::with_val(ctx.bits(), pi.square_ref()) / 6u32;
            let err = (z.re - expect).abs().to_f64();
            assert!(err < ctx.epsilon(), "D = {digits}: {err}");
        }
    }

    #[test]
    fn pole_and_laurent_structure() {
        assert_eq!(zeta(Complex64::new(1.0, 0.0)), Err(Error::ZetaPole));
        let s = 1e-6;
        // build 1 + s in extended arithmetic; 1.0 + 1e-6 in binary64 is off by 1e-10 relative in s
        let ctx = PrecisionContext::STANDARD;
        let v = s * zeta_mp(&(ctx.one() + s), &ctx).unwrap().re.to_f64();
        assert!((v - 1.0 - 0.577_215_664_901_532_9 * s).abs() < 1e-12, "{v}");
    }

    #[test]
    fn laurent_matches_euler_maclaurin() {
        let ctx = PrecisionContext::EXTENDED;
        for (re, im) in [(0.003, 0.0), (-0.002, 0.001), (0.02, -0.01), (1e-7, 0.0)] {
            let x = ctx.complex(re, im);
            let lv = laurent(&x, &ctx).expect("inside gate");
            let em = euler_maclaurin(&(&x + 1.0), &ctx);
            let rel = (&lv - &em).abs_f64() / em.abs_f64();
            assert!(rel < 1e-56, "{re} {im}: {rel}");
        }
        // the gate refuses points where 31 constants are not enough
        assert!(laurent(&ctx.complex(0.09, 0.0), &ctx).is_none());
    }

    #[test]
    fn zeta_half() {
        let ctx = PrecisionContext::new(30).unwrap();
        let z = zeta_mp(&ctx.complex(0.5, 0.0), &ctx).unwrap();
        let expect = Float::with_val(
            ctx.bits(),
            Float::parse("-1.4603545088095868128894991525152980125").unwrap(),
        );
        assert!((z.re - expect).abs().to_f64() < 1e-28);
    }

    #[test]
    fn functional_equation() {
        let pts = [
            (0.3, 2.0),
            (-1.5, 0.7),
            (2.5, -4.0),
            (0.5, 14.134_725),
            (-0.2, -9.0),
            (1.7, 0.0),
        ];
        for (re, im) in pts {
            let s = Complex64::new(re, im);
            let lhs = zeta(s).unwrap();
            let pi = std::f64::consts::PI;
            let rhs = Complex64::new(2.0, 0.0).powc(s)
                * Complex64::new(pi, 0.0).powc(s - 1.0)
                * (pi * s / 2.0).sin()
                * gamma(1.0 - s).unwrap()
                * zeta(1.0 - s).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0), "{s}");
        }
    }

    #[test]
    fn f64_em_matches_mp() {
        let ctx = PrecisionContext::new(30).unwrap();
        for t in [0.0, 3.3, 14.134_725, 29.9, 77.0, 150.0] {
            let s = Complex64::new(0.5, t);
            let a = zeta_em_f64(s);
            let b = zeta_mp(&ctx.from_c64(s), &ctx).unwrap().to_c64();
            assert!((a - b).norm() < 1e-12, "t = {t}: {}", (a - b).norm());
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn zeta_commutes_with_conjugation(re in -1.5..2.5f64, im in 0.5..20.0f64) {
            let s = Complex64::new(re, im);
            let (a, b) = (zeta(s).unwrap(), zeta(s.conj()).unwrap());
            prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }
}
