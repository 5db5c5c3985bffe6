//! `zeta(1/2 + it)` and the Hardy Z function.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::gamma::log_gamma;
use super::zeta::zeta_em_f64;

/// Below this height the Euler-Maclaurin sum is used instead of Riemann-Siegel.
pub const RS_THRESHOLD: f64 = 200.0;

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Riemann-Siegel correction polynomials `C_0..C_4` in `x = p - 1/2`.
fn rs_coefficients() -> &'static [Vec<f64>; 5] {
    static C: OnceLock<[Vec<f64>; 5]> = OnceLock::new();
    C.get_or_init(build_rs_coefficients)
}

fn build_rs_coefficients() -> [Vec<f64>; 5] {
    const NT: usize = 140;
    const BITS: u32 = 900;
    let f = |x: f64| Float::with_val(BITS, x);
    let pi = Float::with_val(BITS, Constant::Pi);
    let two_pi = Float::with_val(BITS, &pi * 2u32);
    let five_pi_8 = Float::with_val(BITS, &pi * 5u32) / 8u32;
    let (s58, c58) = five_pi_8.sin_cos(f(0.0));

    // Taylor coefficients of 2 pi x: (2pi)^k / k!
    let mut tp = vec![f(1.0)];
    for k in 1..NT {
        let v = Float::with_val(BITS, &tp[k - 1] * &two_pi) / k as u32;
        tp.push(v);
    }
    let sign = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };

    // Psi = -cos(2 pi x^2 - 5pi/8) / cos(2 pi x)
    let mut num = vec![f(0.0); NT];
    let mut den = vec![f(0.0); NT];
    for j in 0..NT {
        // (2 pi x^2)^m / m! with m = 2j (cos part) and m = 2j+1 (sin part)
        let m = 2 * j;
        if 2 * m < NT {
            let a = Float::with_val(BITS, (&two_pi).pow(m as u32)) / factorial(m, BITS);
            num[2 * m] = -Float::with_val(BITS, &a * &c58) * sign(j);
        }
        let m1 = 2 * j + 1;
        if 2 * m1 < NT {
            let a = Float::with_val(BITS, (&two_pi).pow(m1 as u32)) / factorial(m1, BITS);
            num[2 * m1] = -Float::with_val(BITS, &a * &s58) * sign(j);
        }
        if 2 * j < NT {
            den[2 * j] = Float::with_val(BITS, &tp[2 * j] * sign(j));
        }
    }
    let mut psi: Vec<Float> = Vec::with_capacity(NT);
    for n in 0..NT {
        let mut acc = num[n].clone();
        for k in 1..=n {
            acc -= Float::with_val(BITS, &den[k] * &psi[n - k]);
        }
        psi.push(acc);
    }

    let deriv = |m: usize| -> Vec<Float> {
        (0..NT - m)
            .map(|n| {
                let mut c = psi[n + m].clone();
                for j in 1..=m {
                    c *= (n + j) as u32;
                }
                c
            })
            .collect()
    };
    let pi2 = Float::with_val(BITS, pi.square_ref());
    let pi_pow = |k: u32| Float::with_val(BITS, (&pi2).pow(k));
    let terms: [&[(usize, f64, u32)]; 5] = [
        &[(0, 1.0, 0)],
        &[(3, -1.0 / 96.0, 1)],
        &[(2, 1.0 / 64.0, 1), (6, 1.0 / 18432.0, 2)],
        &[(1, -1.0 / 64.0, 1), (5, -1.0 / 3840.0, 2), (9, -1.0 / 5_308_416.0, 3)],
        &[
            (0, 1.0 / 128.0, 1),
            (4, 19.0 / 24576.0, 2),
            (8, 11.0 / 5_898_240.0, 3),
            (12, 1.0 / 2_038_431_744.0, 4),
        ],
    ];
    let len = NT - 12;
    terms.map(|combo| {
        let mut acc = vec![f(0.0); len];
        for &(m, c, pk) in combo {
            let d = deriv(m);
            let scale = Float::with_val(BITS, c) / pi_pow(pk);
            for n in 0..len {
                acc[n] += Float::with_val(BITS, &d[n] * &scale);
            }
        }
        let mut out: Vec<f64> = acc.iter().map(|v| v.to_f64()).collect();
        while out.len() > 1
            && out
                .last()
                .is_some_and(|c| c.abs() * 0.5f64.powi(out.len() as i32 - 1) < 1e-24)
        {
            out.pop();
        }
        out
    })
}

fn factorial(n: usize, bits: u32) -> Float {
    let mut f = Float::with_val(bits, 1u32);
    for k in 2..=n {
        f *= k as u32;
    }
    f
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// `ln n` as an unevaluated double-double `hi + lo`.
fn ln_dd(n: u64) -> (f64, f64) {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..8192u64).map(ln_dd_exact).collect());
    match table.get(n as usize) {
        Some(&v) => v,
        None => ln_dd_exact(n),
    }
}

fn ln_dd_exact(n: u64) -> (f64, f64) {
    if n == 0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    let l = Float::with_val(128, n).ln();
    let hi = l.to_f64();
    let lo = (l - hi).to_f64();
    (hi, lo)
}

/// `t * ln n` reduced into `(-pi, pi]`, accurate to a few ulps of 2 pi.
fn phase_t_ln(t: f64, n: u64) -> f64 {
    let (hi, lo) = ln_dd(n);
    let p = t * hi;
    let e = t.mul_add(hi, -p) + t * lo;
    reduce(p, e)
}

// (p + e) mod 2 pi for a double-double with |e| << |p|
fn reduce(p: f64, e: f64) -> f64 {
    let k = (p / TWO_PI_HI).round();
    let r = (-k).mul_add(TWO_PI_HI, p) - k * TWO_PI_LO + e;
    r - TWO_PI_HI * (r / TWO_PI_HI).round()
}

/// Riemann-Siegel theta `arg Gamma(1/4 + it/2) - (t/2) ln pi`, continuous in t.
pub fn theta(t: f64) -> f64 {
    if t.abs() < 10.0 {
        let lg = log_gamma(Complex64::new(0.25, t / 2.0)).expect("no poles on Re = 1/4");
        return lg.im - t / 2.0 * PI.ln();
    }
    theta_asymptotic(t)
}

fn theta_asymptotic(t: f64) -> f64 {
    let sgn = t.signum();
    let t = t.abs();
    let main = t / 2.0 * (t / TAU).ln() - t / 2.0 - PI / 8.0;
    sgn * (main + theta_correction(t))
}

fn theta_correction(t: f64) -> f64 {
    let u = 1.0 / t;
    let u2 = u * u;
    u * (1.0 / 48.0 + u2 * (7.0 / 5760.0 + u2 * (31.0 / 80640.0 + u2 * (127.0 / 430_080.0 + u2 * 511.0 / 1_216_512.0))))
}

/// `theta(t)` reduced mod `2 pi`, keeping full accuracy at large `t`.
pub fn theta_mod_2pi(t: f64) -> f64 {
    if t.abs() < 1e4 {
        let th = theta(t);
        return th - TAU * (th / TAU).round();
    }
    let sgn = t.signum();
    let ta = t.abs();
    let bits = 160;
    let tt = Float::with_val(bits, ta);
    let pi = Float::with_val(bits, Constant::Pi);
    let two_pi = Float::with_val(bits, &pi * 2u32);
    let l = Float::with_val(bits, &tt / &two_pi).ln();
    let half = Float::with_val(bits, &tt / 2u32);
    let mut th = Float::with_val(bits, &half * &l) - &half - Float::with_val(bits, &pi / 8u32);
    th += theta_correction(ta);
    let k = Float::with_val(bits, &th / &two_pi).round();
    th -= k * two_pi;
    sgn * th.to_f64()
}

// Z(t) via the main sum and five correction terms; needs t >= ~30
fn riemann_siegel_z(t: f64) -> f64 {
    let th = theta_mod_2pi(t);
    let a = (t / TAU).sqrt();
    let n = a.floor() as u64;
    let mut sum = 0.0;
    for k in 1..=n {
        let ph = th - phase_t_ln(t, k);
        sum += ph.cos() / (k as f64).sqrt();
    }
    let x = a - n as f64 - 0.5;
    let c = rs_coefficients();
    let w = 1.0 / a;
    let mut corr = 0.0;
    let mut wk = 1.0;
    for ck in c.iter() {
        corr += horner(ck, x) * wk;
        wk *= w;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sum + sign * corr / a.sqrt()
}

/// Hardy's function `Z(t) = e^{i theta(t)} zeta(1/2 + it)`, real for real t.
pub fn hardy_z(t: f64) -> f64 {
    let ta = t.abs();
    if ta < RS_THRESHOLD {
        let z = zeta_em_f64(Complex64::new(0.5, ta));
        let th = theta(ta);
        return (Complex64::from_polar(1.0, th) * z).re;
    }
    riemann_siegel_z(ta)
}

/// `zeta(1/2 + it)` in binary64.
pub fn zeta_critical(t: f64) -> Complex64 {
    let ta = t.abs();
    let z = if ta < RS_THRESHOLD {
        zeta_em_f64(Complex64::new(0.5, ta))
    } else {
        Complex64::from_polar(riemann_siegel_z(ta), -theta_mod_2pi(ta))
    };
    if t < 0.0 {
        z.conj()
    } else {
        z
    }
}
