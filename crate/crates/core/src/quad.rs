//! Quadrature rules: Gauss-Legendre (fixed, composite, adaptive) and
//! double-exponential on the unit interval.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let r = gauss_legendre_cached(n);
    (r.0.clone(), r.1.clone())
}

type GaussLegendre = Arc<(Vec<f64>, Vec<f64>)>;

pub(crate) fn gauss_legendre_cached(n: usize) -> GaussLegendre {
    static CACHE: OnceLock<Mutex<HashMap<usize, GaussLegendre>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(compute_gauss_legendre(n)))
        .clone()
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    (x, w)
}

/// Fixed `n`-point Gauss-Legendre on `[a, b]`.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre_cached(n);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Adaptive Gauss-Legendre: bisect until the 10- and 20-point rules agree.
pub fn adaptive_gl<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let whole = gl_integrate(f, a, b, 20);
    adaptive_step(f, a, b, whole, rel_tol, whole.abs(), 0)
}

fn adaptive_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fine: f64, rel_tol: f64, scale: f64, depth: u32) -> f64 {
    let coarse = gl_integrate(f, a, b, 10);
    if (fine - coarse).abs() <= rel_tol * scale.max(fine.abs()) || depth > 40 {
        return fine;
    }
    let m = 0.5 * (a + b);
    let left = gl_integrate(f, a, m, 20);
    let right = gl_integrate(f, m, b, 20);
    adaptive_step(f, a, m, left, rel_tol, scale, depth + 1) + adaptive_step(f, m, b, right, rel_tol, scale, depth + 1)
}

/// Double-exponential quadrature of `int_0^1 f` where the integrand is
/// supplied as a function of `(ln u, ln(1 - u))`, so endpoint singularities
/// of power type are resolved without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64) -> Complex64>(f: F, tol: f64) -> Complex64 {
    let softplus = |v: f64| {
        if v > 0.0 {
            v + (-v).exp().ln_1p()
        } else {
            v.exp().ln_1p()
        }
    };
    let eval = |t: f64| {
        let v = PI * t.sinh();
        let lu = -softplus(-v);
        let l1u = -softplus(v);
        let jac = PI * t.cosh() * (lu + l1u).exp();
        if jac == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        f(lu, l1u) * jac
    };
    let tmax = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut est = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let next = sum * h;
        let done = (next - est).norm() <= tol * next.norm();
        est = next;
        if done {
            break;
        }
    }
    est
}
