//! The conjectured main term `Q_{A,B}(q)`: swap terms, the single term
//! `Q(X, Y; q)`, its zero-shift limit, the leading asymptotic and the
//! sixth-moment polynomial `P_3`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, phi_flat, ShiftSet};
use crate::error::{Error, Result};
use crate::local::{b_q, euler_a_many, EulerProduct64, DEFAULT_CUTOFF};
use crate::mp::{BigComplex, PrecisionContext};
use crate::quad::adaptive_gl;
use crate::special::{gamma_mp, zeta_mp};

/// One summand of the swap sum: `S` indexes removed from `A`, `T` from `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapTerm {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub x: ShiftSet,
    pub y: ShiftSet,
}

/// `delta_{A,B} = (sum A + sum B) / 2`.
pub fn delta(a: &ShiftSet, b: &ShiftSet) -> Complex64 {
    (a.sum() + b.sum()) / 2.0
}

fn delta_mp(a: &ShiftSet, b: &ShiftSet, bits: u32) -> BigComplex {
    let mut d = BigComplex::from_f64(bits, 0.0, 0.0);
    for v in a.values().iter().chain(b.values()) {
        d = d + BigComplex::from_f64(bits, v.re, v.im);
    }
    d.scale_f64(0.5)
}

fn gamma_arg(v: &BigComplex) -> BigComplex {
    (v + 0.5).scale_f64(0.5)
}

/// `G_{A,B} = prod Gamma((1/2 + alpha)/2) prod Gamma((1/2 + beta)/2)`.
pub fn g_factor(a: &ShiftSet, b: &ShiftSet, ctx: &PrecisionContext) -> Result<BigComplex> {
    let mut g = ctx.one();
    for v in a.values().iter().chain(b.values()) {
        g = g * gamma_mp(&gamma_arg(&ctx.from_c64(*v)), ctx)?;
    }
    Ok(g)
}

fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=(k - left) {
            cur.push(i);
            rec(i + 1, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, size, &mut Vec::new(), &mut out);
    out
}

/// All `(S, T)` with `|S| = |T|`: by size, then `S`, then `T`, each
/// lexicographic. `X = (A \ S) u (-T)`, `Y = (B \ T) u (-S)`.
pub fn swap_terms(a: &ShiftSet, b: &ShiftSet) -> Result<Vec<SwapTerm>> {
    let k = a.len();
    if b.len() != k {
        return Err(Error::InvalidInput(format!("|A| = {k} and |B| = {} differ", b.len())));
    }
    let mut out = Vec::new();
    for size in 0..=k {
        let subs = subsets(k, size);
        for s in &subs {
            for t in &subs {
                let pick = |set: &ShiftSet, keep_out: &[usize], neg: &ShiftSet, take: &[usize]| {
                    let mut v: Vec<Complex64> = (0..k)
                        .filter(|i| !keep_out.contains(i))
                        .map(|i| set.values()[i])
                        .collect();
                    v.extend(take.iter().map(|&i| -neg.values()[i]));
                    ShiftSet::from_vec_unchecked(v)
                };
                out.push(SwapTerm {
                    s: s.clone(),
                    t: t.clone(),
                    x: pick(a, s, b, t),
                    y: pick(b, t, a, s),
                });
            }
        }
    }
    Ok(out)
}

fn check_nondegenerate(x: &ShiftSet, y: &ShiftSet) -> Result<()> {
    for a in x.values() {
        for b in y.values() {
            if a + b == Complex64::new(0.0, 0.0) {
                return Err(Error::DegenerateShifts(format!(
                    "alpha + beta = 0 for alpha = {a}, beta = {b}; use a perturbed or staggered configuration"
                )));
            }
        }
    }
    Ok(())
}

// Z(X, Y) = prod zeta(1 + x + y), sums formed in extended arithmetic
fn z_product(x: &ShiftSet, y: &ShiftSet, ctx: &PrecisionContext) -> Result<BigComplex> {
    let bits = ctx.bits();
    let mut z = ctx.one();
    for a in x.values() {
        for b in y.values() {
            let s = BigComplex::from_f64(bits, a.re, a.im) + BigComplex::from_f64(bits, b.re, b.im) + 1.0;
            z = z * zeta_mp(&s, ctx)?;
        }
    }
    Ok(z)
}

struct PreparedTerm {
    term: SwapTerm,
    delta: BigComplex,
    /// `A Z (X, Y)`
    az: BigComplex,
    /// indices into the distinct gamma-argument list for `X` and `Y`
    gx: Vec<usize>,
    gy: Vec<usize>,
}

/// The swap sum for fixed `A`, `B`, with the translation-invariant parts
/// (`delta`, `A`, `Z`) evaluated once. Only `G` depends on `t`, and only
/// `B_q` and `(q/pi)^delta` depend on `q`.
pub struct SwapSum {
    a: ShiftSet,
    b: ShiftSet,
    ctx: PrecisionContext,
    cutoff: u64,
    terms: Vec<PreparedTerm>,
    /// distinct shift values appearing in some `X` (translated by `+it`)
    xs: Vec<Complex64>,
    /// distinct shift values appearing in some `Y` (translated by `-it`)
    ys: Vec<Complex64>,
    /// largest tail estimate of the Euler products
    pub euler_tail: f64,
}

fn intern(list: &mut Vec<Complex64>, v: Complex64) -> usize {
    match list.iter().position(|w| *w == v) {
        Some(i) => i,
        None => {
            list.push(v);
            list.len() - 1
        }
    }
}

impl SwapSum {
    pub fn new(a: &ShiftSet, b: &ShiftSet, cutoff: u64, ctx: &PrecisionContext) -> Result<Self> {
        let terms = swap_terms(a, b)?;
        for t in &terms {
            check_nondegenerate(&t.x, &t.y)?;
        }
        let pairs: Vec<(ShiftSet, ShiftSet)> = terms.iter().map(|t| (t.x.clone(), t.y.clone())).collect();
        let euler = euler_a_many(&pairs, cutoff, ctx)?;
        let euler_tail = euler.iter().map(|e| e.tail_bound).fold(0.0, f64::max);
        let zs: Vec<Result<BigComplex>> = terms.par_iter().map(|t| z_product(&t.x, &t.y, ctx)).collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut prepared = Vec::with_capacity(terms.len());
        for ((term, e), z) in terms.into_iter().zip(euler).zip(zs) {
            let gx = term.x.values().iter().map(|&v| intern(&mut xs, v)).collect();
            let gy = term.y.values().iter().map(|&v| intern(&mut ys, v)).collect();
            prepared.push(PreparedTerm {
                delta: delta_mp(&term.x, &term.y, ctx.bits()),
                az: e.value * z?,
                gx,
                gy,
                term,
            });
        }
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            ctx: *ctx,
            cutoff,
            terms: prepared,
            xs,
            ys,
            euler_tail,
        })
    }

    pub fn shifts(&self) -> (&ShiftSet, &ShiftSet) {
        (&self.a, &self.b)
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn gammas(&self, list: &[Complex64], it: f64) -> Result<Vec<BigComplex>> {
        let ctx = &self.ctx;
        list.iter()
            .map(|v| {
                let s = BigComplex::from_f64(ctx.bits(), v.re, v.im + it);
                gamma_mp(&gamma_arg(&s), ctx)
            })
            .collect()
    }

    /// Per-term `Q(X_{it}, Y_{-it}; q)` in swap order.
    pub fn terms_at(&self, q: u64, t: f64) -> Result<Vec<BigComplex>> {
        Ok(self.many(q, &[t])?.remove(0))
    }

    fn many(&self, q: u64, ts: &[f64]) -> Result<Vec<Vec<BigComplex>>> {
        if q < 3 {
            return Err(Error::Modulus(q));
        }
        let ctx = &self.ctx;
        let ln_q_pi = (Float::with_val(ctx.bits(), q) / ctx.pi()).ln();
        // q-dependent, t-independent parts
        let qpart: Vec<BigComplex> = self
            .terms
            .iter()
            .map(|p| {
                let bq = b_q(q, &p.term.x, &p.term.y, ctx)?;
                Ok(p.delta.scale(&ln_q_pi).exp() * &p.az / bq)
            })
            .collect::<Result<_>>()?;
        ts.iter()
            .map(|&t| {
                let gx = self.gammas(&self.xs, t)?;
                let gy = self.gammas(&self.ys, -t)?;
                Ok(self
                    .terms
                    .iter()
                    .zip(&qpart)
                    .map(|(p, base)| {
                        let mut g = base.clone();
                        for &i in &p.gx {
                            g = g * &gx[i];
                        }
                        for &i in &p.gy {
                            g = g * &gy[i];
                        }
                        g
                    })
                    .collect())
            })
            .collect()
    }

    /// `Q_{A_{it}, B_{-it}}(q)`, summed in swap order.
    pub fn total(&self, q: u64, t: f64) -> Result<BigComplex> {
        Ok(self.total_many(q, &[t])?.remove(0))
    }

    /// `Q_{A_{it}, B_{-it}}(q)` on a grid of `t`, sharing the `q`-dependent parts.
    pub fn total_many(&self, q: u64, ts: &[f64]) -> Result<Vec<BigComplex>> {
        Ok(self
            .many(q, ts)?
            .into_iter()
            .map(|terms| terms.iter().fold(self.ctx.zero(), |acc, v| acc + v))
            .collect())
    }
}

/// `Q(X_{it}, Y_{-it}; q)` for a single pair.
pub fn q_single(x: &ShiftSet, y: &ShiftSet, q: u64, t: f64, ctx: &PrecisionContext) -> Result<BigComplex> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput("|X| and |Y| differ".into()));
    }
    if q < 3 {
        return Err(Error::Modulus(q));
    }
    check_nondegenerate(x, y)?;
    let a = euler_a_many(&[(x.clone(), y.clone())], DEFAULT_CUTOFF, ctx)?.remove(0);
    let z = z_product(x, y, ctx)?;
    let g = g_factor(
        &x.translate(Complex64::new(0.0, t)),
        &y.translate(Complex64::new(0.0, -t)),
        ctx,
    )?;
    let ln_q_pi = (Float::with_val(ctx.bits(), q) / ctx.pi()).ln();
    let d = delta_mp(x, y, ctx.bits());
    Ok(d.scale(&ln_q_pi).exp() * g * a.value * z / b_q(q, x, y, ctx)?)
}

/// `Q_{A_{it}, B_{-it}}(q)`, the full swap sum.
pub fn q_total(a: &ShiftSet, b: &ShiftSet, q: u64, t: f64, ctx: &PrecisionContext) -> Result<BigComplex> {
    SwapSum::new(a, b, DEFAULT_CUTOFF, ctx)?.total(q, t)
}

/// Staggering multiplier for `B` in the zero-shift limit.
pub const STAGGER: f64 = 1.0001;
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Swap sum for `A`, `B`, built once per `(A, B, cutoff, digits)` and shared.
pub fn cached_swap_sum(a: &ShiftSet, b: &ShiftSet, cutoff: u64, ctx: &PrecisionContext) -> Result<Arc<SwapSum>> {
    type Key = (Vec<u64>, u64, u32);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<SwapSum>>>> = OnceLock::new();
    let mut bits: Vec<u64> = Vec::with_capacity(4 * a.len() + 1);
    bits.push(a.len() as u64);
    for v in a.values().iter().chain(b.values()) {
        bits.push(v.re.to_bits());
        bits.push(v.im.to_bits());
    }
    let key = (bits, cutoff, ctx.digits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("swap-sum cache").get(&key) {
        return Ok(s.clone());
    }
    let s = Arc::new(SwapSum::new(a, b, cutoff, ctx)?);
    cache.lock().expect("swap-sum cache").insert(key, s.clone());
    Ok(s)
}

/// Staggered shifts `A = {j delta}`, `B = {k delta 1.0001}`.
pub fn staggered_shifts(k: usize, delta: f64) -> (ShiftSet, ShiftSet) {
    (
        ShiftSet::staggered(k, delta, 1.0),
        ShiftSet::staggered(k, delta, STAGGER),
    )
}

/// Shared swap sum for the staggered configuration.
pub fn staggered_swap_sum(k: usize, delta: f64, cutoff: u64, ctx: &PrecisionContext) -> Result<Arc<SwapSum>> {
    let (a, b) = staggered_shifts(k, delta);
    cached_swap_sum(&a, &b, cutoff, ctx)
}

/// Euler-product cutoff and confluence step used by the predictor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictorSettings {
    pub euler_cutoff: u64,
    pub delta: f64,
}

impl Default for PredictorSettings {
    fn default() -> Self {
        Self {
            euler_cutoff: DEFAULT_CUTOFF,
            delta: DEFAULT_DELTA,
        }
    }
}

/// Result of the confluent zero-shift limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroShiftValue {
    /// `Q_{A,B}(q)` at `A = B = {0,...,0}`
    pub value: f64,
    /// the same divided by `|G|`, i.e. the predicted mean of `|L(1/2+it)|^{2K}`
    pub mean: f64,
    /// raw staggered values at `delta`, `delta/2`, `delta/4`
    pub raw: [f64; 3],
    /// disagreement of the two extrapolants, relative
    pub extrapolation_error: f64,
    /// largest imaginary part seen, relative
    pub imaginary_residue: f64,
    pub euler_tail: f64,
}

/// Confluent limit of `Q_{A,B}(q)` at zero shifts: staggered shifts at
/// `delta`, `delta/2`, `delta/4`, Richardson extrapolation in `delta^2` on
/// the two finer pairs, and the coarser pair kept as a consistency check.
pub fn q_zero_shift(q: u64, k: usize, t: f64, delta: f64, ctx: &PrecisionContext) -> Result<ZeroShiftValue> {
    let settings = PredictorSettings {
        delta,
        ..Default::default()
    };
    q_zero_shift_with(q, k, t, &settings, ctx)
}

pub fn q_zero_shift_with(
    q: u64,
    k: usize,
    t: f64,
    settings: &PredictorSettings,
    ctx: &PrecisionContext,
) -> Result<ZeroShiftValue> {
    let delta = settings.delta;
    if !ctx.is_extended() {
        return Err(Error::PrecisionBudget(format!(
            "the zero-shift limit needs at least 60 digits, got {}",
            ctx.digits()
        )));
    }
    if !(delta > 0.0 && delta <= 0.01) {
        return Err(Error::InvalidInput(format!("delta must be in (0, 0.01], got {delta}")));
    }
    let hs = [delta, delta / 2.0, delta / 4.0];
    let mut raw = [0.0; 3];
    let mut imag: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for (r, &h) in raw.iter_mut().zip(&hs) {
        let s = staggered_swap_sum(k, h, settings.euler_cutoff, ctx)?;
        let v = s.total(q, t)?.to_c64();
        *r = v.re;
        imag = imag.max(v.im.abs() / v.re.abs());
        tail = tail.max(s.euler_tail);
    }
    let r1 = (4.0 * raw[1] - raw[0]) / 3.0;
    let value = (4.0 * raw[2] - raw[1]) / 3.0;
    let extrapolation_error = (value - r1).abs() / value.abs();
    if extrapolation_error > 1e-6 || !value.is_finite() {
        return Err(Error::PrecisionBudget(format!(
            "cancellation exceeds precision budget: extrapolants disagree by {extrapolation_error:.2e}"
        )));
    }
    let g = g_factor(
        &ShiftSet::zeros(k).translate(Complex64::new(0.0, t)),
        &ShiftSet::zeros(k).translate(Complex64::new(0.0, -t)),
        ctx,
    )?
    .abs_f64();
    Ok(ZeroShiftValue {
        value,
        mean: value / g,
        raw,
        extrapolation_error,
        imaginary_residue: imag,
        euler_tail: tail,
    })
}

/// Predicted mean of `|L(1/2, chi)|^6` over even primitive characters mod
/// `q`; zero when the family is empty (`q = 2 mod 4`).
pub fn predicted_sixth_moment(q: u64, settings: &PredictorSettings, ctx: &PrecisionContext) -> Result<ZeroShiftValue> {
    if phi_flat(q) == 0 {
        return Ok(ZeroShiftValue {
            value: 0.0,
            mean: 0.0,
            raw: [0.0; 3],
            extrapolation_error: 0.0,
            imaginary_residue: 0.0,
            euler_tail: 0.0,
        });
    }
    q_zero_shift_with(q, 3, 0.0, settings, ctx)
}

/// `a_3 = prod_p (1 - 1/p)^4 (1 + 4/p + 1/p^2)`.
pub fn a3(cutoff: u64) -> EulerProduct64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, EulerProduct64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("a3 cache").get(&cutoff) {
        return *v;
    }
    let v = polynomial_euler(cutoff, 4, &[1.0, 4.0, 1.0]);
    cache.lock().expect("a3 cache").insert(cutoff, v);
    v
}

/// `a_3(L) = prod_p (1 - 1/p)^5 (1 + 5/p - 5/p^2 + ... + 1/p^8)`.
pub fn a3_l(cutoff: u64) -> Result<EulerProduct64> {
    if cutoff < 1000 {
        return Err(Error::InvalidInput(format!("cutoff must be >= 1000, got {cutoff}")));
    }
    Ok(polynomial_euler(
        cutoff,
        5,
        &[1.0, 5.0, -5.0, 14.0, -15.0, 5.0, 4.0, -4.0, 1.0],
    ))
}

// prod_p (1 - 1/p)^e sum_k c_k p^{-k}, with the tail from the p^{-2} decay
fn polynomial_euler(cutoff: u64, e: i32, c: &[f64]) -> EulerProduct64 {
    let local = |p: u64| {
        let x = 1.0 / p as f64;
        let poly = c.iter().rev().fold(0.0, |acc, ck| acc * x + ck);
        Complex64::new((1.0 - x).powi(e) * poly, 0.0)
    };
    let primes = crate::arith::PrimeTable::global().up_to(cutoff);
    let mut value = 1.0;
    for &p in primes.iter() {
        value *= local(p).re;
    }
    let last = &primes[primes.len().saturating_sub(100)..];
    let cst = last
        .iter()
        .map(|&p| (local(p).re - 1.0).abs() * (p as f64).powi(2))
        .fold(0.0, f64::max);
    let pl = *primes.last().expect("cutoff >= 2") as f64;
    EulerProduct64 {
        value: Complex64::new(value, 0.0),
        cutoff,
        tail_bound: cst / (pl * pl.ln()),
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `42 a_3 prod_{p | q} (1 - 1/p)^5 / (1 + 4/p + 1/p^2) log^9 q / 9!`; zero
/// for `q = 2 mod 4`, where there are no even primitive characters.
pub fn leading_asymptotic(q: u64) -> Result<f64> {
    if q < 3 {
        return Err(Error::Modulus(q));
    }
    if q % 4 == 2 {
        return Ok(0.0);
    }
    let local: f64 = factorize(q)
        .primes()
        .map(|p| {
            let x = 1.0 / p as f64;
            (1.0 - x).powi(5) / (1.0 + 4.0 * x + x * x)
        })
        .product();
    Ok(42.0 * a3(DEFAULT_CUTOFF).value.re * local * (q as f64).ln().powi(9) / factorial(9))
}

/// Degree-9 polynomial `sum c_k x^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPolynomial {
    pub coefficients: [f64; 10],
}

impl MomentPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Coefficients of the derivative, padded with a trailing zero.
    pub fn derivative(&self) -> MomentPolynomial {
        let mut d = [0.0; 10];
        for k in 1..10 {
            d[k - 1] = k as f64 * self.coefficients[k];
        }
        MomentPolynomial { coefficients: d }
    }
}

/// The printed approximate coefficients of `P_3`.
pub fn p3_published() -> MomentPolynomial {
    MomentPolynomial {
        coefficients: [
            0.9165,
            6.5939,
            10.2743,
            8.6073,
            3.9843,
            1.0459,
            0.1484,
            0.01107,
            0.0004050,
            0.000005708,
        ],
    }
}

/// `int_0^T P_3(log(t / 2 pi)) dt`, as `int e^u P_3(u - log 2 pi) du` up to `u = log T`.
pub fn p3_integral(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!("T must be positive, got {t}")));
    }
    let p = p3_published();
    let c = std::f64::consts::TAU.ln();
    let hi = t.ln();
    let f = |u: f64| u.exp() * p.eval(u - c);
    // below hi - 80 the integrand is under e^-80 |P| relative to the top
    Ok(adaptive_gl(&f, hi - 80.0, hi, 1e-13))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&ShiftSet::zeros(3), &ShiftSet::zeros(3)), c(0.0, 0.0));
        let a = ShiftSet::new(vec![c(0.1, 0.2)]).unwrap();
        let b = ShiftSet::new(vec![c(0.05, -0.1)]).unwrap();
        assert!((delta(&a, &b) - c(0.075, 0.05)).norm() < 1e-16);
        let t = c(0.0, 1.7);
        assert!((delta(&a.translate(t), &b.translate(-t)) - delta(&a, &b)).norm() < 1e-15);
    }

    #[test]
    fn g_factor_examples() {
        let ctx = PrecisionContext::STANDARD;
        let g14 = 3.625_609_908_221_908_f64;
        let g = g_factor(&ShiftSet::zeros(3), &ShiftSet::zeros(3), &ctx)
            .unwrap()
            .to_c64();
        assert!((g.re / g14.powi(6) - 1.0).abs() < 1e-14);
        let g = g_factor(&ShiftSet::zeros(1), &ShiftSet::zeros(1), &ctx)
            .unwrap()
            .to_c64();
        assert!((g.re - g14 * g14).abs() < 1e-13);
        let a = ShiftSet::new(vec![c(0.1, 2.0), c(-0.2, 0.0)]).unwrap();
        let b = ShiftSet::new(vec![c(0.0, -1.0), c(0.05, 0.3)]).unwrap();
        let direct: Complex64 = a
            .values()
            .iter()
            .chain(b.values())
            .map(|v| crate::special::gamma((0.5 + v) / 2.0).unwrap())
            .product();
        let g = g_factor(&a, &b, &ctx).unwrap().to_c64();
        assert!((g - direct).norm() < 1e-13 * direct.norm());
    }

    #[test]
    fn swap_term_enumeration() {
        for (k, n) in [(1usize, 2usize), (2, 6), (3, 20), (4, 70)] {
            let a = ShiftSet::staggered(k, 0.01, 1.0);
            let b = ShiftSet::staggered(k, 0.01, 1.1);
            let terms = swap_terms(&a, &b).unwrap();
            assert_eq!(terms.len(), n);
            assert_eq!((&terms[0].x, &terms[0].y), (&a, &b));
            let last = terms.last().unwrap();
            assert_eq!((&last.x, &last.y), (&b.negate(), &a.negate()));
            for t in &terms {
                assert_eq!(t.s.len(), t.t.len());
                assert_eq!((t.x.len(), t.y.len()), (k, k));
            }
        }
        let a = ShiftSet::zeros(2);
        assert!(swap_terms(&a, &ShiftSet::zeros(3)).is_err());
    }

    #[test]
    fn q_single_k1_collapses() {
        let ctx = PrecisionContext::STANDARD;
        let (a, b) = (0.01, 0.02);
        let x = ShiftSet::real(&[a]).unwrap();
        let y = ShiftSet::real(&[b]).unwrap();
        let q = 7u64;
        let v = q_single(&x, &y, q, 0.0, &ctx).unwrap().to_c64();
        let pf = q as f64;
        let bq = 1.0 / (1.0 - pf.powf(-1.0 - a - b));
        let expect = (pf / std::f64::consts::PI).powf((a + b) / 2.0)
            * crate::special::gamma(c((0.5 + a) / 2.0, 0.0)).unwrap()
            * crate::special::gamma(c((0.5 + b) / 2.0, 0.0)).unwrap()
            * crate::special::zeta(c(1.0 + a + b, 0.0)).unwrap()
            / bq;
        assert!((v - expect).norm() < 1e-11 * expect.norm(), "{v} {expect}");
        assert!(matches!(
            q_single(&x, &x.negate(), q, 0.0, &ctx),
            Err(Error::DegenerateShifts(_))
        ));
    }

    #[test]
    fn q_total_k1_by_hand() {
        // two terms: Q({a},{b}) + Q({-b},{-a})
        let ctx = PrecisionContext::new(30).unwrap();
        let a = ShiftSet::real(&[0.01]).unwrap();
        let b = ShiftSet::real(&[0.02]).unwrap();
        let q = 5;
        let v = q_total(&a, &b, q, 0.0, &ctx).unwrap().to_c64();
        let one = |x: f64, y: f64| {
            let pf = 5.0f64;
            (pf / std::f64::consts::PI).powf((x + y) / 2.0)
                * crate::special::gamma(c((0.5 + x) / 2.0, 0.0)).unwrap().re
                * crate::special::gamma(c((0.5 + y) / 2.0, 0.0)).unwrap().re
                * crate::special::zeta(c(1.0 + x + y, 0.0)).unwrap().re
                * (1.0 - pf.powf(-1.0 - x - y))
        };
        let expect = one(0.01, 0.02) + one(-0.02, -0.01);
        assert!((v.re - expect).abs() < 1e-9 * expect.abs(), "{v} {expect}");
    }

    #[test]
    fn p3_coefficients_and_integral() {
        let p = p3_published();
        assert_eq!(p.coefficients[9], 0.000005708);
        assert_eq!(p.coefficients[0], 0.9165);
        // exact antiderivative of e^u P(u - c): e^u sum_k (-1)^k P^(k)(u - c)
        let t = 2.35e6f64;
        let c0 = std::f64::consts::TAU.ln();
        let mut d = p;
        let mut s = 0.0;
        for k in 0..10 {
            s += if k % 2 == 0 { 1.0 } else { -1.0 } * d.eval(t.ln() - c0);
            d = d.derivative();
        }
        let exact = t * s;
        let v = p3_integral(t).unwrap();
        assert!((v - exact).abs() < 1e-10 * exact);
        assert!((v - 3_317_437_762_612.4).abs() < 1e-3 * v);
    }

    #[test]
    fn a3_and_leading_term() {
        let a = a3(DEFAULT_CUTOFF);
        assert!((a.value.re - 0.049_321_7).abs() < 2e-6, "{}", a.value.re);
        let ratio = 42.0 * a.value.re / factorial(9);
        assert!((ratio / 5.708e-6 - 1.0).abs() < 0.01);
        let t = 2.35e6f64;
        let lead = ratio * t * t.ln().powi(9);
        assert!((lead / 4.22e11 - 1.0).abs() < 0.01, "{lead}");
        let a2 = a3(2 * DEFAULT_CUTOFF);
        assert!((a2.value.re - a.value.re).abs() < 1e-5);
        assert!((a2.value.re / a.value.re).ln().abs() <= a.tail_bound);
    }

    #[test]
    fn leading_asymptotic_local_factor() {
        let q = 1009u64;
        let x = 1.0 / q as f64;
        let expect = 42.0 * a3(DEFAULT_CUTOFF).value.re * (1.0 - x).powi(5) / (1.0 + 4.0 * x + x * x)
            * (q as f64).ln().powi(9)
            / factorial(9);
        assert!((leading_asymptotic(q).unwrap() - expect).abs() < 1e-12 * expect);
        assert_eq!(leading_asymptotic(10).unwrap(), 0.0);
    }

    // Confluent value against the leading asymptotic at q = 1009, 10007,
    // 100003. The ratio is 0.70, 1.67, 1.83: lower-order terms still
    // dominate and the ratio has not started to move back toward 1.
    #[test]
    fn zero_shift_against_leading_term() {
        let ctx = PrecisionContext::EXTENDED;
        let settings = PredictorSettings::default();
        let mut ratios = Vec::new();
        for q in [1009u64, 10007, 100003] {
            let v = predicted_sixth_moment(q, &settings, &ctx).unwrap();
            assert!(v.mean > 0.0, "q={q}");
            assert!(v.extrapolation_error < 1e-6, "q={q}: {}", v.extrapolation_error);
            assert!(v.imaginary_residue < 1e-15, "q={q}: {}", v.imaginary_residue);
            ratios.push(v.mean / leading_asymptotic(q).unwrap());
        }
        let expect = [0.699, 1.671, 1.827];
        for (r, e) in ratios.iter().zip(expect) {
            assert!((r - e).abs() < 2e-3, "{ratios:?}");
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn shift() -> impl Strategy<Value = Complex64> {
        (-0.2..0.2f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
    }

    proptest! {
        #[test]
        fn delta_is_translation_invariant(
            a in prop::collection::vec(shift(), 3),
            b in prop::collection::vec(shift(), 3),
            t in -5.0..5.0f64,
        ) {
            let a = ShiftSet::new(a).unwrap();
            let b = ShiftSet::new(b).unwrap();
            let it = Complex64::new(0.0, t);
            prop_assert!((delta(&a, &b) - delta(&a.translate(it), &b.translate(-it))).norm() < 1e-12);
        }
    }
}
