//! Exact integer arithmetic: factorization, multiplicative functions,
//! generalized divisor sums and the Dirichlet character group.

mod characters;
mod primes;
mod shifts;

pub use characters::{CharacterGroup, DirichletCharacter};
pub use primes::{is_prime, primes_up_to, PrimeTable};
pub use shifts::ShiftSet;

use num_complex::Complex64;

/// Prime factorization `n = prod p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Multiplies the factors back together (checked).
    pub fn value(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }
}

/// Factor `n` (1 <= n < 2^63). Trial division by tabulated primes, then
/// Miller-Rabin / Pollard rho for whatever cofactor is left.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize: n must be positive");
    let mut factors = Vec::new();
    let mut m = n;
    let table = PrimeTable::global();
    for &p in table.primes() {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        let limit = table.limit();
        if m < limit.saturating_mul(limit) {
            factors.push((m, 1));
        } else {
            let mut big = Vec::new();
            primes::split_large(m, &mut big);
            big.sort_unstable();
            for p in big {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Factorization { n, factors }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.is_squarefree() {
        if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Number of primitive characters mod q, `sum_{dr=q} mu(d) phi(r)`,
/// evaluated through its multiplicative local values.
pub fn phi_star(q: u64) -> u64 {
    factorize(q)
        .factors
        .iter()
        .map(|&(p, e)| match e {
            1 => p - 2,
            _ => p.pow(e - 2) * (p - 1) * (p - 1),
        })
        .product()
}

/// Number of even primitive characters mod q, counted over the group.
pub fn phi_flat(q: u64) -> u64 {
    CharacterGroup::new(q).count_even_primitive()
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n).factors {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Complete homogeneous symmetric polynomials `h_0..=h_gmax` of `xs`,
/// which are the values `sigma_{-A}(p^g)` when `xs = {p^{-alpha}}`.
pub fn complete_homogeneous(xs: &[Complex64], gmax: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); gmax + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for x in xs {
        for g in 1..=gmax {
            let prev = h[g - 1];
            h[g] += x * prev;
        }
    }
    h
}

/// Generalized divisor sum `sigma_{-A}(n) = sum_{n=m_1..m_K} prod m_j^{-alpha_j}`.
pub fn sigma_shifted(a: &ShiftSet, n: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in factorize(n).factors {
        let lp = (p as f64).ln();
        let xs: Vec<Complex64> = a.values().iter().map(|al| (-al * lp).exp()).collect();
        acc *= complete_homogeneous(&xs, e as usize)[e as usize];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).factors.is_empty());
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(2_350_000).factors, trial_division(2_350_000));
        assert_eq!(factorize(2_350_000).factors, vec![(2, 4), (5, 5), (47, 1)]);
    }

    #[test]
    fn factorize_large_semiprime_and_prime() {
        // 1000003 * 1000033, both beyond the trial-division table
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n).factors, vec![(1_000_003, 1), (1_000_033, 1)]);
        let p = 9_223_372_036_854_775_783u64; // largest prime below 2^63
        assert_eq!(factorize(p).factors, vec![(p, 1)]);
        let n = (1u64 << 62) - 1;
        let f = factorize(n);
        assert_eq!(f.value(), Some(n));
        assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn mobius_and_phi_examples() {
        assert_eq!((mobius(1), euler_phi(1)), (1, 1));
        assert_eq!((mobius(12), euler_phi(12)), (0, 4));
        let brute = (1..=30u64).filter(|&k| gcd(k, 30) == 1).count() as u64;
        assert_eq!((mobius(30), euler_phi(30)), (-1, brute));
    }

    #[test]
    fn phi_star_matches_mobius_convolution() {
        for q in 1..=500u64 {
            let conv: i64 = divisors(q)
                .into_iter()
                .map(|d| mobius(d) as i64 * euler_phi(q / d) as i64)
                .sum();
            assert_eq!(conv, phi_star(q) as i64, "q = {q}");
        }
        assert_eq!(phi_star(1), 1);
        assert_eq!(phi_star(8), 2);
        assert_eq!(phi_star(1009), 1007);
    }

    #[test]
    fn primitive_counts_sum_to_phi() {
        for q in 1..=500u64 {
            let s: u64 = divisors(q).into_iter().map(phi_star).sum();
            assert_eq!(s, euler_phi(q), "q = {q}");
        }
    }

    #[test]
    fn phi_flat_examples() {
        assert_eq!(phi_flat(5), 1);
        assert_eq!(phi_flat(3), 0);
        assert_eq!(phi_flat(1), 1);
        for p in primes_up_to(100).into_iter().filter(|&p| p > 2) {
            assert_eq!(phi_flat(p), (p - 3) / 2, "p = {p}");
        }
        for q in (6..400u64).step_by(4) {
            assert_eq!(phi_flat(q), 0, "q = {q}");
        }
        for q in 1..=300u64 {
            let half = phi_star(q) as f64 / 2.0;
            assert!((half - phi_flat(q) as f64).abs() <= 1.0, "q = {q}");
        }
    }

    #[test]
    fn sigma_examples() {
        let zero3 = ShiftSet::zeros(3);
        assert!((sigma_shifted(&zero3, 8) - 10.0).norm() < 1e-12);
        let a = ShiftSet::new(vec![Complex64::new(0.1, 0.05), Complex64::new(-0.2, 0.0)]).unwrap();
        assert!((sigma_shifted(&a, 1) - 1.0).norm() < 1e-15);

        // brute force over ordered pairs n = m1 m2
        let a = ShiftSet::real(&[0.1, 0.2]).unwrap();
        for n in [6u64, 12, 30, 64, 97] {
            let mut brute = Complex64::new(0.0, 0.0);
            for m1 in divisors(n) {
                let m2 = n / m1;
                brute += (m1 as f64).powf(-0.1) * (m2 as f64).powf(-0.2);
            }
            assert!((sigma_shifted(&a, n) - brute).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn sigma_translation() {
        let a = ShiftSet::new(vec![
            Complex64::new(0.05, 0.3),
            Complex64::new(-0.1, -0.2),
            Complex64::new(0.02, 0.0),
        ])
        .unwrap();
        let t = Complex64::new(0.03, 0.7);
        for n in [2u64, 36, 210, 1024, 9973] {
            let lhs = sigma_shifted(&a.translate(t), n);
            let rhs = sigma_shifted(&a, n) * (-t * (n as f64).ln()).exp();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "n = {n}");
        }
    }
}
