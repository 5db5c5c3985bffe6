use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

fn cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Exact Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rational {
    let mut b = cache().lock().expect("bernoulli cache");
    while b.len() <= n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = b.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(&binom * bj.numer()) / bj.denom();
            binom *= m + 1 - j;
            binom /= j + 1;
        }
        // binom is now C(m+1, m)
        b.push(-acc / binom);
    }
    b[n].clone()
}

/// `B_n` rounded to `prec` bits.
pub fn bernoulli_float(n: usize, prec: u32) -> Float {
    Float::with_val(prec, &bernoulli(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), Rational::from(0));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }
}
