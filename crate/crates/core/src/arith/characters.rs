use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{factorize, gcd};
use crate::error::{Error, Result};

const NO_INDEX: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// cyclic group mod p^e, p odd
    Odd { p: u64, e: u32 },
    /// the <-1> factor of (Z/2^e)^*, e >= 2
    TwoSign { e: u32 },
    /// the <5> factor of (Z/2^e)^*, e >= 3
    TwoFive,
}

#[derive(Debug)]
struct Component {
    kind: Kind,
    modulus: u64,
    order: u64,
    dlog: Vec<u32>,
}

#[derive(Debug)]
struct GroupData {
    q: u64,
    comps: Vec<Component>,
    exponent: u64,
    two_exact: bool,
    roots: Vec<Complex64>,
}

/// The character group of `(Z/qZ)^*`, built from its CRT decomposition.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    data: Arc<GroupData>,
}

/// A character mod q given by an exponent vector over the CRT generators.
#[derive(Clone)]
pub struct DirichletCharacter {
    data: Arc<GroupData>,
    exps: Vec<u64>,
}

fn primitive_root_mod_p(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let f = factorize(p - 1);
    (2..p)
        .find(|&g| f.primes().all(|r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("primitive root exists")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn cyclic_dlog(modulus: u64, g: u64, order: u64) -> Vec<u32> {
    let mut dlog = vec![NO_INDEX; modulus as usize];
    let mut x = 1u64;
    for k in 0..order {
        dlog[x as usize] = k as u32;
        x = x * g % modulus;
    }
    dlog
}

impl CharacterGroup {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        assert!(q < u32::MAX as u64, "modulus too large for character tables");
        let mut comps = Vec::new();
        let mut two_exact = false;
        for (p, e) in factorize(q).factors {
            let pe = p.pow(e);
            if p == 2 {
                match e {
                    1 => two_exact = true,
                    2 => comps.push(Component {
                        kind: Kind::TwoSign { e },
                        modulus: 4,
                        order: 2,
                        dlog: vec![NO_INDEX, 0, NO_INDEX, 1],
                    }),
                    _ => {
                        let half = pe / 4;
                        let mut sign = vec![NO_INDEX; pe as usize];
                        let mut five = vec![NO_INDEX; pe as usize];
                        let mut x = 1u64;
                        for b in 0..half {
                            sign[x as usize] = 0;
                            five[x as usize] = b as u32;
                            let y = pe - x;
                            sign[y as usize] = 1;
                            five[y as usize] = b as u32;
                            x = x * 5 % pe;
                        }
                        comps.push(Component {
                            kind: Kind::TwoSign { e },
                            modulus: pe,
                            order: 2,
                            dlog: sign,
                        });
                        comps.push(Component {
                            kind: Kind::TwoFive,
                            modulus: pe,
                            order: half,
                            dlog: five,
                        });
                    }
                }
            } else {
                let mut g = primitive_root_mod_p(p);
                if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
                    g += p;
                }
                let order = pe / p * (p - 1);
                comps.push(Component {
                    kind: Kind::Odd { p, e },
                    modulus: pe,
                    order,
                    dlog: cyclic_dlog(pe, g, order),
                });
            }
        }
        let exponent = comps.iter().fold(1, |l, c| lcm(l, c.order));
        let roots = (0..exponent)
            .map(|j| {
                let x = TAU * j as f64 / exponent as f64;
                Complex64::new(x.cos(), x.sin())
            })
            .collect();
        Self {
            data: Arc::new(GroupData {
                q,
                comps,
                exponent,
                two_exact,
                roots,
            }),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.data.q
    }

    /// Number of characters, `phi(q)`.
    pub fn order(&self) -> u64 {
        self.data.comps.iter().map(|c| c.order).product()
    }

    /// Exponent of the group (lcm of component orders).
    pub fn exponent(&self) -> u64 {
        self.data.exponent
    }

    pub fn character(&self, exps: Vec<u64>) -> Result<DirichletCharacter> {
        if exps.len() != self.data.comps.len() || exps.iter().zip(&self.data.comps).any(|(k, c)| *k >= c.order) {
            return Err(Error::InvalidInput("exponent vector out of range".into()));
        }
        Ok(DirichletCharacter {
            data: self.data.clone(),
            exps,
        })
    }

    pub fn principal(&self) -> DirichletCharacter {
        DirichletCharacter {
            data: self.data.clone(),
            exps: vec![0; self.data.comps.len()],
        }
    }

    /// All `phi(q)` characters, exponent vectors in lexicographic order.
    pub fn characters(&self) -> Vec<DirichletCharacter> {
        let orders: Vec<u64> = self.data.comps.iter().map(|c| c.order).collect();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut exps = vec![0u64; orders.len()];
        loop {
            out.push(DirichletCharacter {
                data: self.data.clone(),
                exps: exps.clone(),
            });
            let mut i = orders.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
    }

    pub fn even_primitive(&self) -> Vec<DirichletCharacter> {
        if self.data.two_exact {
            return Vec::new();
        }
        self.characters()
            .into_iter()
            .filter(|c| c.is_primitive() && c.is_even())
            .collect()
    }

    pub fn count_even_primitive(&self) -> u64 {
        if self.data.two_exact {
            return 0;
        }
        let orders: Vec<u64> = self.data.comps.iter().map(|c| c.order).collect();
        let total: u64 = orders.iter().product();
        let probe = DirichletCharacter {
            data: self.data.clone(),
            exps: vec![0; orders.len()],
        };
        let minus_one = probe.indices(self.data.q.saturating_sub(1));
        let mut count = 0;
        let mut exps = vec![0u64; orders.len()];
        for _ in 0..total {
            let prim = exps.iter().zip(&self.data.comps).all(|(&k, c)| c.primitive(k));
            if prim {
                let ang = match &minus_one {
                    Some(ind) => self.data.angle(&exps, ind),
                    None => 0,
                };
                if ang == 0 {
                    count += 1;
                }
            }
            for i in (0..orders.len()).rev() {
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
        count
    }
}

impl Component {
    fn primitive(&self, k: u64) -> bool {
        match self.kind {
            Kind::Odd { p, e } => {
                if e == 1 {
                    k != 0
                } else {
                    k % p != 0
                }
            }
            Kind::TwoSign { e } => e != 2 || k == 1,
            Kind::TwoFive => k % 2 == 1,
        }
    }
}

impl GroupData {
    fn angle(&self, exps: &[u64], ind: &[u64]) -> u64 {
        let l = self.exponent;
        let mut a: u128 = 0;
        for ((k, i), c) in exps.iter().zip(ind).zip(&self.comps) {
            a += (*k as u128) * (*i as u128) * ((l / c.order) as u128);
        }
        (a % l as u128) as u64
    }
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.data.q
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    fn indices(&self, n: u64) -> Option<Vec<u64>> {
        if self.data.two_exact && n % 2 == 0 {
            return None;
        }
        let mut out = Vec::with_capacity(self.data.comps.len());
        for c in &self.data.comps {
            let i = c.dlog[(n % c.modulus) as usize];
            if i == NO_INDEX {
                return None;
            }
            out.push(i as u64);
        }
        Some(out)
    }

    /// `chi(n) = e(angle / exponent)`, or `None` when `gcd(n, q) > 1`.
    pub fn angle(&self, n: u64) -> Option<u64> {
        self.indices(n).map(|ind| self.data.angle(&self.exps, &ind))
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        match self.angle(n) {
            Some(a) => self.data.roots[a as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn eval_signed(&self, n: i64) -> Complex64 {
        let q = self.data.q as i64;
        self.eval(n.rem_euclid(q) as u64)
    }

    /// Values `chi(0), ..., chi(q-1)`.
    pub fn table(&self) -> Vec<Complex64> {
        (0..self.data.q).map(|n| self.eval(n)).collect()
    }

    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.data.comps)
            .fold(1, |l, (&k, c)| lcm(l, c.order / gcd(k, c.order)))
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&k| k == 0)
    }

    pub fn is_even(&self) -> bool {
        self.data.q <= 2 || self.angle(self.data.q - 1) == Some(0)
    }

    pub fn is_primitive(&self) -> bool {
        !self.data.two_exact && self.exps.iter().zip(&self.data.comps).all(|(&k, c)| c.primitive(k))
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .exps
            .iter()
            .zip(&self.data.comps)
            .map(|(&k, c)| (c.order - k) % c.order)
            .collect();
        Self {
            data: self.data.clone(),
            exps,
        }
    }

    /// `tau(chi) = sum_a chi(a) e(a/q)`.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.data.q as u128;
        let l = self.data.exponent as u128;
        let lq = l * q;
        let mut s = Complex64::new(0.0, 0.0);
        for a in 1..self.data.q {
            if let Some(ang) = self.angle(a) {
                let num = (ang as u128 * q + a as u128 * l) % lq;
                let x = TAU * (num as f64 / lq as f64);
                s += Complex64::new(x.cos(), x.sin());
            }
        }
        if self.data.q == 1 {
            s = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Root number: `tau/sqrt(q)` for even, `tau/(i sqrt(q))` for odd primitive characters.
    pub fn epsilon(&self) -> Result<Complex64> {
        if !self.is_primitive() {
            return Err(Error::Imprimitive);
        }
        let e = self.gauss_sum() / (self.data.q as f64).sqrt();
        Ok(if self.is_even() {
            e
        } else {
            e * Complex64::new(0.0, -1.0)
        })
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}{:?}", self.data.q, self.exps)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.data.q == other.data.q && self.exps == other.exps
    }
}
