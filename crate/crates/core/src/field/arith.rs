//! Packed arithmetic in F_p[t]/(g).
//!
//! An element is stored as the integer `sum c_i p^i` of its coefficient
//! vector. Small fields get log/antilog tables (with Zech logarithms for odd
//! characteristic); larger ones fall back to schoolbook multiplication, with
//! a carry-less path when p = 2.

use super::fp_poly::prime_factors;

/// Fields up to this many elements use lookup tables.
pub(crate) const TABLE_LIMIT: u64 = 1 << 23;

const NONE: u32 = u32::MAX;

pub(crate) struct Arith {
    pub p: u32,
    pub deg: u32,
    pub order: u64,
    pub modulus: Vec<u32>,
    backend: Backend,
}

enum Backend {
    Tables(Tables),
    Direct,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// zech[n] = log(1 + g^n), or NONE when 1 + g^n = 0. Empty when p = 2.
    zech: Vec<u32>,
}

impl Arith {
    pub fn new(p: u32, modulus: Vec<u32>) -> Self {
        let deg = (modulus.len() - 1) as u32;
        let order = (p as u64).pow(deg);
        let mut a = Arith {
            p,
            deg,
            order,
            modulus,
            backend: Backend::Direct,
        };
        if order <= TABLE_LIMIT {
            a.backend = Backend::Tables(a.build_tables());
        }
        a
    }

    #[cfg(test)]
    pub fn new_direct(p: u32, modulus: Vec<u32>) -> Self {
        let deg = (modulus.len() - 1) as u32;
        Arith {
            p,
            deg,
            order: (p as u64).pow(deg),
            modulus,
            backend: Backend::Direct,
        }
    }

    pub fn has_tables(&self) -> bool {
        matches!(self.backend, Backend::Tables(_))
    }

    pub fn digits(&self, mut x: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.deg as usize];
        for d in out.iter_mut() {
            *d = (x % self.p as u64) as u32;
            x /= self.p as u64;
        }
        out
    }

    pub fn pack(&self, digits: &[u32]) -> u64 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64)
    }

    fn build_tables(&self) -> Tables {
        let q1 = self.order - 1;
        let g = self.find_primitive();
        let mut exp = Vec::with_capacity(q1 as usize);
        let mut log = vec![NONE; self.order as usize];
        let mut cur = 1u64;
        for i in 0..q1 {
            exp.push(cur as u32);
            log[cur as usize] = i as u32;
            cur = self.mul_direct(cur, g);
        }
        debug_assert_eq!(cur, 1);
        let zech = if self.p == 2 {
            Vec::new()
        } else {
            exp.iter()
                .map(|&e| {
                    let one_plus = self.add_direct(e as u64, 1);
                    if one_plus == 0 {
                        NONE
                    } else {
                        log[one_plus as usize]
                    }
                })
                .collect()
        };
        Tables { exp, log, zech }
    }

    /// The smallest element (by packed value) of multiplicative order q - 1.
    fn find_primitive(&self) -> u64 {
        let q1 = self.order - 1;
        if q1 == 1 {
            return 1;
        }
        let factors = prime_factors(q1);
        (1..self.order)
            .find(|&g| factors.iter().all(|&r| self.pow_direct(g, q1 / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.backend {
            Backend::Tables(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let q1 = self.order - 1;
                let la = t.log[a as usize] as u64;
                let lb = t.log[b as usize] as u64;
                let diff = (lb + q1 - la) % q1;
                let z = t.zech[diff as usize];
                if z == NONE {
                    0
                } else {
                    t.exp[((la + z as u64) % q1) as usize] as u64
                }
            }
            Backend::Direct => self.add_direct(a, b),
        }
    }

    fn add_direct(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.deg {
            let s = (a % p + b % p) % p;
            out += s * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 || a == 0 {
            return a;
        }
        let p = self.p as u64;
        let mut rest = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.deg {
            let d = rest % p;
            out += ((p - d) % p) * place;
            rest /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.backend {
            Backend::Tables(t) => {
                let q1 = self.order - 1;
                let s = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % q1;
                t.exp[s as usize] as u64
            }
            Backend::Direct => self.mul_direct(a, b),
        }
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.backend {
            Backend::Tables(t) => {
                let q1 = self.order - 1;
                let s = (t.log[a as usize] as u128 * (e % q1) as u128) % q1 as u128;
                t.exp[s as usize] as u64
            }
            Backend::Direct => self.pow_direct(a, e),
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.backend {
            Backend::Tables(t) => {
                let q1 = self.order - 1;
                let l = t.log[a as usize] as u64;
                Some(t.exp[((q1 - l) % q1) as usize] as u64)
            }
            Backend::Direct => Some(self.pow_direct(a, self.order - 2)),
        }
    }

    /// Discrete log with respect to the table generator, when tables exist.
    pub fn log(&self, a: u64) -> Option<u64> {
        match &self.backend {
            Backend::Tables(t) if a != 0 => Some(t.log[a as usize] as u64),
            _ => None,
        }
    }

    pub fn exp(&self, l: u64) -> Option<u64> {
        match &self.backend {
            Backend::Tables(t) => Some(t.exp[(l % (self.order - 1)) as usize] as u64),
            Backend::Direct => None,
        }
    }

    fn pow_direct(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul_direct(b, b);
            }
        }
        acc
    }

    fn mul_direct(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return self.mul_binary(a, b);
        }
        let p = self.p as u64;
        let n = self.deg as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce with the monic modulus, top down
        for top in (n..2 * n - 1).rev() {
            let c = prod[top] % p;
            if c == 0 {
                continue;
            }
            let shift = top - n;
            for (j, &m) in self.modulus.iter().enumerate().take(n) {
                prod[shift + j] = (prod[shift + j] + (p - c) * m as u64) % p;
            }
            prod[top] = 0;
        }
        prod[..n]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d)
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let n = self.deg as usize;
        let mut r: u128 = 0;
        let mut x = a;
        let mut i = 0;
        while x != 0 {
            if x & 1 == 1 {
                r ^= (b as u128) << i;
            }
            x >>= 1;
            i += 1;
        }
        let full = self.pack(&self.modulus) as u128;
        for top in (n..2 * n - 1).rev() {
            if (r >> top) & 1 == 1 {
                r ^= full << (top - n);
            }
        }
        r as u64
    }
}

/// x -> x^(p^j) is F_p-linear; this stores it as column images or as a log
/// multiplier.
pub(crate) enum PowerMap {
    Identity,
    LogMultiplier(u64),
    Linear(Vec<u64>),
}

impl PowerMap {
    pub fn new(arith: &Arith, exponent_mod: u64) -> Self {
        // exponent_mod = p^j mod (order - 1), with 1 meaning identity
        if arith.order == 2 || exponent_mod % (arith.order - 1) == 1 % (arith.order - 1) {
            return PowerMap::Identity;
        }
        if arith.has_tables() {
            return PowerMap::LogMultiplier(exponent_mod % (arith.order - 1));
        }
        let p = arith.p as u64;
        let cols = (0..arith.deg)
            .map(|i| arith.pow(p.pow(i), exponent_mod))
            .collect();
        PowerMap::Linear(cols)
    }

    pub fn apply(&self, arith: &Arith, x: u64) -> u64 {
        match self {
            PowerMap::Identity => x,
            PowerMap::LogMultiplier(m) => {
                if x == 0 {
                    return 0;
                }
                let l = arith.log(x).unwrap();
                let q1 = arith.order - 1;
                arith.exp(((l as u128 * *m as u128) % q1 as u128) as u64).unwrap()
            }
            PowerMap::Linear(cols) => {
                if arith.p == 2 {
                    let mut acc = 0u64;
                    let mut bits = x;
                    let mut i = 0;
                    while bits != 0 {
                        if bits & 1 == 1 {
                            acc ^= cols[i];
                        }
                        bits >>= 1;
                        i += 1;
                    }
                    acc
                } else {
                    let p = arith.p as u64;
                    let mut acc = 0u64;
                    let mut rest = x;
                    for &c in cols {
                        let d = rest % p;
                        rest /= p;
                        for _ in 0..d {
                            acc = arith.add(acc, c);
                        }
                    }
                    acc
                }
            }
        }
    }
}
