//! Dense polynomials over a prime field, just enough to find field moduli.
//!
//! Coefficients are stored constant term first. The zero polynomial is the
//! empty vector.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) works
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn rem(a: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p) as u64;
    let p64 = p as u64;
    while r.len() > dg {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p64;
        if c != 0 {
            let shift = top - dg;
            for (j, &gj) in g.iter().enumerate() {
                let sub = c * gj as u64 % p64;
                r[shift + j] = ((r[shift + j] as u64 + p64 - sub) % p64) as u32;
            }
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u32], b: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, g, p)
}

fn pow_mod(base: &[u32], mut e: u64, g: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, g, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, g, p);
        }
        b = mul_mod(&b, &b, g, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Rabin's test for a monic polynomial `g` over F_p.
pub(crate) fn is_irreducible(g: &[u32], p: u32) -> bool {
    let m = g.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let t = vec![0u32, 1];
    // powers[i] = t^(p^i) mod g
    let mut powers = Vec::with_capacity(m + 1);
    powers.push(rem(&t, g, p));
    for i in 1..=m {
        let next = pow_mod(&powers[i - 1], p as u64, g, p);
        powers.push(next);
    }
    if sub(&powers[m], &t, p).iter().any(|&c| c != 0) {
        return false;
    }
    for r in prime_factors(m as u64) {
        let h = sub(&powers[m / r as usize], &t, p);
        let d = gcd(g, &h, p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

/// The smallest monic irreducible polynomial of degree `deg` over F_p, where
/// coefficient sequences are compared lexicographically from the constant
/// term up. Returned with the leading 1 included.
pub(crate) fn smallest_irreducible(p: u32, deg: u32) -> Vec<u32> {
    let m = deg as usize;
    let total = (p as u64).pow(deg);
    // for deg > 1 a zero constant term means t divides g
    let start = if m > 1 { total / p as u64 } else { 0 };
    for idx in start..total {
        // constant term is the most significant digit of idx
        let mut g = vec![0u32; m + 1];
        let mut rest = idx;
        for i in (0..m).rev() {
            g[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        g[m] = 1;
        if is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
