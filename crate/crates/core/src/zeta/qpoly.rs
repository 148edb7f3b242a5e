//! Dense univariate polynomials over Q, coefficients in ascending order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn from_ints(p: &[BigInt]) -> QPoly {
    let mut out: QPoly = p.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    trim(&mut out);
    out
}

pub(crate) fn degree(p: &QPoly) -> Option<usize> {
    p.len().checked_sub(1)
}

pub(crate) fn derivative(p: &QPoly) -> QPoly {
    let mut out: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn monic(p: &QPoly) -> QPoly {
    match p.last() {
        Some(lead) => p.iter().map(|c| c / lead).collect(),
        None => Vec::new(),
    }
}

/// Monic gcd.
pub(crate) fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Scales `p` so that its constant term is 1.
pub(crate) fn unit_constant(p: &QPoly) -> QPoly {
    let c = &p[0];
    p.iter().map(|x| x / c).collect()
}

/// Square-free decomposition (Yun): returns `(factor, multiplicity)` with
/// monic, pairwise coprime, square-free factors of positive degree.
pub(crate) fn square_free(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    if degree(f).unwrap_or(0) == 0 {
        return out;
    }
    let f = monic(f);
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = div_rem(&f, &a0).0;
    let mut c = div_rem(&df, &a0).0;
    let mut d: QPoly = sub(&c, &derivative(&b));
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = div_rem(&b, &a).0;
        c = div_rem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

pub(crate) fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let mut out: QPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

#[cfg(test)]
pub(crate) fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}
