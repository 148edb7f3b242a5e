//! Exact arithmetic in a finite field F_{q^N} = F_p[t]/(g), q = p^s.
//!
//! One ambient field is fixed per computation. Subfields F_{q^e} (e | N) are
//! never built separately; membership is tested by Frobenius fixedness
//! `x^(q^e) = x`, so all coordinates of a point live in the same field and
//! no embedding tables are needed.
//!
//! The modulus `g` is the lexicographically smallest monic irreducible of
//! degree `s*N` over F_p, comparing coefficient sequences from the constant
//! term up. Building the same field twice therefore gives bit-identical
//! descriptors. Arithmetic state is cached per `(p, s*N)`.
//!
//! ```
//! use partial_zeta::field::build_field;
//!
//! let f4 = build_field(2, 1, 2).unwrap();
//! assert_eq!(f4.modulus(), &[1, 1, 1]); // t^2 + t + 1
//! let t = f4.element(&[0, 1]).unwrap();
//! assert_eq!(f4.coeffs(f4.frobenius(t, 1)), vec![1, 1]); // t^2 = t + 1
//! ```

mod arith;
pub(crate) mod fp_poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::{Budget, Error, Result};
use arith::{Arith, PowerMap};

/// An element of some [`FieldDescriptor`], packed as `sum c_i p^i`.
///
/// Elements carry no reference to their field; mixing elements of different
/// fields is a logic error. Use [`FieldDescriptor::coeffs`] to read the
/// coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer `sum c_i p^i`.
    pub fn packed(self) -> u64 {
        self.0
    }
}

/// How [`FieldDescriptor::enumerate_subfield_with`] produces a subfield.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubfieldMethod {
    /// Scan the whole ambient field and keep Frobenius-fixed elements.
    #[default]
    Filter,
    /// Span an F_p-basis of the kernel of `Frob^e - 1`.
    Basis,
}

/// The ambient field F_{q^N} together with its base field data.
#[derive(Clone)]
pub struct FieldDescriptor {
    inner: Arc<Descriptor>,
}

struct Descriptor {
    s: u32,
    n: u32,
    q: u64,
    arith: Arc<Arith>,
    /// Powers r^0..r^(s-1) of the chosen root r of the base-field modulus.
    base_powers: Vec<u64>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p())
            .field("s", &self.s())
            .field("n", &self.n())
            .field("modulus", &self.modulus())
            .finish()
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.s() == other.s() && self.n() == other.n()
    }
}

impl Eq for FieldDescriptor {}

fn arith_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Arith>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Arith>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn shared_arith(p: u32, deg: u32) -> Arc<Arith> {
    let mut cache = arith_cache().lock().unwrap();
    cache
        .entry((p, deg))
        .or_insert_with(|| Arc::new(Arith::new(p, fp_poly::smallest_irreducible(p, deg))))
        .clone()
}

/// `p^e`, or `None` on overflow.
pub(crate) fn checked_pow(p: u64, e: u64) -> Option<u64> {
    let e = u32::try_from(e).ok()?;
    p.checked_pow(e)
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Builds F_{q^N} with q = p^s under the default budget.
pub fn build_field(p: u32, s: u32, n: u32) -> Result<FieldDescriptor> {
    build_field_with(p, s, n, &Budget::default())
}

/// Builds F_{q^N} with q = p^s, refusing fields larger than
/// `budget.max_field_size` elements.
pub fn build_field_with(p: u32, s: u32, n: u32, budget: &Budget) -> Result<FieldDescriptor> {
    if !fp_poly::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if s == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "field exponents must be positive (s = {s}, N = {n})"
        )));
    }
    let deg = s as u64 * n as u64;
    let size = checked_pow(p as u64, deg).filter(|&sz| sz <= budget.max_field_size);
    let Some(_) = size else {
        return Err(Error::BudgetExceeded {
            what: format!("field F_{p}^{deg}"),
            cost: crate::big_pow(p as u64, deg),
            limit: budget.max_field_size,
        });
    };
    let arith = shared_arith(p, deg as u32);
    let q = (p as u64).pow(s);
    let mut desc = Descriptor {
        s,
        n,
        q,
        arith,
        base_powers: vec![1],
    };
    if s > 1 {
        let base = fp_poly::smallest_irreducible(p, s);
        let root = find_base_root(&desc, &base);
        let mut powers = Vec::with_capacity(s as usize);
        let mut cur = 1u64;
        for _ in 0..s {
            powers.push(cur);
            cur = desc.arith.mul(cur, root);
        }
        desc.base_powers = powers;
    }
    Ok(FieldDescriptor {
        inner: Arc::new(desc),
    })
}

/// The lexicographically smallest root of the base modulus inside the
/// ambient field. Roots lie in F_q, which is spanned cheaply.
fn find_base_root(desc: &Descriptor, base_modulus: &[u32]) -> u64 {
    let a = &desc.arith;
    let fq = subfield_by_basis(a, desc.q, 1);
    let mut roots: Vec<u64> = fq
        .into_iter()
        .filter(|&x| {
            let mut acc = 0u64;
            for &c in base_modulus.iter().rev() {
                acc = a.add(a.mul(acc, x), c as u64);
            }
            acc == 0
        })
        .collect();
    roots.sort_by_key(|&x| lex_key(a, x));
    roots[0]
}

/// Digit-reversed packing: integer order equals lexicographic order of the
/// coefficient vector read from the constant term.
fn lex_key(a: &Arith, x: u64) -> u64 {
    let p = a.p as u64;
    let mut rest = x;
    let mut key = 0u64;
    for _ in 0..a.deg {
        key = key * p + rest % p;
        rest /= p;
    }
    key
}

/// All x with x^(q^e) = x, via an F_p-basis of ker(Frob^e - 1).
fn subfield_by_basis(a: &Arith, q: u64, e: u32) -> Vec<u64> {
    let p = a.p as u64;
    let n = a.deg as usize;
    let exponent = pow_mod(q, e as u64, a.order - 1);
    let map = PowerMap::new(a, exponent);
    // rows of the matrix of (Frob^e - 1): image of each basis vector t^i
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let basis = p.pow(i as u32);
            a.digits(a.sub(map.apply(a, basis), basis))
        })
        .collect();
    // kernel of x -> sum x_i rows[i]: row-reduce the transpose system by
    // tracking combinations
    let mut combo: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut v = vec![0u32; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut pivot_row = 0usize;
    for col in 0..n {
        let Some(r) = (pivot_row..n).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, r);
        combo.swap(pivot_row, r);
        let inv = pow_mod(rows[pivot_row][col] as u64, p - 2, p);
        for c in rows[pivot_row].iter_mut() {
            *c = (*c as u64 * inv % p) as u32;
        }
        for c in combo[pivot_row].iter_mut() {
            *c = (*c as u64 * inv % p) as u32;
        }
        for r2 in 0..n {
            if r2 == pivot_row || rows[r2][col] == 0 {
                continue;
            }
            let factor = rows[r2][col] as u64;
            for j in 0..n {
                let sub = factor * rows[pivot_row][j] as u64 % p;
                rows[r2][j] = ((rows[r2][j] as u64 + p - sub) % p) as u32;
                let sub = factor * combo[pivot_row][j] as u64 % p;
                combo[r2][j] = ((combo[r2][j] as u64 + p - sub) % p) as u32;
            }
        }
        pivot_row += 1;
    }
    let kernel: Vec<u64> = combo[pivot_row..].iter().map(|v| a.pack(v)).collect();
    let mut out = vec![0u64];
    for k in kernel {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for &x in &out {
            let mut cur = x;
            for _ in 0..p {
                next.push(cur);
                cur = a.add(cur, k);
            }
        }
        out = next;
    }
    out
}

impl FieldDescriptor {
    /// The characteristic.
    pub fn p(&self) -> u32 {
        self.inner.arith.p
    }

    /// Base exponent: q = p^s.
    pub fn s(&self) -> u32 {
        self.inner.s
    }

    /// Extension degree over F_q.
    pub fn n(&self) -> u32 {
        self.inner.n
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Degree over F_p, equal to `s * N`.
    pub fn degree(&self) -> u32 {
        self.inner.arith.deg
    }

    /// Number of elements, p^(s*N).
    pub fn order(&self) -> u64 {
        self.inner.arith.order
    }

    /// Monic modulus, constant term first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.arith.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with the given power-basis coordinates (shorter input is
    /// zero-padded).
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let deg = self.degree() as usize;
        if coeffs.len() > deg {
            return Err(Error::DimensionMismatch {
                expected: deg,
                got: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.p()) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {bad} is not a residue mod {}",
                self.p()
            )));
        }
        Ok(FieldElement(self.inner.arith.pack(coeffs)))
    }

    /// Power-basis coordinates, length `s * N`, constant term first.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.inner.arith.digits(x.0)
    }

    /// Human-readable form: a residue for prime-field elements, otherwise a
    /// polynomial in `t` with the highest power first.
    pub fn render(&self, x: FieldElement) -> String {
        if let Some(v) = self.to_prime(x) {
            return v.to_string();
        }
        let c = self.coeffs(x);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "t".into(),
                    _ => format!("t^{i}"),
                };
                match (a, i) {
                    (_, 0) => a.to_string(),
                    (1, _) => mono,
                    _ => format!("{a}*{mono}"),
                }
            })
            .collect();
        terms.join(" + ")
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p() as i64) as u64)
    }

    /// Reads `x` as an element of the prime field, if it is one.
    pub fn to_prime(&self, x: FieldElement) -> Option<u32> {
        (x.0 < self.p() as u64).then_some(x.0 as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.inner.arith.add(a.0, b.0))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.inner.arith.sub(a.0, b.0))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.inner.arith.neg(a.0))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.inner.arith.mul(a.0, b.0))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.inner.arith.pow(a.0, e))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn invert(&self, a: FieldElement) -> Option<FieldElement> {
        self.inner.arith.inv(a.0).map(FieldElement)
    }

    /// `x^(q^e)`.
    pub fn frobenius(&self, x: FieldElement, e: u64) -> FieldElement {
        let e = e % self.n() as u64;
        if e == 0 {
            return x;
        }
        let mut acc = x;
        for _ in 0..e {
            acc = self.pow(acc, self.q());
        }
        acc
    }

    /// A reusable `x -> x^(q^e)` map, cheaper than [`Self::frobenius`] in
    /// loops.
    pub fn frobenius_map(&self, e: u64) -> FrobeniusMap {
        let a = &self.inner.arith;
        let exponent = if a.order == 2 {
            1
        } else {
            pow_mod(self.q(), e % self.n() as u64, a.order - 1)
        };
        FrobeniusMap {
            field: self.clone(),
            map: PowerMap::new(a, exponent),
        }
    }

    /// Absolute trace to F_p: `sum_{i < s*N} x^(p^i)`.
    pub fn absolute_trace(&self, x: FieldElement) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut cur = x;
        for _ in 0..self.degree() {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.p() as u64);
        }
        self.to_prime(acc)
            .expect("absolute trace lies in the prime field")
    }

    fn check_divides(&self, e: u32) -> Result<()> {
        if e == 0 || !self.n().is_multiple_of(e) {
            return Err(Error::NotSubfield { e, n: self.n() });
        }
        Ok(())
    }

    /// Whether `x` lies in F_{q^e}; `e` must divide N.
    pub fn in_subfield(&self, x: FieldElement, e: u32) -> Result<bool> {
        self.check_divides(e)?;
        Ok(self.frobenius(x, e as u64) == x)
    }

    /// Canonical ordering key: lexicographic on coefficients from the
    /// constant term.
    pub fn lex_key(&self, x: FieldElement) -> u64 {
        lex_key(&self.inner.arith, x.0)
    }

    /// All elements of the ambient field in canonical order.
    pub fn elements(&self) -> Vec<FieldElement> {
        let mut all: Vec<FieldElement> = (0..self.order()).map(FieldElement).collect();
        all.sort_unstable_by_key(|&x| self.lex_key(x));
        all
    }

    /// The q^e elements of F_{q^e} in canonical order.
    pub fn enumerate_subfield(&self, e: u32) -> Result<Vec<FieldElement>> {
        self.enumerate_subfield_with(e, SubfieldMethod::Filter)
    }

    pub fn enumerate_subfield_with(
        &self,
        e: u32,
        method: SubfieldMethod,
    ) -> Result<Vec<FieldElement>> {
        self.check_divides(e)?;
        let mut out: Vec<FieldElement> = if e == self.n() {
            (0..self.order()).map(FieldElement).collect()
        } else {
            match method {
                SubfieldMethod::Filter => {
                    let frob = self.frobenius_map(e as u64);
                    (0..self.order())
                        .map(FieldElement)
                        .filter(|&x| frob.apply(x) == x)
                        .collect()
                }
                SubfieldMethod::Basis => subfield_by_basis(&self.inner.arith, self.q(), e)
                    .into_iter()
                    .map(FieldElement)
                    .collect(),
            }
        };
        out.sort_unstable_by_key(|&x| self.lex_key(x));
        Ok(out)
    }

    /// Embeds an element of the base field F_q = F_p[a]/(m_s) (given as its
    /// coordinates in powers of `a`) into the ambient field by sending `a`
    /// to the smallest root of m_s.
    pub fn embed_base_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let a = &self.inner.arith;
        let mut acc = 0u64;
        for (&c, &pw) in coeffs.iter().zip(&self.inner.base_powers) {
            for _ in 0..c {
                acc = a.add(acc, pw);
            }
        }
        FieldElement(acc)
    }

    /// Embeds an element of `base` (which must be F_q itself, N = 1).
    pub fn embed_base(&self, base: &FieldDescriptor, c: FieldElement) -> FieldElement {
        debug_assert_eq!(base.n(), 1);
        debug_assert_eq!(base.s(), self.s());
        self.embed_base_coeffs(&base.coeffs(c))
    }
}

/// Precomputed `x -> x^(q^e)` on a fixed field.
pub struct FrobeniusMap {
    field: FieldDescriptor,
    map: PowerMap,
}

impl FrobeniusMap {
    pub fn apply(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.map.apply(&self.field.inner.arith, x.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, s: u32, n: u32) -> FieldDescriptor {
        build_field(p, s, n).unwrap()
    }

    #[test]
    fn modulus_examples() {
        // monic linear polynomials over F_2 in order: t, t + 1
        assert_eq!(f(2, 1, 1).modulus(), &[0, 1]);
        assert_eq!(f(2, 1, 2).modulus(), &[1, 1, 1]);
        let f3 = f(3, 1, 1);
        assert_eq!(f3.order(), 3);
        assert_eq!(f3.modulus().len(), 2);
    }

    #[test]
    fn repeated_builds_are_identical() {
        let a = f(3, 2, 2);
        let b = f(3, 2, 2);
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.inner.base_powers, b.inner.base_powers);
    }

    #[test]
    fn frobenius_examples() {
        let f4 = f(2, 1, 2);
        let t = f4.element(&[0, 1]).unwrap();
        assert_eq!(f4.frobenius(t, 1), f4.element(&[1, 1]).unwrap());
        assert_eq!(f4.frobenius(t, 0), t);
        assert_eq!(f4.frobenius(f4.one(), 1), f4.one());
    }

    #[test]
    fn membership_examples() {
        let f4 = f(2, 1, 2);
        let t = f4.element(&[0, 1]).unwrap();
        assert!(!f4.in_subfield(t, 1).unwrap());
        assert!(f4.in_subfield(f4.one(), 1).unwrap());
        assert!(f4.in_subfield(t, 2).unwrap());
        assert!(matches!(
            f(2, 1, 4).in_subfield(t, 3),
            Err(Error::NotSubfield { e: 3, n: 4 })
        ));
    }

    #[test]
    fn subfield_examples() {
        let f4 = f(2, 1, 2);
        assert_eq!(f4.enumerate_subfield(1).unwrap(), vec![FieldElement(0), FieldElement(1)]);
        assert_eq!(f4.enumerate_subfield(2).unwrap().len(), 4);
        let f16 = f(2, 1, 4);
        let sub = f16.enumerate_subfield(2).unwrap();
        assert_eq!(sub.len(), 4);
        for &a in &sub {
            for &b in &sub {
                assert!(sub.contains(&f16.mul(a, b)));
            }
        }
    }

    #[test]
    fn basis_method_matches_filter() {
        for (p, s, n) in [(2, 1, 6), (3, 1, 4), (2, 2, 3), (5, 1, 2), (3, 2, 2)] {
            let fd = f(p, s, n);
            for e in 1..=n {
                if n % e != 0 {
                    continue;
                }
                let a = fd.enumerate_subfield_with(e, SubfieldMethod::Filter).unwrap();
                let b = fd.enumerate_subfield_with(e, SubfieldMethod::Basis).unwrap();
                assert_eq!(a, b, "p={p} s={s} n={n} e={e}");
                assert_eq!(a.len() as u64, fd.q().pow(e));
            }
        }
    }

    #[test]
    fn base_generator_satisfies_base_modulus() {
        // F_4 = F_2[a]/(a^2 + a + 1) inside F_64
        let fd = f(2, 2, 3);
        let a = fd.embed_base_coeffs(&[0, 1]);
        let lhs = fd.add(fd.add(fd.mul(a, a), a), fd.one());
        assert!(lhs.is_zero());
        assert!(fd.in_subfield(a, 1).unwrap());
        assert!(a != fd.one() && !a.is_zero());
    }

    #[test]
    fn large_field_uses_direct_arithmetic() {
        let fd = f(2, 1, 24);
        assert!(!fd.inner.arith.has_tables());
        let x = fd.element(&[1, 0, 1, 1, 0, 1]).unwrap();
        let inv = fd.invert(x).unwrap();
        assert_eq!(fd.mul(x, inv), fd.one());
        assert_eq!(fd.frobenius(x, 24), x);
        assert_eq!(fd.frobenius_map(5).apply(x), fd.frobenius(x, 5));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_field(4, 1, 1), Err(Error::NotPrime(4))));
        assert!(build_field(2, 0, 1).is_err());
        let tiny = Budget {
            max_tuples: 10,
            max_field_size: 100,
        };
        assert!(matches!(
            build_field_with(2, 1, 7, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn absolute_trace_of_generator() {
        let f4 = f(2, 1, 2);
        let t = f4.element(&[0, 1]).unwrap();
        // t + t^2 = 1
        assert_eq!(f4.absolute_trace(t), 1);
        assert_eq!(f4.absolute_trace(f4.one()), 0);
    }
}
