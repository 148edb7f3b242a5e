use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::qpoly::{self, QPoly};
use super::TruncatedSeries;
use crate::{Error, Result};

/// `P(T)/Q(T)` with integer coefficients, `P(0) = Q(0) = 1`, in lowest
/// terms. Coefficients are stored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunctionZ {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

/// Integer coefficient lists as decimal strings, ascending in `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalFunctionData {
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
    pub display: String,
    pub total_degree: usize,
}

impl RationalFunctionZ {
    /// Reduces `num/den` to lowest terms. Both must have constant term 1.
    pub fn new(num: Vec<BigInt>, den: Vec<BigInt>) -> Result<Self> {
        let n = qpoly::from_ints(&num);
        let d = qpoly::from_ints(&den);
        Self::from_rational(n, d, 0, 0)
    }

    pub fn from_i64(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(
            num.iter().map(|&c| BigInt::from(c)).collect(),
            den.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn one() -> Self {
        RationalFunctionZ {
            num: vec![BigInt::one()],
            den: vec![BigInt::one()],
        }
    }

    /// Lowest terms of a quotient over Q; `(dn, dd)` only label errors.
    pub(crate) fn from_rational(n: QPoly, d: QPoly, dn: usize, dd: usize) -> Result<Self> {
        let one = BigRational::one();
        if n.first() != Some(&one) || d.first() != Some(&one) {
            return Err(Error::InvalidParameter(
                "numerator and denominator need constant term 1".into(),
            ));
        }
        let g = qpoly::gcd(&n, &d);
        let n = qpoly::unit_constant(&qpoly::div_rem(&n, &g).0);
        let d = qpoly::unit_constant(&qpoly::div_rem(&d, &g).0);
        let to_int = |p: &QPoly| -> Option<Vec<BigInt>> {
            p.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
        };
        match (to_int(&n), to_int(&d)) {
            (Some(num), Some(den)) => Ok(RationalFunctionZ { num, den }),
            _ => Err(Error::NonInteger { dn, dd }),
        }
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.den
    }

    pub fn deg_num(&self) -> usize {
        self.num.len() - 1
    }

    pub fn deg_den(&self) -> usize {
        self.den.len() - 1
    }

    /// `deg P + deg Q`.
    pub fn total_degree(&self) -> usize {
        self.deg_num() + self.deg_den()
    }

    /// Power series coefficients through `T^order`.
    pub fn expand(&self, order: usize) -> Vec<BigInt> {
        // Q(0) = 1, so c_k = p_k - sum_{i>=1} q_i c_{k-i} stays integral
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut c = self.num.get(k).cloned().unwrap_or_default();
            for (i, qi) in self.den.iter().enumerate().skip(1).take(k) {
                c -= qi * &out[k - i];
            }
            out.push(c);
        }
        out
    }

    /// Whether the expansion equals `s` through its full order.
    pub fn matches(&self, s: &TruncatedSeries) -> bool {
        self.expand(s.order())
            .into_iter()
            .zip(s.coeffs())
            .all(|(a, b)| b.is_integer() && b.numer() == &a)
    }

    /// The counts `N_1..N_kmax` this function encodes: writing
    /// `P = prod (1 - a_i T)` and `Q = prod (1 - b_j T)`,
    /// `N_k = sum b_j^k - sum a_i^k`, from Newton's identities.
    pub fn power_sums(&self, kmax: usize) -> Vec<BigInt> {
        let pn = newton_power_sums(&self.num, kmax);
        let pd = newton_power_sums(&self.den, kmax);
        pd.into_iter().zip(pn).map(|(b, a)| b - a).collect()
    }

    /// Reciprocal roots of `P` (zeros) or `Q` (poles) are the roots of the
    /// reversed polynomial, returned ascending.
    pub(crate) fn reversed(coeffs: &[BigInt]) -> Vec<BigInt> {
        coeffs.iter().rev().cloned().collect()
    }

    pub fn data(&self) -> RationalFunctionData {
        RationalFunctionData {
            numerator: self.num.iter().map(|c| c.to_string()).collect(),
            denominator: self.den.iter().map(|c| c.to_string()).collect(),
            display: self.to_string(),
            total_degree: self.total_degree(),
        }
    }
}

/// `p_k = sum a_i^k` for `1 + c_1 T + ... = prod (1 - a_i T)`, using
/// `p_k = -k c_k - sum_{i=1}^{k-1} c_i p_{k-i}`.
fn newton_power_sums(c: &[BigInt], kmax: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut v = -c.get(k).cloned().unwrap_or_default() * BigInt::from(k);
        for i in 1..k {
            if let Some(ci) = c.get(i) {
                v -= ci * &p[k - i - 1];
            }
        }
        p.push(v);
    }
    p
}

fn fmt_poly(c: &[BigInt]) -> String {
    let mut s = String::new();
    for (i, a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mag = a.abs();
        if s.is_empty() {
            if a.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if a.is_negative() { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{i}"),
        };
        if i == 0 || !mag.is_one() {
            s.push_str(&mag.to_string());
        }
        s.push_str(&mono);
    }
    s
}

impl fmt::Display for RationalFunctionZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_poly(&self.num);
        if self.deg_den() == 0 {
            return f.write_str(&n);
        }
        let n = if self.deg_num() == 0 { n } else { format!("({n})") };
        write!(f, "{n}/({})", fmt_poly(&self.den))
    }
}
