use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// `z_0 + z_1 T + ... + z_B T^B` with exact rational coefficients, `z_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.first() != Some(&BigRational::one()) {
            return Err(Error::InvalidParameter(
                "series must have constant term 1".into(),
            ));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// `B`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }
}

/// `exp(sum N_k T^k / k)` through order `B = counts.len()`, from
/// `k z_k = sum_{j=1..k} N_j z_{k-j}`.
pub fn series_from_counts(counts: &[u64]) -> TruncatedSeries {
    let mut z: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=counts.len() {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &z[k - j] * BigRational::from_integer(BigInt::from(counts[j - 1]));
        }
        z.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    TruncatedSeries { coeffs: z }
}
