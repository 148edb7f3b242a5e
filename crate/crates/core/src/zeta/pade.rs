use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::{self, QPoly};
use super::{RationalFunctionZ, TruncatedSeries};
use crate::{Error, Result};

/// The rational function `P/Q` with `deg P <= dn`, `deg Q <= dd`,
/// `P(0) = Q(0) = 1` agreeing with `s` through `T^(dn + dd)`.
///
/// The denominator solves the exact linear system
/// `sum_{i=0..dd} q_i z_{j-i} = 0` for `j = dn+1 .. dn+dd` by fraction-free
/// elimination; free unknowns of a singular system are set to zero.
pub fn pade_reconstruct(s: &TruncatedSeries, dn: usize, dd: usize) -> Result<RationalFunctionZ> {
    let needed = dn + dd + 1;
    if needed > s.order() {
        return Err(Error::InsufficientTerms {
            needed,
            have: s.order(),
        });
    }
    let z = s.coeffs();
    let zero = BigRational::zero();
    let at = |i: isize| -> &BigRational {
        if i < 0 {
            &zero
        } else {
            &z[i as usize]
        }
    };
    // row j: sum_{i=1..dd} q_i z_{j-i} = -z_j
    let rows: Vec<Vec<BigRational>> = (dn + 1..=dn + dd)
        .map(|j| {
            let mut row: Vec<BigRational> =
                (1..=dd).map(|i| at(j as isize - i as isize).clone()).collect();
            row.push(-z[j].clone());
            row
        })
        .collect();
    let q_tail = solve(rows, dd).ok_or(Error::NoSolution { dn, dd })?;
    let mut q: QPoly = vec![BigRational::one()];
    q.extend(q_tail);
    let mut p: QPoly = (0..=dn)
        .map(|k| {
            (0..=k.min(dd))
                .map(|i| &q[i] * &z[k - i])
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    qpoly::trim(&mut p);
    qpoly::trim(&mut q);
    RationalFunctionZ::from_rational(p, q, dn, dd)
}

/// Solves an augmented system over Q: rows are cleared to integers, reduced
/// to echelon form by Bareiss elimination, then back-substituted exactly.
fn solve(rows: Vec<Vec<BigRational>>, nvars: usize) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        for i in r + 1..nrows {
            for j in c + 1..=nvars {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (row, &c) in pivots.iter().enumerate().rev() {
        let mut acc = BigRational::from_integer(m[row][nvars].clone());
        for j in c + 1..nvars {
            acc -= BigRational::from_integer(m[row][j].clone()) * &x[j];
        }
        x[c] = acc / BigRational::from_integer(m[row][c].clone());
    }
    Some(x)
}
