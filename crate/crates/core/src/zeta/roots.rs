use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::qpoly::{self, QPoly};
use super::RationalFunctionZ;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Zero,
    Pole,
}

/// One reciprocal zero or pole `λ` and its weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootWeight {
    pub side: Side,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
    /// `round(2 log_q |λ|)`.
    pub weight: i64,
    /// `| |λ| - q^(w/2) |`.
    pub residual: f64,
    /// `|F(λ)|` for the square-free factor `F` that `λ` was refined on.
    pub poly_residual: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightReport {
    pub q: u64,
    pub tolerance: f64,
    pub roots: Vec<RootWeight>,
    pub pass: bool,
}

impl WeightReport {
    /// Weights with multiplicity, zeros and poles together, ascending.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self
            .roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.weight, r.multiplicity))
            .collect();
        w.sort_unstable();
        w
    }
}

/// Finds every reciprocal zero and pole of `r` numerically and checks that
/// `|λ| = q^(w/2)` for an integer `w >= 0`, to relative tolerance `tol`.
pub fn weil_weight_check(r: &RationalFunctionZ, q: u64, tol: f64) -> Result<WeightReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let mut roots = Vec::new();
    for (side, coeffs) in [(Side::Zero, r.numerator()), (Side::Pole, r.denominator())] {
        let rev: Vec<BigInt> = RationalFunctionZ::reversed(coeffs);
        for (factor, mult) in qpoly::square_free(&qpoly::from_ints(&rev)) {
            for lambda in polished_roots(&factor)? {
                roots.push(weigh(side, lambda, &factor, mult, q));
            }
        }
    }
    roots.sort_by(|a, b| {
        a.side
            .cmp(&b.side)
            .then(a.magnitude.total_cmp(&b.magnitude))
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    let pass = roots
        .iter()
        .all(|x| x.weight >= 0 && x.residual <= tol * (q as f64).powf(x.weight as f64 / 2.0));
    Ok(WeightReport {
        q,
        tolerance: tol,
        roots,
        pass,
    })
}

fn weigh(side: Side, lambda: Complex64, factor: &QPoly, mult: usize, q: u64) -> RootWeight {
    let qf = q as f64;
    let magnitude = lambda.norm();
    let weight = (2.0 * magnitude.ln() / qf.ln()).round() as i64;
    let residual = (magnitude - qf.powf(weight as f64 / 2.0)).abs();
    let scale = magnitude.max(1.0);
    let clean = |x: f64| if x.abs() <= 1e-12 * scale { 0.0 } else { x };
    RootWeight {
        side,
        re: clean(lambda.re),
        im: clean(lambda.im),
        magnitude,
        weight,
        residual,
        poly_residual: eval(&to_f64(factor), lambda).norm(),
        multiplicity: mult,
    }
}

fn to_f64(p: &QPoly) -> Vec<f64> {
    p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

fn eval(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn eval_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        df = df * z + f;
        f = f * z + a;
    }
    (f, df)
}

/// Roots of a monic square-free polynomial: Aberth iteration, then Newton
/// polishing.
fn polished_roots(p: &QPoly) -> Result<Vec<Complex64>> {
    let c = to_f64(p);
    let m = c.len() - 1;
    if m == 1 {
        return Ok(vec![Complex64::new(-c[0], 0.0)]);
    }
    let radius = 1.0 + c[..m].iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut biggest = 0.0f64;
        for k in 0..m {
            let (f, df) = eval_with_derivative(&c, z[k]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            biggest = biggest.max(step.norm() / z[k].norm().max(1.0));
        }
        if biggest <= 1e-15 {
            converged = true;
            break;
        }
    }
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (f, df) = eval_with_derivative(&c, *root);
            if df.norm() == 0.0 {
                break;
            }
            *root -= f / df;
        }
    }
    let sane = z.iter().all(|r| r.re.is_finite() && r.im.is_finite());
    let distinct = (0..m).all(|i| (i + 1..m).all(|j| (z[i] - z[j]).norm() > 1e-9));
    if !(sane && distinct) || (!converged && !small_residuals(&c, &z)) {
        return Err(Error::RootFinding(describe(p)));
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

fn small_residuals(c: &[f64], z: &[Complex64]) -> bool {
    z.iter().all(|&r| {
        let scale: f64 = c
            .iter()
            .enumerate()
            .map(|(i, a)| a.abs() * r.norm().powi(i as i32))
            .sum();
        eval(c, r).norm() <= 1e-9 * scale.max(1.0)
    })
}

fn describe(p: &QPoly) -> String {
    let terms: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("[{}] (ascending)", terms.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(num: &[i64], den: &[i64], q: u64) -> WeightReport {
        let r = RationalFunctionZ::from_i64(num, den).unwrap();
        weil_weight_check(&r, q, 1e-6).unwrap()
    }

    #[test]
    fn weight_examples() {
        let w = check(&[1], &[1, -2], 2);
        assert!(w.pass);
        assert_eq!(w.roots.len(), 1);
        assert_eq!(w.roots[0].side, Side::Pole);
        assert_eq!(w.roots[0].weight, 2);
        assert!(w.roots[0].residual < 1e-12);

        let w = check(&[1, -1], &[1, -2], 2);
        assert!(w.pass);
        assert_eq!(
            w.roots.iter().map(|r| (r.side, r.weight)).collect::<Vec<_>>(),
            vec![(Side::Zero, 0), (Side::Pole, 2)]
        );

        let w = check(&[1], &[1], 2);
        assert!(w.pass);
        assert!(w.roots.is_empty());
    }

    #[test]
    fn complex_and_repeated_roots() {
        // 1 + 2T^2: λ = ±i√2, weight 1
        let w = check(&[1, 0, 2], &[1, -2], 2);
        assert!(w.pass);
        assert_eq!(w.weights(), vec![1, 1, 2]);
        // 1/(1 - T)^3
        let w = check(&[1], &[1, -3, 3, -1], 2);
        assert_eq!(w.roots.len(), 1);
        assert_eq!(w.roots[0].multiplicity, 3);
        assert_eq!(w.weights(), vec![0, 0, 0]);
        // 1/(1 - T^3): cube roots of unity
        let w = check(&[1], &[1, 0, 0, -1], 4);
        assert!(w.pass);
        assert_eq!(w.weights(), vec![0, 0, 0]);
    }

    #[test]
    fn non_weil_numbers_fail() {
        // λ = 3 is not a Weil 2-integer
        let w = check(&[1], &[1, -3], 2);
        assert!(!w.pass);
        // λ = 2 has weight 1 relative to q = 4
        let r = RationalFunctionZ::from_i64(&[1], &[1, -2]).unwrap();
        assert!(weil_weight_check(&r, 4, 1e-6).unwrap().pass);
        assert!(weil_weight_check(&r, 4, 0.0).is_err());
    }
}
