//! Zeta series, rational reconstruction and Weil weights.

mod pade;
pub(crate) mod qpoly;
mod rational;
mod roots;
mod series;

use std::time::Instant;

use serde::Serialize;

pub use pade::pade_reconstruct;
pub use rational::{RationalFunctionData, RationalFunctionZ};
pub use roots::{weil_weight_check, RootWeight, Side, WeightReport};
pub use series::{series_from_counts, TruncatedSeries};

use crate::count::partial_count;
use crate::poly::VarietySpec;
use crate::{Config, Error, Result};

pub const DEFAULT_HOLDOUT: usize = 3;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// An accepted reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub function: RationalFunctionZ,
    /// Number of counts the acceptance used.
    pub b_used: usize,
    /// `N_1..N_B`.
    pub counts: Vec<u64>,
    /// The accepted `(dn, dd)`.
    pub split: (usize, usize),
}

/// Degree splits `dn + dd = total`, by increasing `|dn - dd|`, ties with
/// the smaller numerator degree first.
pub fn degree_splits(total: usize) -> Vec<(usize, usize)> {
    let mut splits: Vec<(usize, usize)> = (0..=total).map(|dn| (dn, total - dn)).collect();
    splits.sort_by_key(|&(dn, dd)| (dn.abs_diff(dd), dn));
    splits
}

/// Tries every split with `dn + dd = B - h` on the counts `N_1..N_B` and
/// returns the first candidate reproducing all `B` series terms.
pub fn reconstruct_from_counts(
    counts: &[u64],
    holdout: usize,
) -> Option<(RationalFunctionZ, (usize, usize))> {
    let b = counts.len();
    if holdout == 0 || b < holdout {
        return None;
    }
    let s = series_from_counts(counts);
    degree_splits(b - holdout).into_iter().find_map(|(dn, dd)| {
        let r = pade_reconstruct(&s, dn, dd).ok()?;
        r.matches(&s).then_some((r, (dn, dd)))
    })
}

/// Iterative deepening over `B = 2, 3, ..., max_k`: `next_count(k)` supplies
/// `N_k`. Fails with [`Error::NotConverged`] carrying the counts obtained.
pub fn auto_reconstruct_with(
    mut next_count: impl FnMut(u32) -> Result<u64>,
    max_k: usize,
    holdout: usize,
) -> Result<Reconstruction> {
    if holdout == 0 {
        return Err(Error::InvalidParameter("holdout must be at least 1".into()));
    }
    let mut counts: Vec<u64> = Vec::new();
    let mut cause = None;
    for b in 1..=max_k {
        match next_count(b as u32) {
            Ok(n) => counts.push(n),
            Err(e) => {
                cause = Some(Box::new(e));
                break;
            }
        }
        if b < 2 {
            continue;
        }
        if let Some((function, split)) = reconstruct_from_counts(&counts, holdout) {
            return Ok(Reconstruction {
                function,
                b_used: b,
                counts,
                split,
            });
        }
    }
    Err(Error::NotConverged {
        max_k,
        counts,
        cause,
    })
}

/// [`auto_reconstruct_with`] on the partial counts of `x`.
///
/// ```
/// use partial_zeta::{auto_reconstruct, Config, VarietySpec};
/// let x = VarietySpec::parse(2, 1, &["x1", "x2"], &["x1*x2 - 1"], &[1, 1]).unwrap();
/// let r = auto_reconstruct(&x, 8, 3, &Config::default()).unwrap();
/// assert_eq!(r.function.to_string(), "(1 - T)/(1 - 2T)");
/// ```
pub fn auto_reconstruct(
    x: &VarietySpec,
    max_k: usize,
    holdout: usize,
    cfg: &Config,
) -> Result<Reconstruction> {
    auto_reconstruct_with(|k| partial_count(x, k, cfg), max_k, holdout)
}

/// One row of a degree sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub profile: Vec<u32>,
    pub lcm: u32,
    pub b_used: Option<usize>,
    pub deg_num: Option<usize>,
    pub deg_den: Option<usize>,
    pub total_degree: Option<usize>,
    pub weights: Vec<i64>,
    pub function: Option<String>,
    /// `ok`, `budget`, `not-converged` or `error: ...`.
    pub status: String,
    #[serde(skip)]
    pub wall_ms: f64,
}

pub const SWEEP_CSV_HEADER: [&str; 10] = [
    "profile",
    "D",
    "B_used",
    "deg_num",
    "deg_den",
    "total_degree",
    "weights",
    "function",
    "status",
    "wall_ms",
];

impl SweepRow {
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let join = |v: &[String]| v.join(" ");
        vec![
            join(&self.profile.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
            self.lcm.to_string(),
            opt(self.b_used),
            opt(self.deg_num),
            opt(self.deg_den),
            opt(self.total_degree),
            join(&self.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>()),
            self.function.clone().unwrap_or_default(),
            self.status.clone(),
            format!("{:.3}", self.wall_ms),
        ]
    }
}

/// Reconstructs the partial zeta function of `x` under each profile. Rows
/// that run out of budget or fail to converge are reported, not raised.
pub fn degree_sweep(
    x: &VarietySpec,
    profiles: &[Vec<u32>],
    max_k: usize,
    holdout: usize,
    tol: f64,
    cfg: &Config,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(profiles.len());
    for profile in profiles {
        let xp = x.with_profile(profile.clone())?;
        let start = Instant::now();
        let outcome = auto_reconstruct(&xp, max_k, holdout, cfg).and_then(|rec| {
            let w = weil_weight_check(&rec.function, xp.q(), tol)?;
            Ok((rec, w))
        });
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let mut row = SweepRow {
            profile: profile.clone(),
            lcm: xp.lcm(),
            b_used: None,
            deg_num: None,
            deg_den: None,
            total_degree: None,
            weights: Vec::new(),
            function: None,
            status: String::new(),
            wall_ms,
        };
        match outcome {
            Ok((rec, w)) => {
                row.b_used = Some(rec.b_used);
                row.deg_num = Some(rec.function.deg_num());
                row.deg_den = Some(rec.function.deg_den());
                row.total_degree = Some(rec.function.total_degree());
                row.weights = w.weights();
                row.function = Some(rec.function.to_string());
                row.status = "ok".into();
            }
            Err(Error::BudgetExceeded { .. }) => row.status = "budget".into(),
            Err(Error::NotConverged { cause, .. }) => {
                row.status = match cause.as_deref() {
                    Some(Error::BudgetExceeded { .. }) => "budget".into(),
                    _ => "not-converged".into(),
                }
            }
            Err(e) => row.status = format!("error: {e}"),
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, vars: &[&str], eqs: &[&str], profile: &[u32]) -> VarietySpec {
        VarietySpec::parse(p, 1, vars, eqs, profile).unwrap()
    }

    #[test]
    fn split_order() {
        assert_eq!(degree_splits(0), vec![(0, 0)]);
        assert_eq!(degree_splits(1), vec![(0, 1), (1, 0)]);
        assert_eq!(degree_splits(3), vec![(1, 2), (2, 1), (0, 3), (3, 0)]);
    }

    #[test]
    fn reconstruction_examples() {
        let cfg = Config::default();
        let diag = v(2, &["x1", "x2"], &["x1 - x2"], &[1, 2]);
        let r = auto_reconstruct(&diag, 8, 2, &cfg).unwrap();
        assert_eq!(r.function, RationalFunctionZ::from_i64(&[1], &[1, -2]).unwrap());
        let empty = v(2, &["x"], &["1"], &[1]);
        let r = auto_reconstruct(&empty, 8, 3, &cfg).unwrap();
        assert_eq!(r.function, RationalFunctionZ::one());
        assert_eq!(r.b_used, 3);
        let hyp = v(2, &["x1", "x2"], &["x1*x2 - 1"], &[2, 3]);
        let r = auto_reconstruct(&hyp, 4, 2, &cfg).unwrap();
        assert_eq!(
            r.function,
            RationalFunctionZ::from_i64(&[1, -1], &[1, -2]).unwrap()
        );
    }

    #[test]
    fn non_convergence_reports_counts() {
        let curve = v(2, &["x", "y"], &["y^2 + y + x^3 + 1"], &[1, 1]);
        match auto_reconstruct(&curve, 4, 3, &Config::default()) {
            Err(Error::NotConverged { counts, .. }) => assert_eq!(counts, vec![2, 8, 8, 8]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_examples() {
        let cfg = Config::default();
        let diag = v(2, &["x1", "x2"], &["x1 - x2"], &[1, 1]);
        let rows = degree_sweep(
            &diag,
            &[vec![1, 1], vec![1, 2], vec![1, 3]],
            8,
            3,
            1e-6,
            &cfg,
        )
        .unwrap();
        assert_eq!(
            rows.iter().map(|r| r.total_degree).collect::<Vec<_>>(),
            vec![Some(1); 3]
        );
        let hyp = v(2, &["x1", "x2"], &["x1*x2 - 1"], &[1, 1]);
        let rows = degree_sweep(&hyp, &[vec![1, 1]], 8, 3, 1e-6, &cfg).unwrap();
        assert_eq!(rows[0].total_degree, Some(2));
        assert_eq!(rows[0].weights, vec![0, 2]);
        assert_eq!(rows[0].csv_record().len(), SWEEP_CSV_HEADER.len());
    }
}
