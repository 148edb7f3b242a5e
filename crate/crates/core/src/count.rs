//! Exhaustive partial point counts.
//!
//! All enumeration in the crate goes through [`Search`]: coordinates are
//! assigned in order, each from its own subfield of one ambient field, and
//! an equation is evaluated as soon as its last variable is assigned. Once
//! no equation is left the remaining coordinates contribute the product of
//! their domain sizes without being visited.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::field::{build_field_with, FieldDescriptor, FieldElement, SubfieldMethod};
use crate::poly::{CompiledPoly, SparsePoly, VarietySpec};
use crate::{big_pow, Config, Error, Result};

/// Largest subfield listing kept in the process-wide cache.
const DOMAIN_CACHE_LIMIT: u64 = 1 << 20;

type DomainKey = (u32, u32, u32, u32, SubfieldMethod);

fn domain_cache() -> &'static Mutex<HashMap<DomainKey, Arc<Vec<FieldElement>>>> {
    static CACHE: OnceLock<Mutex<HashMap<DomainKey, Arc<Vec<FieldElement>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The elements of F_{q^e} inside `field`, in canonical order.
pub(crate) fn subfield_domain(
    field: &FieldDescriptor,
    e: u32,
    method: SubfieldMethod,
) -> Result<Arc<Vec<FieldElement>>> {
    let key = (field.p(), field.s(), field.n(), e, method);
    if let Some(hit) = domain_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let elems = Arc::new(field.enumerate_subfield_with(e, method)?);
    if elems.len() as u64 <= DOMAIN_CACHE_LIMIT {
        domain_cache().lock().unwrap().insert(key, elems.clone());
    }
    Ok(elems)
}

/// A pruned product enumeration over per-coordinate domains.
pub(crate) struct Search {
    field: FieldDescriptor,
    domains: Vec<Arc<Vec<FieldElement>>>,
    /// `checks[i]`: equations whose highest variable is `i`.
    checks: Vec<Vec<CompiledPoly>>,
    /// Some equation is a nonzero constant.
    infeasible: bool,
    /// First level from which no check remains.
    free_from: usize,
    /// `suffix[i]`: product of domain sizes from `i` on.
    suffix: Vec<u64>,
}

impl Search {
    pub(crate) fn new(
        field: &FieldDescriptor,
        equations: &[SparsePoly],
        domains: Vec<Arc<Vec<FieldElement>>>,
    ) -> Self {
        let n = domains.len();
        let mut checks: Vec<Vec<CompiledPoly>> = (0..n).map(|_| Vec::new()).collect();
        let mut infeasible = false;
        for eq in equations {
            let compiled = eq.compile(field);
            match compiled.max_var() {
                Some(i) => checks[i].push(compiled),
                None => infeasible |= !compiled.is_zero(),
            }
        }
        let free_from = checks.iter().rposition(|c| !c.is_empty()).map_or(0, |i| i + 1);
        let mut suffix = vec![1u64; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1].saturating_mul(domains[i].len() as u64);
        }
        Search {
            field: field.clone(),
            domains,
            checks,
            infeasible,
            free_from,
            suffix,
        }
    }

    /// Size of the full product of domains.
    pub(crate) fn tuple_count(&self) -> u128 {
        self.domains
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    fn passes(&self, level: usize, point: &[FieldElement]) -> bool {
        self.checks[level]
            .iter()
            .all(|c| c.eval(&self.field, point).is_zero())
    }

    fn count_from(&self, level: usize, point: &mut [FieldElement]) -> u64 {
        if level >= self.free_from {
            return self.suffix[level];
        }
        let mut total = 0;
        for &x in self.domains[level].iter() {
            point[level] = x;
            if self.passes(level, point) {
                total += self.count_from(level + 1, point);
            }
        }
        total
    }

    /// Number of tuples on which every equation vanishes.
    pub(crate) fn count(&self, cfg: &Config) -> u64 {
        if self.infeasible {
            return 0;
        }
        let n = self.domains.len();
        if self.free_from == 0 {
            return self.suffix[0];
        }
        if cfg.workers <= 1 {
            return self.count_from(0, &mut vec![FieldElement::ZERO; n]);
        }
        cfg.run(|| {
            self.domains[0]
                .par_iter()
                .map(|&x| {
                    let mut point = vec![FieldElement::ZERO; n];
                    point[0] = x;
                    if self.passes(0, &point) {
                        self.count_from(1, &mut point)
                    } else {
                        0
                    }
                })
                .sum()
        })
    }

    fn visit_from<A>(
        &self,
        level: usize,
        point: &mut [FieldElement],
        acc: &mut A,
        visit: &(impl Fn(&mut A, &[FieldElement]) + Sync),
    ) {
        if level == self.domains.len() {
            visit(acc, point);
            return;
        }
        for &x in self.domains[level].iter() {
            point[level] = x;
            if self.passes(level, point) {
                self.visit_from(level + 1, point, acc, visit);
            }
        }
    }

    /// Calls `visit` on every solution in enumeration order. With several
    /// workers the solutions are split by first coordinate; the returned
    /// accumulators are in that order, so concatenating them reproduces the
    /// single-worker result.
    pub(crate) fn visit<A: Send>(
        &self,
        cfg: &Config,
        init: impl Fn() -> A + Sync,
        visit: impl Fn(&mut A, &[FieldElement]) + Sync,
    ) -> Vec<A> {
        let n = self.domains.len();
        if self.infeasible {
            return vec![init()];
        }
        if n == 0 || cfg.workers <= 1 {
            let mut acc = init();
            self.visit_from(0, &mut vec![FieldElement::ZERO; n], &mut acc, &visit);
            return vec![acc];
        }
        cfg.run(|| {
            self.domains[0]
                .par_iter()
                .map(|&x| {
                    let mut acc = init();
                    let mut point = vec![FieldElement::ZERO; n];
                    point[0] = x;
                    if self.passes(0, &point) {
                        self.visit_from(1, &mut point, &mut acc, &visit);
                    }
                    acc
                })
                .collect()
        })
    }

    /// All solutions, in enumeration order.
    pub(crate) fn points(&self, cfg: &Config) -> Vec<Vec<FieldElement>> {
        self.visit(cfg, Vec::new, |acc: &mut Vec<Vec<FieldElement>>, pt| {
            acc.push(pt.to_vec())
        })
        .into_iter()
        .flatten()
        .collect()
    }
}

/// Nominal cost of level `k`: `q^((d_1 + ... + d_n) k)`.
pub fn partial_count_cost(x: &VarietySpec, k: u32) -> u128 {
    let exp: u64 = x.profile().iter().map(|&d| d as u64 * k as u64).sum();
    big_pow(x.q(), exp)
}

/// The ambient field F_{q^(Dk)} for level `k` of `x`.
pub(crate) fn ambient_for(x: &VarietySpec, k: u32, cfg: &Config) -> Result<FieldDescriptor> {
    let n = x.lcm().checked_mul(k).ok_or_else(|| {
        Error::InvalidParameter(format!("level {k} overflows the ambient degree"))
    })?;
    build_field_with(x.p(), x.s(), n, &cfg.budget)
}

/// `#X_{d_1..d_n}(k)`: points with `x_i` in F_{q^(d_i k)}.
///
/// ```
/// use partial_zeta::{partial_count, Config, VarietySpec};
/// let x = VarietySpec::parse(2, 1, &["x1", "x2"], &["x1 - x2"], &[1, 2]).unwrap();
/// assert_eq!(partial_count(&x, 1, &Config::default()).unwrap(), 2);
/// ```
pub fn partial_count(x: &VarietySpec, k: u32, cfg: &Config) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("level k must be positive".into()));
    }
    cfg.budget.check(
        || format!("partial count at k = {k}"),
        partial_count_cost(x, k),
    )?;
    let field = ambient_for(x, k, cfg)?;
    let domains = x
        .profile()
        .iter()
        .map(|&d| subfield_domain(&field, d * k, cfg.subfield_method))
        .collect::<Result<Vec<_>>>()?;
    Ok(Search::new(&field, x.equations(), domains).count(cfg))
}

/// The classical count `#X(F_{q^k})`, straight over one field.
pub fn classical_count(x: &VarietySpec, k: u32, cfg: &Config) -> Result<u64> {
    let uniform = x.with_profile(vec![1; x.n()])?;
    partial_count(&uniform, k, cfg)
}

/// Partial counts `N_1..N_B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    #[serde(skip)]
    pub variety: VarietySpec,
    pub counts: Vec<u64>,
    /// The requested `B`.
    pub requested: usize,
    /// Set when the budget stopped the table before `B`; `counts` then holds
    /// the computed prefix.
    pub truncated: bool,
}

impl CountTable {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// `N_1..N_B`, stopping at the first level over budget.
pub fn count_table(x: &VarietySpec, b: usize, cfg: &Config) -> Result<CountTable> {
    if b == 0 {
        return Err(Error::InvalidParameter("table length must be positive".into()));
    }
    let mut counts = Vec::with_capacity(b);
    for k in 1..=b as u32 {
        match partial_count(x, k, cfg) {
            Ok(c) => counts.push(c),
            Err(Error::BudgetExceeded { .. }) if k > 1 => {
                return Ok(CountTable {
                    variety: x.clone(),
                    counts,
                    requested: b,
                    truncated: true,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CountTable {
        variety: x.clone(),
        counts,
        requested: b,
        truncated: false,
    })
}
