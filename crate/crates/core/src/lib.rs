//! Partial zeta functions of affine varieties over finite fields.
//!
//! Given a variety `X` over F_q cut out by polynomial equations in
//! `x_1..x_n` and a profile of positive integers `d_1..d_n`, the partial
//! count at level `k` is the number of points of `X` with `x_i` in
//! F_{q^(d_i k)}. The partial zeta function is `exp(sum N_k T^k / k)`.
//!
//! This crate counts those points exactly, assembles the zeta series over
//! the rationals, reconstructs it as a rational function with integer
//! coefficients (certified to a stated order against held-out terms), and
//! reports the Weil weights of its reciprocal zeros and poles. It also
//! ships the constructions that explain rationality:
//!
//! - [`faltings`]: the shifted-product variety `Y ⊂ X^d` and the fixed-point
//!   identity relating its points to partial counts;
//! - [`graph`]: zeta functions of directed graphs of varieties, and their
//!   reduction to a fibred product;
//! - [`artin_schreier`]: counts on `x_0^p - x_0 = f` with mixed field levels
//!   and the exponential-sum bounds for them.
//!
//! Everything is exhaustive enumeration, so it is meant for small fields.
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod artin_schreier;
pub mod cli;
pub mod count;
pub mod faltings;
pub mod field;
pub mod graph;
pub mod poly;
pub mod zeta;

use serde::{Deserialize, Serialize};

pub use count::{classical_count, count_table, partial_count, CountTable};
pub use field::{build_field, FieldDescriptor, FieldElement, SubfieldMethod};
pub use poly::{parse_poly, BaseField, MorphismSpec, SparsePoly, VarietySpec};
pub use zeta::{
    auto_reconstruct, pade_reconstruct, series_from_counts, weil_weight_check, RationalFunctionZ,
    TruncatedSeries, WeightReport,
};

/// Hard caps on enumeration work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    /// Maximum number of tuples one enumeration may visit.
    pub max_tuples: u64,
    /// Maximum number of elements of an ambient field.
    pub max_field_size: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_tuples: 100_000_000,
            max_field_size: 1 << 26,
        }
    }
}

impl Budget {
    pub(crate) fn check(&self, what: impl FnOnce() -> String, cost: u128) -> Result<()> {
        if cost > self.max_tuples as u128 {
            return Err(Error::BudgetExceeded {
                what: what(),
                cost,
                limit: self.max_tuples,
            });
        }
        Ok(())
    }
}

/// Execution settings shared by every enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub budget: Budget,
    /// Worker threads; 1 runs on the calling thread. Results never depend
    /// on this.
    pub workers: usize,
    pub subfield_method: SubfieldMethod,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: Budget::default(),
            workers: 1,
            subfield_method: SubfieldMethod::Filter,
        }
    }
}

impl Config {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Runs `f` on a pool of `workers` threads, or inline for one worker.
    pub(crate) fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.workers <= 1 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn big_pow(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget exceeded for {what}: cost {cost} > limit {limit}")]
    BudgetExceeded { what: String, cost: u128, limit: u64 },
    #[error("F_q^{e} is not a subfield of F_q^{n}")]
    NotSubfield { e: u32, n: u32 },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero polynomial has no leading form")]
    ZeroPolynomial,
    #[error("variable map is not injective")]
    NonInjectiveMap,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("not enough series terms: need {needed}, have {have}")]
    InsufficientTerms { needed: usize, have: usize },
    #[error("no rational function with deg P <= {dn}, deg Q <= {dd}, Q(0) = 1 matches the series")]
    NoSolution { dn: usize, dd: usize },
    #[error("reconstructed rational function has non-integer coefficients ({dn}, {dd})")]
    NonInteger { dn: usize, dd: usize },
    #[error("no rational function accepted up to order {max_k}")]
    NotConverged {
        max_k: usize,
        counts: Vec<u64>,
        cause: Option<Box<Error>>,
    },
    #[error("root finding did not converge for polynomial {0}")]
    RootFinding(String),
    #[error("{a} is not coprime to {d}")]
    NotCoprime { a: u64, d: u64 },
    #[error("counting oracles disagree: brute force {brute}, trace {trace}")]
    OracleDisagreement { brute: u64, trace: u64 },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
