//! Run reports and their JSON, CSV and table renderings.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::artin_schreier::{BoundReport, DiagonalSweep};
use crate::faltings::LemmaReport;
use crate::graph::GraphReport;
use crate::zeta::{RationalFunctionData, SweepRow, WeightReport, SWEEP_CSV_HEADER};
use crate::{Budget, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputInfo {
    pub sha256: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl InputInfo {
    pub fn new(bytes: &[u8], kind: &str, name: Option<&str>) -> Self {
        InputInfo {
            sha256: hex::encode(Sha256::digest(bytes)),
            kind: kind.into(),
            name: name.map(str::to_string),
        }
    }
}

/// Every parameter a command ran with, except the worker count, which
/// never changes results.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fresh: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_list: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetInfo {
    pub max_tuples: u64,
    pub max_field_size: u64,
    /// Sum of the nominal sizes of the enumerations that ran.
    pub nominal_cost: String,
}

impl BudgetInfo {
    pub fn new(b: &Budget, cost: u128) -> Self {
        BudgetInfo {
            max_tuples: b.max_tuples,
            max_field_size: b.max_field_size,
            nominal_cost: cost.to_string(),
        }
    }
}

/// Excluded from every determinism guarantee.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Execution {
    pub workers: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountOutputs {
    pub profile: Vec<u32>,
    pub lcm: u32,
    pub requested: usize,
    pub counts: Vec<u64>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreshCheck {
    pub k: u32,
    pub predicted: String,
    /// `None` when the count was over budget.
    pub count: Option<u64>,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaOutputs {
    pub profile: Vec<u32>,
    pub lcm: u32,
    pub counts: Vec<u64>,
    pub b_used: Option<usize>,
    pub split: Option<(usize, usize)>,
    pub function: Option<RationalFunctionData>,
    /// Coefficients of `Z(T)` up to `T^B`, as decimal strings.
    pub series: Vec<String>,
    pub series_integral: bool,
    pub weights: Option<WeightReport>,
    pub fresh: Vec<FreshCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ASOutputs {
    pub bound: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<DiagonalSweep>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Outputs {
    Count(CountOutputs),
    Zeta(ZetaOutputs),
    Faltings(LemmaReport),
    Graph(GraphReport),
    ArtinSchreier(ASOutputs),
    Sweep(Vec<SweepRow>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: InputInfo,
    pub parameters: Parameters,
    /// `ok`, `budget`, `not-converged`, `assertion-failed` or `error`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Outputs>,
    pub budget: BudgetInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub execution: Option<Execution>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |rec: &[String]| w.write_record(rec);
        let kv = |k: &str, v: String| vec![k.to_string(), v];
        let res: std::result::Result<(), csv::Error> = (|| {
            match &self.outputs {
                Some(Outputs::Count(c)) => {
                    put(&["k".into(), "count".into()])?;
                    for (i, n) in c.counts.iter().enumerate() {
                        put(&[(i + 1).to_string(), n.to_string()])?;
                    }
                }
                Some(Outputs::Zeta(z)) => {
                    put(&kv("field", "value".into()))?;
                    put(&kv("status", self.status.clone()))?;
                    put(&kv("counts", join(&z.counts)))?;
                    if let Some(f) = &z.function {
                        put(&kv("function", f.display.clone()))?;
                        put(&kv("numerator", f.numerator.join(" ")))?;
                        put(&kv("denominator", f.denominator.join(" ")))?;
                        put(&kv("total_degree", f.total_degree.to_string()))?;
                    }
                    if let Some(b) = z.b_used {
                        put(&kv("B_used", b.to_string()))?;
                    }
                    if let Some(w) = &z.weights {
                        put(&kv("weights", join(&w.weights())))?;
                        put(&kv("weights_pass", w.pass.to_string()))?;
                    }
                }
                Some(Outputs::Faltings(r)) => {
                    put(&[
                        "a", "k", "partial_count", "fixed_point_count", "equal",
                        "reconstruction_holds",
                    ]
                    .map(String::from))?;
                    for e in &r.entries {
                        put(&[
                            e.a.to_string(),
                            e.k.to_string(),
                            e.partial_count.to_string(),
                            e.fixed_point_count.to_string(),
                            e.equal.to_string(),
                            e.reconstruction_holds.to_string(),
                        ])?;
                    }
                }
                Some(Outputs::Graph(g)) => {
                    put(&["k", "direct", "reduced"].map(String::from))?;
                    for (i, (a, b)) in g.direct.iter().zip(&g.reduced).enumerate() {
                        put(&[(i + 1).to_string(), a.to_string(), b.to_string()])?;
                    }
                }
                Some(Outputs::ArtinSchreier(a)) => {
                    let b = &a.bound;
                    put(&kv("field", "value".into()))?;
                    for (k, v) in [
                        ("count", b.count.to_string()),
                        ("main_term", b.main_term.clone()),
                        ("deviation", b.deviation.clone()),
                        ("bound", b.bound.clone()),
                        ("bound_squared", b.bound_squared.clone()),
                        ("p_divides_r", b.p_divides_r.to_string()),
                        ("smoothness", kebab(&b.smoothness)),
                        ("hypotheses_hold", b.hypotheses_hold.to_string()),
                        ("satisfied", b.satisfied.to_string()),
                    ] {
                        put(&kv(k, v))?;
                    }
                }
                Some(Outputs::Sweep(rows)) => {
                    // timings only travel with the execution block
                    let cols = SWEEP_CSV_HEADER.len() - usize::from(self.execution.is_none());
                    put(&SWEEP_CSV_HEADER[..cols].iter().map(|h| h.to_string()).collect::<Vec<_>>())?;
                    for r in rows {
                        put(&r.csv_record()[..cols])?;
                    }
                }
                None => {
                    put(&kv("status", self.status.clone()))?;
                    if let Some(e) = &self.error {
                        put(&kv("error", e.clone()))?;
                    }
                }
            }
            Ok(())
        })();
        res.map_err(|e| crate::Error::Schema(e.to_string()))?;
        let bytes = w
            .into_inner()
            .map_err(|e| crate::Error::Schema(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{} [{}]: {}\n", self.command, self.input.kind, self.status);
        if let Some(e) = &self.error {
            out += &format!("error: {e}\n");
        }
        match &self.outputs {
            Some(Outputs::Count(c)) => {
                out += &format!("profile {:?}, D = {}\n", c.profile, c.lcm);
                out += &format!("{:>4}  {:>14}\n", "k", "N_k");
                for (i, n) in c.counts.iter().enumerate() {
                    out += &format!("{:>4}  {:>14}\n", i + 1, n);
                }
            }
            Some(Outputs::Zeta(z)) => {
                out += &format!("counts  {}\n", join(&z.counts));
                if let Some(f) = &z.function {
                    out += &format!("Z(T)    {}\n", f.display);
                    out += &format!("degree  {}\n", f.total_degree);
                }
                if let Some(b) = z.b_used {
                    out += &format!("B_used  {b}\n");
                }
                if let Some(w) = &z.weights {
                    out += &format!("weights {} ({})\n", join(&w.weights()), pf(w.pass));
                }
                for f in &z.fresh {
                    out += &format!(
                        "fresh k = {}: predicted {}, counted {}\n",
                        f.k,
                        f.predicted,
                        f.count.map_or("-".into(), |c| c.to_string())
                    );
                }
            }
            Some(Outputs::Faltings(r)) => {
                out += &format!("d = {}, shifts {:?}\n", r.d, r.shifts);
                out += &format!("{:>3} {:>3} {:>10} {:>10}\n", "a", "k", "partial", "fixed");
                for e in &r.entries {
                    out += &format!(
                        "{:>3} {:>3} {:>10} {:>10}  {}\n",
                        e.a,
                        e.k,
                        e.partial_count,
                        e.fixed_point_count,
                        pf(e.equal && e.reconstruction_holds)
                    );
                }
            }
            Some(Outputs::Graph(g)) => {
                out += &format!("{:>3} {:>10} {:>10}\n", "k", "direct", "reduced");
                for (i, (a, b)) in g.direct.iter().zip(&g.reduced).enumerate() {
                    out += &format!("{:>3} {:>10} {:>10}\n", i + 1, a, b);
                }
                if let Some(f) = &g.function {
                    out += &format!("Z(T)    {}\n", f.display);
                }
                for w in &g.witnesses {
                    out += &format!("witness {w}\n");
                }
            }
            Some(Outputs::ArtinSchreier(a)) => {
                let b = &a.bound;
                out += &format!("N_{}      {}\n", b.d, b.count);
                out += &format!("main      {}\n", b.main_term);
                out += &format!("deviation {}\n", b.deviation);
                out += &format!("bound     {} (~{})\n", b.bound, b.bound_decimal);
                out += &format!("smooth    {} ({})\n", kebab(&b.smoothness), b.smoothness_note);
                out += &format!("satisfied {}\n", b.satisfied);
                if let Some(s) = &a.sweep {
                    for e in &s.entries {
                        out += &format!("d = {}: {} {}\n", e.d, kebab(&e.verdict), pf(e.agrees));
                    }
                }
            }
            Some(Outputs::Sweep(rows)) => {
                for r in rows {
                    out += &format!(
                        "{:<12} D={:<3} {:<14} {}\n",
                        format!("{:?}", r.profile),
                        r.lcm,
                        r.status,
                        r.function.clone().unwrap_or_default()
                    );
                }
            }
            None => {}
        }
        out
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn pf(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
