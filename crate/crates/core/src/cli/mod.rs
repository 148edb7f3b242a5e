//! The `pzeta` command line: instance files in, run reports out.
//!
//! Exit codes: 0 success, 2 schema or usage error, 3 budget exceeded,
//! 4 reconstruction did not converge, 5 a mathematical check failed.

mod instance;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use instance::{
    ASInstanceFile, BudgetOverride, EdgeFile, ExpectedFunction, GraphInstance, Instance,
    VarietyInstance, VertexFile,
};
pub use report::{
    ASOutputs, BudgetInfo, CountOutputs, Execution, FreshCheck, InputInfo, Outputs, Parameters,
    RunReport, ZetaOutputs,
};

use crate::artin_schreier::{bound_check_with, diagonal_sweep, ASInstance, DEFAULT_SEARCH_DEGREE};
use crate::count::{count_table, partial_count, partial_count_cost};
use crate::faltings::{build_faltings, lemma_check};
use crate::graph::{fibred_product_reduce, reduction_check};
use crate::poly::{SparsePoly, VarietySpec};
use crate::zeta::{
    auto_reconstruct, degree_sweep, series_from_counts, weil_weight_check, DEFAULT_HOLDOUT,
    DEFAULT_TOLERANCE,
};
use crate::{big_pow, Budget, Config, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_ASSERTION: i32 = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "pzeta", version, about = "Partial zeta functions over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Maximum tuples per enumeration (overrides the instance file).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1, global = true)]
    pub workers: usize,
    /// Leave the execution block (workers, timings) out of the report.
    #[arg(long, global = true)]
    pub omit_execution: bool,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            format: Format::Json,
            budget: None,
            workers: 1,
            omit_execution: false,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct ReconstructOpts {
    /// Largest number of counts to compute while searching.
    #[arg(long, default_value_t = 12)]
    pub max_k: usize,
    /// Series terms held out to confirm a candidate.
    #[arg(long, default_value_t = DEFAULT_HOLDOUT)]
    pub holdout: usize,
    /// Relative tolerance of the weight check.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
}

impl Default for ReconstructOpts {
    fn default() -> Self {
        ReconstructOpts {
            max_k: 12,
            holdout: DEFAULT_HOLDOUT,
            tol: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Partial counts N_1..N_k of a variety.
    Count {
        file: PathBuf,
        #[arg(short, long, default_value_t = 3)]
        k: u32,
    },
    /// Reconstruct the partial zeta function and check its weights.
    Zeta {
        file: PathBuf,
        #[command(flatten)]
        opts: ReconstructOpts,
        /// Extra counts beyond B_used to compare with the prediction.
        #[arg(long, default_value_t = 0)]
        fresh: usize,
    },
    /// Compare partial counts with fixed points on the shifted product.
    Faltings {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        k_max: u32,
    },
    /// Count a graph system directly and through its fibred product.
    Graph {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        #[command(flatten)]
        opts: ReconstructOpts,
    },
    /// Artin-Schreier counts and the exponential sum bound.
    As {
        file: PathBuf,
        /// Also check smoothness of the fibred sums for these d.
        #[arg(long, value_delimiter = ',')]
        d_list: Vec<u32>,
        /// Extension degree of the singular point search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_DEGREE)]
        search_degree: u32,
    },
    /// Reconstruct under several profiles; profiles separated by ';'.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        profiles: Option<String>,
        #[command(flatten)]
        opts: ReconstructOpts,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Zeta { .. } => "zeta",
            Command::Faltings { .. } => "faltings",
            Command::Graph { .. } => "graph",
            Command::As { .. } => "as",
            Command::Sweep { .. } => "sweep",
        }
    }

    pub fn file(&self) -> &PathBuf {
        match self {
            Command::Count { file, .. }
            | Command::Zeta { file, .. }
            | Command::Faltings { file, .. }
            | Command::Graph { file, .. }
            | Command::As { file, .. }
            | Command::Sweep { file, .. } => file,
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        Error::Assertion(_)
        | Error::OracleDisagreement { .. }
        | Error::RootFinding(_)
        | Error::NonInteger { .. }
        | Error::NoSolution { .. } => EXIT_ASSERTION,
        _ => EXIT_SCHEMA,
    }
}

fn status_for(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_BUDGET => "budget",
        EXIT_NOT_CONVERGED => "not-converged",
        EXIT_ASSERTION => "assertion-failed",
        _ => "error",
    }
}

/// Parses `"1,1;1,2"` into profiles.
pub fn parse_profiles(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(';')
        .map(|p| {
            p.split(',')
                .map(|d| {
                    d.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Schema(format!("bad profile entry `{d}`")))
                })
                .collect()
        })
        .collect()
}

struct Outcome {
    outputs: Option<Outputs>,
    params: Parameters,
    cost: u128,
    code: i32,
    error: Option<String>,
}

impl Outcome {
    fn new(params: Parameters) -> Self {
        Outcome {
            outputs: None,
            params,
            cost: 0,
            code: EXIT_OK,
            error: None,
        }
    }

    fn fail(mut self, e: Error) -> Self {
        self.code = exit_code(&e);
        self.error = Some(e.to_string());
        self
    }
}

/// Runs one command on the bytes of an instance file. Schema errors come
/// back as `Err`; everything after validation produces a report, whose
/// status decides the exit code.
pub fn run_on_bytes(cmd: &Command, input: &[u8], global: &GlobalOpts) -> Result<(RunReport, i32)> {
    let text = std::str::from_utf8(input).map_err(|e| Error::Schema(e.to_string()))?;
    let inst = Instance::from_json(text)?;
    let mut budget = inst.budget().unwrap_or_default().apply(Budget::default());
    if let Some(t) = global.budget {
        budget.max_tuples = t;
    }
    let cfg = Config::default()
        .with_budget(budget)
        .with_workers(global.workers);
    let start = Instant::now();
    let outcome = match (cmd, &inst) {
        (Command::Count { k, .. }, Instance::Variety(v)) => cmd_count(&v.to_variety()?, *k, &cfg),
        (Command::Zeta { opts, fresh, .. }, Instance::Variety(v)) => {
            cmd_zeta(&v.to_variety()?, opts, *fresh, &cfg)
        }
        (Command::Faltings { k_max, .. }, Instance::Variety(v)) => {
            cmd_faltings(&v.to_variety()?, *k_max, &cfg)
        }
        (Command::Sweep { profiles, opts, .. }, Instance::Variety(v)) => {
            let x = v.to_variety()?;
            let profiles = match profiles {
                Some(t) => parse_profiles(t)?,
                None => vec![x.profile().to_vec()],
            };
            cmd_sweep(&x, profiles, opts, &cfg)
        }
        (Command::Graph { k_max, opts, .. }, Instance::Graph(g)) => {
            cmd_graph(g, *k_max, opts, &cfg)?
        }
        (
            Command::As {
                d_list,
                search_degree,
                ..
            },
            Instance::ArtinSchreier(a),
        ) => cmd_as(&a.to_instance()?, d_list, *search_degree, &cfg)?,
        (cmd, inst) => {
            return Err(Error::Schema(format!(
                "command `{}` does not take a {} instance",
                cmd.name(),
                inst.kind()
            )))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = RunReport {
        tool: "pzeta",
        version: env!("CARGO_PKG_VERSION"),
        command: cmd.name().into(),
        input: InputInfo::new(input, inst.kind(), inst.name()),
        parameters: outcome.params,
        status: status_for(outcome.code).into(),
        error: outcome.error,
        outputs: outcome.outputs,
        budget: BudgetInfo::new(&cfg.budget, outcome.cost),
        execution: (!global.omit_execution).then_some(Execution {
            workers: cfg.workers,
            wall_ms,
        }),
    };
    Ok((report, outcome.code))
}

fn cost_of_counts(x: &VarietySpec, kmax: usize) -> u128 {
    (1..=kmax as u32).fold(0u128, |acc, k| acc.saturating_add(partial_count_cost(x, k)))
}

fn cmd_count(x: &VarietySpec, k: u32, cfg: &Config) -> Outcome {
    let mut out = Outcome::new(Parameters {
        k: Some(k),
        ..Default::default()
    });
    match count_table(x, k as usize, cfg) {
        Ok(t) => {
            out.cost = cost_of_counts(x, t.counts.len());
            if t.truncated {
                out.code = EXIT_BUDGET;
                out.error = Some(format!(
                    "budget exhausted after k = {} of {}",
                    t.counts.len(),
                    t.requested
                ));
            }
            out.outputs = Some(Outputs::Count(CountOutputs {
                profile: x.profile().to_vec(),
                lcm: x.lcm(),
                requested: t.requested,
                counts: t.counts,
                truncated: t.truncated,
            }));
            out
        }
        Err(e) => out.fail(e),
    }
}

/// Reconstruction, weights, integrality and fresh-count checks.
pub fn zeta_outputs(
    x: &VarietySpec,
    opts: &ReconstructOpts,
    fresh: usize,
    cfg: &Config,
) -> Result<ZetaOutputs> {
    let rec = auto_reconstruct(x, opts.max_k, opts.holdout, cfg)?;
    let weights = weil_weight_check(&rec.function, x.q(), opts.tol)?;
    let series = series_from_counts(&rec.counts);
    let b = rec.b_used;
    let predicted = rec.function.power_sums(b + fresh);
    let mut checks = Vec::with_capacity(fresh);
    for k in b + 1..=b + fresh {
        let count = match partial_count(x, k as u32, cfg) {
            Ok(c) => Some(c),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let pred = &predicted[k - 1];
        checks.push(FreshCheck {
            k: k as u32,
            predicted: pred.to_string(),
            count,
            agrees: count.map(|c| *pred == c.into()),
        });
    }
    let series_integral = series.is_integral();
    let pass = weights.pass && series_integral && checks.iter().all(|c| c.agrees != Some(false));
    Ok(ZetaOutputs {
        profile: x.profile().to_vec(),
        lcm: x.lcm(),
        series: series
            .integer_coeffs()
            .map(|c| c.iter().map(|v| v.to_string()).collect())
            .unwrap_or_else(|| series.coeffs().iter().map(|v| v.to_string()).collect()),
        series_integral,
        counts: rec.counts,
        b_used: Some(b),
        split: Some(rec.split),
        function: Some(rec.function.data()),
        weights: Some(weights),
        fresh: checks,
        pass,
    })
}

fn cmd_zeta(x: &VarietySpec, opts: &ReconstructOpts, fresh: usize, cfg: &Config) -> Outcome {
    let mut out = Outcome::new(Parameters {
        max_k: Some(opts.max_k),
        holdout: Some(opts.holdout),
        tol: Some(opts.tol),
        fresh: Some(fresh),
        ..Default::default()
    });
    match zeta_outputs(x, opts, fresh, cfg) {
        Ok(z) => {
            let used = z.counts.len() + z.fresh.iter().filter(|f| f.count.is_some()).count();
            out.cost = cost_of_counts(x, used);
            if !z.pass {
                out.code = EXIT_ASSERTION;
                out.error = Some("weight, integrality or fresh-count check failed".into());
            }
            out.outputs = Some(Outputs::Zeta(z));
            out
        }
        Err(Error::NotConverged {
            max_k,
            counts,
            cause,
        }) => {
            out.cost = cost_of_counts(x, counts.len());
            out.code = EXIT_NOT_CONVERGED;
            out.error = Some(match cause {
                Some(c) => format!("no rational function accepted with {max_k} counts: {c}"),
                None => format!("no rational function accepted with {max_k} counts"),
            });
            let series = series_from_counts(&counts);
            out.outputs = Some(Outputs::Zeta(ZetaOutputs {
                profile: x.profile().to_vec(),
                lcm: x.lcm(),
                series: series.coeffs().iter().map(|v| v.to_string()).collect(),
                series_integral: series.is_integral(),
                counts,
                b_used: None,
                split: None,
                function: None,
                weights: None,
                fresh: Vec::new(),
                pass: false,
            }));
            out
        }
        Err(e) => out.fail(e),
    }
}

fn cmd_faltings(x: &VarietySpec, k_max: u32, cfg: &Config) -> Outcome {
    let mut out = Outcome::new(Parameters {
        k_max: Some(k_max),
        ..Default::default()
    });
    let result = build_faltings(x).and_then(|spec| {
        let report = lemma_check(&spec, k_max, cfg)?;
        Ok(report)
    });
    match result {
        Ok(r) => {
            if let Ok(uniform) = x.with_profile(vec![x.lcm(); x.n()]) {
                out.cost = cost_of_counts(&uniform, k_max as usize)
                    .saturating_mul(r.shifts.len() as u128 + 1);
            }
            if !r.pass {
                out.code = EXIT_ASSERTION;
                out.error = Some("fixed-point identity failed".into());
            }
            out.outputs = Some(Outputs::Faltings(r));
            out
        }
        Err(e) => out.fail(e),
    }
}

fn cmd_graph(g: &GraphInstance, k_max: u32, opts: &ReconstructOpts, cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new(Parameters {
        k_max: Some(k_max),
        max_k: Some(opts.max_k),
        holdout: Some(opts.holdout),
        tol: Some(opts.tol),
        ..Default::default()
    });
    let system = g.to_graph()?;
    let red = fibred_product_reduce(&system)?;
    out.cost = cost_of_counts(&red.variety, k_max as usize).saturating_mul(2);
    Ok(
        match reduction_check(&system, k_max, opts.max_k, opts.holdout, opts.tol, cfg) {
            Ok(r) => {
                if !r.pass {
                    out.code = EXIT_ASSERTION;
                    out.error = Some("graph counts, reconstruction or weights failed".into());
                }
                out.outputs = Some(Outputs::Graph(r));
                out
            }
            Err(e) => out.fail(e),
        },
    )
}

/// Splits a leading form into its pure-x and pure-y parts, if it has no
/// mixed monomials.
fn split_form(f: &SparsePoly, n: usize) -> Option<(SparsePoly, SparsePoly)> {
    let m = f.nvars();
    let pure = |range: std::ops::Range<usize>| {
        SparsePoly::from_terms(
            f.base(),
            range.len(),
            f.terms()
                .filter(|(mono, _)| (0..m).all(|i| range.contains(&i) || mono[i] == 0))
                .map(|(mono, c)| (mono[range.clone()].to_vec(), *c)),
        )
    };
    let (fx, fy) = (pure(0..n), pure(n..m));
    (fx.num_terms() + fy.num_terms() == f.num_terms()).then_some((fx, fy))
}

fn cmd_as(inst: &ASInstance, d_list: &[u32], search_degree: u32, cfg: &Config) -> Result<Outcome> {
    let mut out = Outcome::new(Parameters {
        d_list: (!d_list.is_empty()).then(|| d_list.to_vec()),
        search_degree: Some(search_degree),
        ..Default::default()
    });
    let sweep = if d_list.is_empty() {
        None
    } else {
        let (fr, _) = inst.f().leading_form()?;
        let (fx, fy) = split_form(&fr, inst.n()).ok_or_else(|| {
            Error::InvalidParameter("the leading form mixes x and y variables".into())
        })?;
        Some(diagonal_sweep(&fx, &fy, d_list)?)
    };
    let q = inst.base().q();
    out.cost = big_pow(q, inst.d() as u64 * (inst.n() as u64 + 1) + inst.n_prime() as u64)
        .saturating_add(big_pow(q, inst.dimension()));
    Ok(match bound_check_with(inst, search_degree, cfg) {
        Ok(bound) => {
            let pass = bound.pass && sweep.as_ref().is_none_or(|s| s.pass);
            if !pass {
                out.code = EXIT_ASSERTION;
                out.error = Some("bound or smoothness pattern check failed".into());
            }
            out.outputs = Some(Outputs::ArtinSchreier(ASOutputs { bound, sweep, pass }));
            out
        }
        Err(e) => out.fail(e),
    })
}

fn cmd_sweep(x: &VarietySpec, profiles: Vec<Vec<u32>>, opts: &ReconstructOpts, cfg: &Config) -> Outcome {
    let mut out = Outcome::new(Parameters {
        max_k: Some(opts.max_k),
        holdout: Some(opts.holdout),
        tol: Some(opts.tol),
        profiles: Some(profiles.clone()),
        ..Default::default()
    });
    match degree_sweep(x, &profiles, opts.max_k, opts.holdout, opts.tol, cfg) {
        Ok(rows) => {
            for (row, p) in rows.iter().zip(&profiles) {
                if let Ok(xp) = x.with_profile(p.clone()) {
                    let used = row.b_used.unwrap_or(opts.max_k);
                    out.cost = out.cost.saturating_add(cost_of_counts(&xp, used));
                }
            }
            out.outputs = Some(Outputs::Sweep(rows));
            out
        }
        Err(e) => out.fail(e),
    }
}

/// Renders a report in the requested format.
pub fn render(report: &RunReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
        Format::Table => report.to_table(),
    })
}

/// Entry point of the binary: parses `args`, runs, prints, and returns the
/// exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
        }
    };
    let path = cli.command.file();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_SCHEMA;
        }
    };
    match run_on_bytes(&cli.command, &bytes, &cli.global) {
        Ok((report, code)) => match render(&report, cli.global.format) {
            Ok(text) => {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
                if let Some(e) = &report.error {
                    eprintln!("error: {e}");
                }
                code
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cmd: Command, json: &str) -> (RunReport, i32) {
        let g = GlobalOpts {
            omit_execution: true,
            ..Default::default()
        };
        run_on_bytes(&cmd, json.as_bytes(), &g).unwrap()
    }

    const DIAG: &str = r#"{"kind": "variety", "p": 2, "vars": ["x1", "x2"],
        "equations": ["x1 - x2"], "profile": [1, 2]}"#;

    fn file() -> PathBuf {
        PathBuf::from("-")
    }

    #[test]
    fn count_and_zeta() {
        let (r, code) = run(Command::Count { file: file(), k: 3 }, DIAG);
        assert_eq!(code, 0);
        let Some(Outputs::Count(c)) = &r.outputs else { panic!() };
        assert_eq!(c.counts, vec![2, 4, 8]);
        let (r, code) = run(
            Command::Zeta {
                file: file(),
                opts: ReconstructOpts::default(),
                fresh: 2,
            },
            DIAG,
        );
        assert_eq!(code, 0);
        let Some(Outputs::Zeta(z)) = &r.outputs else { panic!() };
        assert_eq!(z.function.as_ref().unwrap().display, "1/(1 - 2T)");
        assert_eq!(z.weights.as_ref().unwrap().weights(), vec![2]);
        assert!(z.fresh.iter().all(|f| f.agrees == Some(true)));
        assert!(r.to_csv().unwrap().contains("1/(1 - 2T)"));
        assert!(r.to_table().contains("Z(T)"));
    }

    #[test]
    fn exit_codes() {
        let g = GlobalOpts::default();
        let cmd = Command::Count { file: file(), k: 3 };
        let e = run_on_bytes(&cmd, b"{\"kind\": \"variety\",", &g).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_SCHEMA);
        assert!(e.to_string().contains("line"));

        let tight = r#"{"kind": "variety", "p": 2, "vars": ["x1", "x2"],
            "equations": ["x1 - x2"], "budget": {"max_tuples": 20}}"#;
        let (r, code) = run(Command::Count { file: file(), k: 4 }, tight);
        assert_eq!(code, EXIT_BUDGET);
        assert_eq!(r.status, "budget");

        let curve = r#"{"kind": "variety", "p": 2, "vars": ["x", "y"],
            "equations": ["y^2 + y + x^3 + 1"]}"#;
        let (r, code) = run(
            Command::Zeta {
                file: file(),
                opts: ReconstructOpts {
                    max_k: 4,
                    ..Default::default()
                },
                fresh: 0,
            },
            curve,
        );
        assert_eq!(code, EXIT_NOT_CONVERGED);
        let Some(Outputs::Zeta(z)) = &r.outputs else { panic!() };
        assert_eq!(z.counts, vec![2, 8, 8, 8]);

        let wrong = Command::Graph {
            file: file(),
            k_max: 1,
            opts: ReconstructOpts::default(),
        };
        assert!(run_on_bytes(&wrong, DIAG.as_bytes(), &g).is_err());
    }

    #[test]
    fn as_command() {
        let inst = r#"{"kind": "artin-schreier", "p": 2, "f": "x^3 + y^3", "n": 1,
            "n_prime": 1, "d": 1, "vars": ["x", "y"]}"#;
        let (r, code) = run(
            Command::As {
                file: file(),
                d_list: vec![1, 2, 3, 4],
                search_degree: 2,
            },
            inst,
        );
        assert_eq!(code, 0);
        let Some(Outputs::ArtinSchreier(a)) = &r.outputs else { panic!() };
        assert_eq!(a.bound.count, 4);
        assert_eq!(a.bound.bound, "8");
        assert!(a.sweep.as_ref().unwrap().pass);
    }

    #[test]
    fn profiles_parse() {
        assert_eq!(parse_profiles("1,1;1,2").unwrap(), vec![vec![1, 1], vec![1, 2]]);
        assert!(parse_profiles("1,x").is_err());
    }
}
