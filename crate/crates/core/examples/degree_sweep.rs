//! Total degree of the partial zeta function as the profile grows, written
//! as CSV to stdout.
//!
//!     cargo run --release --example degree_sweep > sweep.csv

use partial_zeta::zeta::{degree_sweep, SWEEP_CSV_HEADER};
use partial_zeta::{Config, VarietySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::default();
    let x = VarietySpec::parse(2, 1, &["x1", "x2"], &["x1*x2 - 1"], &[1, 1])?;
    let profiles: Vec<Vec<u32>> = (1..=3)
        .flat_map(|a| (1..=3).map(move |b| vec![a, b]))
        .collect();
    let rows = degree_sweep(&x, &profiles, 10, 3, 1e-6, &cfg)?;
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(SWEEP_CSV_HEADER)?;
    for row in &rows {
        out.write_record(row.csv_record())?;
    }
    out.flush()?;
    Ok(())
}
