//! Partial counts of the diagonal and the hyperbola under several profiles,
//! next to the classical counts.
//!
//!     cargo run --release --example partial_counts

use partial_zeta::{classical_count, count_table, Config, VarietySpec};

fn main() -> partial_zeta::Result<()> {
    let cfg = Config::default();
    let cases = [
        ("x1 - x2", vec![1, 1]),
        ("x1 - x2", vec![1, 2]),
        ("x1 - x2", vec![2, 3]),
        ("x1*x2 - 1", vec![1, 1]),
        ("x1*x2 - 1", vec![2, 2]),
    ];
    println!("{:<12} {:<8} counts", "equation", "profile");
    for (eq, profile) in cases {
        let x = VarietySpec::parse(2, 1, &["x1", "x2"], &[eq], &profile)?;
        let table = count_table(&x, 4, &cfg)?;
        let note = if table.truncated { " (budget)" } else { "" };
        println!("{eq:<12} {:<8} {:?}{note}", format!("{profile:?}"), table.counts);
    }

    let curve = VarietySpec::parse(2, 1, &["x", "y"], &["y^2 + y - x^3 - 1"], &[1, 1])?;
    let classical: Vec<u64> = (1..=6)
        .map(|k| classical_count(&curve, k, &cfg))
        .collect::<Result<_, _>>()?;
    println!("affine y^2 + y = x^3 + 1 over F_2: {classical:?}");

    // the worker count never changes a count
    let parallel = Config::default().with_workers(4);
    let serial_n = partial_zeta::partial_count(&curve, 6, &cfg)?;
    let parallel_n = partial_zeta::partial_count(&curve, 6, &parallel)?;
    println!("N_6 with 1 worker: {serial_n}, with 4 workers: {parallel_n}");
    Ok(())
}
