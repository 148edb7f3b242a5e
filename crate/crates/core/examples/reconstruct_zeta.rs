//! Reconstructs a partial zeta function from counts and checks it against
//! counts it was not fitted to.
//!
//!     cargo run --release --example reconstruct_zeta -- "x1*x2 - 1" 1,2

use partial_zeta::zeta::DEFAULT_HOLDOUT;
use partial_zeta::{auto_reconstruct, partial_count, series_from_counts, Config, VarietySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let eq = args.next().unwrap_or_else(|| "x1*x2 - 1".into());
    let profile: Vec<u32> = args
        .next()
        .unwrap_or_else(|| "1,1".into())
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()?;

    let cfg = Config::default();
    let x = VarietySpec::parse(2, 1, &["x1", "x2"], &[eq.as_str()], &profile)?;
    let rec = auto_reconstruct(&x, 12, DEFAULT_HOLDOUT, &cfg)?;
    let series = series_from_counts(&rec.counts);
    let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();

    println!("{eq} = 0 over F_2, profile {profile:?}");
    println!("counts      {:?}", rec.counts);
    println!("Z(T) series {}", coeffs.join(", "));
    println!("accepted    {} with (deg P, deg Q) = {:?} after B = {}", rec.function, rec.split, rec.b_used);

    let b = rec.b_used;
    let predicted = rec.function.power_sums(b + 2);
    for k in b + 1..=b + 2 {
        let n = partial_count(&x, k as u32, &cfg)?;
        println!("fresh N_{k} = {n}, predicted {}", predicted[k - 1]);
    }
    Ok(())
}
