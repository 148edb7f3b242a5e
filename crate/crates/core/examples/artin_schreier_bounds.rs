//! Artin-Schreier counts for x_0^2 - x_0 = x^3 + y^3 over F_2 with the x
//! block at level d, the bound comparison, and the smoothness pattern of the
//! fibred sums.
//!
//!     cargo run --release --example artin_schreier_bounds

use partial_zeta::artin_schreier::{bound_check, diagonal_sweep, ASInstance};
use partial_zeta::{parse_poly, BaseField, Config};

fn main() -> partial_zeta::Result<()> {
    let cfg = Config::default();
    println!("{:>2} {:>6} {:>6} {:>6} {:>14} {:<18} asserted", "d", "N_d", "main", "dev", "bound", "smoothness");
    for d in 1..=4 {
        let inst = ASInstance::parse(2, 1, &["x"], &["y"], "x^3 + y^3", d)?;
        let r = bound_check(&inst, &cfg)?;
        println!(
            "{:>2} {:>6} {:>6} {:>6} {:>14} {:<18} {}",
            d,
            r.count,
            r.main_term,
            r.deviation,
            r.bound,
            format!("{:?}", r.smoothness),
            if r.hypotheses_hold { r.satisfied.to_string() } else { "-".into() }
        );
    }

    for (p, r) in [(2u32, 3u32), (3, 2)] {
        let base = BaseField::new(p, 1)?;
        let fx = parse_poly(&format!("x^{r}"), &["x"], &base)?;
        let fy = parse_poly(&format!("y^{r}"), &["y"], &base)?;
        let sweep = diagonal_sweep(&fx, &fy, &[1, 2, 3, 4, 5, 6])?;
        println!("p = {p}, r = {r}:");
        for e in &sweep.entries {
            println!("  d = {}: {:<40} {:?}", e.d, e.form, e.verdict);
        }
    }
    Ok(())
}
