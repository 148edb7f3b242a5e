//! Weil weights of reconstructed zeta functions: every reciprocal zero and
//! pole should have absolute value q^(w/2).
//!
//!     cargo run --release --example weil_weights

use partial_zeta::zeta::DEFAULT_TOLERANCE;
use partial_zeta::{auto_reconstruct, weil_weight_check, Config, VarietySpec};

fn main() -> partial_zeta::Result<()> {
    let cfg = Config::default();
    let cases: [(u32, u32, &[&str], &[&str], &[u32]); 4] = [
        (2, 1, &["x", "y"], &["y^2 + y - x^3 - 1"], &[1, 1]),
        (3, 1, &["x1", "x2"], &["x1^2 + x2^2 - 1"], &[1, 1]),
        (2, 2, &["x"], &["x^3 - a"], &[1]),
        (2, 1, &["x"], &["x^2 + x + 1"], &[3]),
    ];
    for (p, s, vars, eqs, profile) in cases {
        let x = VarietySpec::parse(p, s, vars, eqs, profile)?;
        let rec = auto_reconstruct(&x, 12, 3, &cfg)?;
        let report = weil_weight_check(&rec.function, x.q(), DEFAULT_TOLERANCE)?;
        println!("{} over F_{}: Z = {}", eqs.join(", "), x.q(), rec.function);
        for r in &report.roots {
            println!(
                "  {:?} {:+.6}{:+.6}i |λ| = {:.6} w = {} (x{}) residual {:.1e}",
                r.side, r.re, r.im, r.magnitude, r.weight, r.multiplicity, r.residual
            );
        }
        println!("  pass: {}", report.pass);
    }
    Ok(())
}
