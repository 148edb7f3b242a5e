//! The shifted product Y ⊂ X^d for a variety with profile (1, 2) and the
//! identity between partial counts and fixed points of σ^a ∘ Frob^k.
//!
//!     cargo run --release --example faltings_lemma

use partial_zeta::faltings::{build_faltings, lemma_check};
use partial_zeta::{Config, VarietySpec};

fn main() -> partial_zeta::Result<()> {
    let cfg = Config::default();
    let x = VarietySpec::parse(2, 1, &["x1", "x2"], &["x1*x2 - 1"], &[2, 3])?;
    let spec = build_faltings(&x)?;
    println!("d = {}, Y has {} coordinates", spec.d(), spec.y_vars().len());
    for eq in spec.y_equation_texts() {
        println!("  {eq} = 0");
    }
    println!("σ-stable: {}", spec.is_sigma_stable()?);

    let report = lemma_check(&spec, 2, &cfg)?;
    println!("{:>3} {:>3} {:>8} {:>8}", "a", "k", "N_k", "fixed");
    for e in &report.entries {
        println!(
            "{:>3} {:>3} {:>8} {:>8}  blocks from y_1: {}",
            e.a, e.k, e.partial_count, e.fixed_point_count, e.reconstruction_holds
        );
    }
    println!("pass: {}", report.pass);
    Ok(())
}
