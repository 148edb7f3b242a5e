//! A 3-cycle of affine lines: counts compatible vertex tuples directly and
//! through the fibred product, then reconstructs the graph zeta function.
//!
//!     cargo run --release --example graph_zeta

use partial_zeta::graph::{fibred_product_reduce, graph_count_direct, reduction_check, Edge, GraphSystem, Vertex};
use partial_zeta::{parse_poly, BaseField, Config, MorphismSpec};

fn line(name: &str, level: u32) -> Vertex {
    Vertex {
        name: name.into(),
        vars: vec!["x".into()],
        equations: vec![],
        level,
    }
}

fn edge(base: &BaseField, source: usize, target: usize, map: &str) -> partial_zeta::Result<Edge> {
    let component = parse_poly(map, &["x"], base)?;
    Ok(Edge {
        source,
        target,
        morphism: MorphismSpec::new(1, vec![component])?,
    })
}

fn main() -> partial_zeta::Result<()> {
    let cfg = Config::default();
    let f2 = BaseField::new(2, 1)?;
    let g = GraphSystem::new(
        &f2,
        vec![line("A", 1), line("B", 1), line("C", 2)],
        vec![
            edge(&f2, 0, 1, "x + 1")?,
            edge(&f2, 1, 2, "x + 1")?,
            edge(&f2, 2, 0, "x")?,
        ],
    )?;

    let red = fibred_product_reduce(&g)?;
    println!("fibred product in {:?}:", red.variety.vars());
    for eq in red.variety.equation_texts() {
        println!("  {eq} = 0");
    }
    println!("profile {:?}, blocks {:?}", red.variety.profile(), red.blocks);

    for k in 1..=3 {
        println!("N({k}) = {}", graph_count_direct(&g, k, &cfg)?);
    }
    let report = reduction_check(&g, 3, 12, 3, 1e-6, &cfg)?;
    println!(
        "direct {:?} reduced {:?} -> Z = {}",
        report.direct,
        report.reduced,
        report.function.as_ref().map_or("?", |f| f.display.as_str())
    );
    println!("pass: {}", report.pass);
    Ok(())
}
