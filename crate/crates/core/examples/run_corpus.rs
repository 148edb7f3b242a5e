//! Runs every instance of the bundled corpus through the matching command
//! and prints one status line each.
//!
//!     cargo run --release --example run_corpus

use std::path::Path;

use partial_zeta::cli::{run_on_bytes, Command, GlobalOpts, Instance, ReconstructOpts};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let global = GlobalOpts::default();
    for dir in ["varieties", "graphs", "artin_schreier"] {
        let mut paths: Vec<_> = std::fs::read_dir(root.join(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let bytes = std::fs::read(&path)?;
            let inst = Instance::from_json(std::str::from_utf8(&bytes)?)?;
            let file = path.clone();
            let cmd = match inst {
                Instance::Variety(_) => Command::Zeta {
                    file,
                    opts: ReconstructOpts::default(),
                    fresh: 2,
                },
                Instance::Graph(_) => Command::Graph {
                    file,
                    k_max: 3,
                    opts: ReconstructOpts::default(),
                },
                Instance::ArtinSchreier(_) => Command::As {
                    file,
                    d_list: vec![],
                    search_degree: 2,
                },
            };
            let (report, code) = run_on_bytes(&cmd, &bytes, &global)?;
            let ms = report.execution.as_ref().map_or(0.0, |e| e.wall_ms);
            println!(
                "{:<40} {:<9} exit {} {:>9.1} ms",
                path.strip_prefix(&root)?.display(),
                report.status,
                code,
                ms
            );
        }
    }
    Ok(())
}
