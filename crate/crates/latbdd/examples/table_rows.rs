//! Run a small batch of experiment cells and write the CSV + JSON echo,
//! sweeping the aspect ratio beta at fixed theta = 2.
//!
//! ```bash
//! cargo run --release --example table_rows
//! ```

use latbdd::harness::{run_table, DecoderKind, ExperimentSpec, Mode};

fn main() {
    let rows: Vec<ExperimentSpec> = [1.0, 1.1, 1.2, 1.3, 1.5]
        .into_iter()
        .map(|beta| ExperimentSpec {
            n: 100,
            beta,
            theta: 2.0,
            gamma0: 1.0,
            trials: 60,
            seed: 42,
            mode: Mode::LweReal,
            sigma: None,
            decoder: DecoderKind::Svd,
        })
        .collect();
    let path = std::env::temp_dir().join("latbdd_table.csv");
    let results = run_table(&rows, &path).unwrap();
    for r in &results {
        println!(
            "beta = {:.1}: success probability {:.3} (m = {})",
            r.spec.beta, r.probability, r.m
        );
    }
    println!();
    println!("CSV written to {}", path.display());
    println!("spec echo written to {}", path.with_extension("json").display());
}
