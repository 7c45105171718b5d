//! One Monte-Carlo success-rate measurement for LWE over the reals.
//!
//! ```bash
//! cargo run --release --example lwe_experiment
//! ```

use latbdd::harness::{run_experiment, DecoderKind, ExperimentSpec, Mode, CSV_HEADER};

fn main() {
    let spec = ExperimentSpec {
        n: 100,
        beta: 1.5,
        theta: 2.0,
        gamma0: 1.0,
        trials: 100,
        seed: 7,
        mode: Mode::LweReal,
        sigma: None,
        decoder: DecoderKind::Svd,
    };
    let result = run_experiment(&spec).unwrap();
    println!("{CSV_HEADER}");
    println!("{}", result.csv_line());
    println!();
    println!(
        "recovered the planted secret in {}/{} trials (95% interval [{:.3}, {:.3}])",
        result.successes, result.trials, result.wilson_ci95.0, result.wilson_ci95.1
    );
    println!(
        "mean sigma_n(B) = {:.2}, mean sigma_(n+1)(B,-b) = {:.2}",
        result.mean_sigma_n_b, result.mean_sigma_n1_m
    );
}
