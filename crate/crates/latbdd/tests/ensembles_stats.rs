//! Distributional checks on the samplers: Kolmogorov-Smirnov against the
//! normal law, and smallest-singular-value concentration of Gaussian
//! matrices.

mod common;

use latbdd::ensembles::{sample_matrix, DistributionSpec};
use latbdd::harness::sv_concentration;
use latbdd::rng::SplitMix64;

#[test]
fn gaussian_sampler_passes_ks_at_one_percent() {
    let sigma = 17.0;
    let n = 100_000;
    let mut rng = SplitMix64::new(1234);
    let mut samples: Vec<f64> = (0..n).map(|_| rng.normal(sigma)).collect();
    let d = common::ks_statistic(&mut samples, |x| common::normal_cdf(x, sigma));
    // 1% critical value: 1.6276 / sqrt(n).
    let critical = 1.6276 / (n as f64).sqrt();
    assert!(d < critical, "KS statistic {d} >= critical {critical}");
}

#[test]
fn uniform_sampler_passes_ks_at_one_percent() {
    let gamma = 2.0;
    let n = 100_000;
    let spec = DistributionSpec::uniform_interval(gamma).unwrap();
    let m = sample_matrix(&spec, 1000, 100, 4321);
    let mut samples: Vec<f64> = m.entries().to_vec();
    let d = common::ks_statistic(&mut samples, |x| {
        ((x + gamma) / (2.0 * gamma)).clamp(0.0, 1.0)
    });
    let critical = 1.6276 / (n as f64).sqrt();
    assert!(d < critical, "KS statistic {d} >= critical {critical}");
}

#[test]
fn smallest_singular_value_concentrates() {
    // 200 draws at m = 150, n = 100: the fraction of draws with
    // sigma_n/(sigma sqrt(m)) at least 0.1 below the limit must stay
    // under the concentration bound plus statistical slack.
    let summary = sv_concentration(100, 1.5, 1.0, 200, 99).unwrap();
    let limit = 1.0 - (1.0f64 / 1.5).sqrt();
    assert!(
        (summary.mean_smallest - limit).abs() <= 0.05,
        "mean {} vs limit {limit}",
        summary.mean_smallest
    );
    let check = summary.checks.iter().find(|c| (c.t - 0.1).abs() < 1e-12).unwrap();
    let bound = (-(summary.m as f64) * 0.1 * 0.1 / 2.0).exp();
    assert!(check.lower_rate <= bound + 0.05, "rate {} bound {bound}", check.lower_rate);
    assert!(!check.flagged);
}

#[test]
fn largest_singular_value_tracks_upper_edge() {
    let summary = sv_concentration(80, 4.0, 2.5, 60, 5).unwrap();
    // beta = 4: edges at 1 -+ 1/2.
    assert!((summary.mean_smallest - 0.5).abs() <= 0.05);
    assert!((summary.mean_largest - 1.5).abs() <= 0.05);
}
