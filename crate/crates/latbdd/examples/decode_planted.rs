//! Generate a planted Gaussian instance and decode it three ways.
//!
//! ```bash
//! cargo run --release --example decode_planted
//! ```

use latbdd::decoder::{decode, decode_with_scan, least_squares_decode, DecodeStatus};
use latbdd::ensembles::generate_gaussian_bdd;
use latbdd::linalg::singular_values;

fn main() {
    let n = 60;
    let radius = (n as f64).sqrt();
    // sigma = 17 and m = ceil(4n/3) put the instance deep inside the
    // provable-recovery regime.
    let planted = generate_gaussian_bdd(n, 4.0 / 3.0, 17.0, radius, 7).unwrap();
    let inst = &planted.instance;
    let (m, _) = inst.dims();
    println!("instance: {m}x{n}, radius {radius:.3}, planted error norm {:.3}", planted.error.norm());

    let sv = singular_values(inst.basis()).unwrap();
    println!(
        "sigma_n(B) = {:.2} vs 2r = {:.2}: single-candidate recovery is {}guaranteed",
        sv[n - 1],
        2.0 * radius,
        if sv[n - 1] > 2.0 * radius { "" } else { "not " }
    );

    for (name, outcome) in [
        ("svd", decode(inst)),
        ("svd-scan", decode_with_scan(inst)),
        ("least-squares", least_squares_decode(inst)),
    ] {
        match &outcome.status {
            DecodeStatus::Success { coefficients, residual } => {
                let exact = coefficients == &planted.planted_x;
                println!(
                    "{name:>13}: success, residual {residual:.4}, candidates {}, planted secret recovered: {exact}",
                    outcome.candidates_tried
                );
            }
            DecodeStatus::Failure { reason } => {
                println!("{name:>13}: failure ({})", reason.as_str());
            }
        }
    }
}
