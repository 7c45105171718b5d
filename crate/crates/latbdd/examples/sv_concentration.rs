//! Empirical concentration of the extreme singular values of Gaussian
//! matrices around 1 -+ sqrt(n/m), with tail-probability checks.
//!
//! ```bash
//! cargo run --release --example sv_concentration
//! ```

use latbdd::harness::sv_concentration;

fn main() {
    for beta in [1.5, 4.0] {
        let summary = sv_concentration(100, beta, 1.0, 200, 1).unwrap();
        print!("{summary}");
        println!();
    }
}
