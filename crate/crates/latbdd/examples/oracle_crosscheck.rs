//! Cross-check the decoder against exhaustive closest-vector search on a
//! tiny instance.
//!
//! ```bash
//! cargo run --release --example oracle_crosscheck
//! ```

use latbdd::decoder::decode;
use latbdd::ensembles::generate_gaussian_bdd;
use latbdd::oracle::{brute_force_cvp, default_box};

fn main() {
    let planted = generate_gaussian_bdd(4, 1.6, 9.0, 1.2, 3).unwrap();
    let inst = &planted.instance;
    println!("instance {}x{}, radius {:.3}", inst.dims().0, inst.dims().1, inst.radius());

    let search = default_box(inst.basis(), inst.target(), inst.radius()).unwrap();
    println!("coefficient box holds {} cells", search.cell_count());

    let (x_star, dist) = brute_force_cvp(inst.basis(), inst.target(), &search).unwrap();
    println!("exhaustive minimum: x* = {x_star:?}, distance {dist:.4}");

    let outcome = decode(inst);
    match outcome.coefficients() {
        Some(x) => {
            println!("decoder: x = {x:?}, residual {:.4}", outcome.residual().unwrap());
            println!("agree with oracle: {}", x == x_star.as_slice());
            println!("planted secret: {:?}", planted.planted_x);
        }
        None => println!("decoder failed; oracle distance was {dist:.4}"),
    }
}
