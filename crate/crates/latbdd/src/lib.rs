//! SVD-based bounded distance decoding for random lattices.
//!
//! The decoder appends the negated target to the basis, takes the last
//! right singular vector of the result, and rounds its normalized
//! coordinates to integers. On the random ensembles provided here
//! (Gaussian bases, LWE over the reals and over the integers) that single
//! candidate recovers the planted secret with high probability, while a
//! 3-SAT reduction shows the same problem class is intractable in the
//! worst case.
//!
//! The library is organized by capability:
//!
//! - [`linalg`]: dense matrices, a one-sided Jacobi SVD tuned for accurate
//!   small singular values, and lattice statistics (determinant,
//!   Minkowski bound).
//! - [`decoder`]: the single-candidate decoder, a candidate-scan variant,
//!   and a least-squares baseline.
//! - [`ensembles`]: seeded generators for the random instance families.
//! - [`sat`]: DIMACS parsing, 3-CNF normalization, the CNF-to-lattice
//!   reduction, and solution lifting.
//! - [`oracle`]: brute-force CVP and truth-table SAT for cross-checking.
//! - [`harness`]: Monte-Carlo campaigns with CSV/JSON output and
//!   singular-value concentration checks.
//!
//! Each capability has a runnable demonstration under `examples/`:
//!
//! ```bash
//! cargo run --release --example decode_planted
//! cargo run --release --example sat_to_lattice
//! cargo run --release --example lwe_experiment
//! cargo run --release --example sv_concentration
//! cargo run --release --example oracle_crosscheck
//! cargo run --release --example table_rows
//! ```
//!
//! The same functionality is scriptable through the thin `latbdd` binary
//! (`decode`, `gen`, `reduce-sat`, `lift`, `experiment`, `table`,
//! `sv-check`).

pub mod cli;
pub mod decoder;
pub mod ensembles;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod sat;
pub mod textio;

pub use decoder::{decode, decode_with_scan, least_squares_decode, BddInstance, DecodeOutcome};
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
