//! Reduce a CNF formula to a lattice instance, decode at radius sqrt(n),
//! and lift the lattice point back to a satisfying assignment.
//!
//! ```bash
//! cargo run --release --example sat_to_lattice
//! ```

use latbdd::decoder::{decode_with_scan, BddInstance};
use latbdd::oracle::truth_table_sat;
use latbdd::sat::{
    assignment_to_coeffs, build_reduction, distance_check, lift_solution, parse_dimacs, to_3cnf,
    LiftOutcome,
};

const FORMULA: &str = "c five 3-clauses over four variables
p cnf 4 5
1 2 3 0
-1 2 4 0
-2 -3 4 0
1 3 -4 0
-2 -3 -4 0
";

fn main() {
    let formula = to_3cnf(&parse_dimacs(FORMULA).unwrap());
    let red = build_reduction(&formula).unwrap();
    let (m, n) = red.dims();
    println!(
        "formula: {} vars, {} clauses -> basis {m}x{n}, every entry bounded by {}",
        formula.num_vars(),
        formula.num_clauses(),
        red.basis().max_abs_entry()
    );

    let radius = (n as f64).sqrt();
    println!("satisfiable iff some lattice point sits within sqrt({n}) = {radius:.4} of the target");

    let inst = BddInstance::new(red.basis().clone(), red.target().clone(), radius).unwrap();
    let outcome = decode_with_scan(&inst);
    match outcome.coefficients() {
        Some(coeffs) => {
            println!(
                "decoder found a lattice point at residual {:.4} after {} candidates",
                outcome.residual().unwrap(),
                outcome.candidates_tried
            );
            match lift_solution(&red, coeffs).unwrap() {
                LiftOutcome::Accepted(assignment) => {
                    println!("lifted assignment: {assignment:?}");
                    println!("formula satisfied: {}", formula.evaluate(&assignment));
                }
                LiftOutcome::Rejected(reason) => println!("lift rejected: {reason}"),
            }
        }
        None => {
            // SAT-derived lattices are exactly the hard case for this
            // decoder; fall back to the exhaustive reference solver.
            let (sat, witness) = truth_table_sat(&formula).unwrap();
            println!("decoder failed; truth table says satisfiable = {sat}");
            if let Some(w) = witness {
                let coeffs = assignment_to_coeffs(&red, &w).unwrap();
                println!(
                    "witness {w:?} maps to lattice coordinates {coeffs:?} at distance {:.4}",
                    distance_check(&red, &coeffs).unwrap()
                );
                match lift_solution(&red, &coeffs).unwrap() {
                    LiftOutcome::Accepted(a) => println!("lift round-trip returns {a:?}"),
                    LiftOutcome::Rejected(r) => println!("unexpected rejection: {r}"),
                }
            }
        }
    }
}
