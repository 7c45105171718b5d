//! CNF formulas and their reduction to integer lattice decoding instances.
//!
//! A 3-CNF with `k` variables and `t` clauses maps to a `(k+3t) x (k+2t)`
//! integer basis and target with entries bounded by 2. The formula is
//! satisfiable exactly when the lattice contains a point at distance
//! `sqrt(k+2t)` from the target, and the witness can be read back off the
//! coefficient vector.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// A CNF formula over variables `1..=num_vars`. Literals are signed
/// variable indices. Clauses are deduplicated and tautology-free; lengths
/// above 3 are allowed here and removed by [`to_3cnf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(clauses.len());
        for (idx, clause) in clauses.into_iter().enumerate() {
            normalized.push(normalize_clause(clause, num_vars, idx + 1)?);
        }
        Ok(Self { num_vars, clauses: normalized })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn is_3cnf(&self) -> bool {
        self.clauses.iter().all(|c| c.len() <= 3)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        debug_assert!(assignment.len() >= self.num_vars);
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                if lit > 0 {
                    assignment[var]
                } else {
                    !assignment[var]
                }
            })
        })
    }
}

fn normalize_clause(clause: Vec<i32>, num_vars: usize, clause_no: usize) -> Result<Vec<i32>> {
    if clause.is_empty() {
        return Err(Error::Parse { line: clause_no, msg: format!("clause {clause_no} is empty") });
    }
    let mut out: Vec<i32> = Vec::with_capacity(clause.len());
    for lit in clause {
        if lit == 0 {
            return Err(Error::Parse {
                line: clause_no,
                msg: format!("clause {clause_no} contains a zero literal"),
            });
        }
        let var = lit.unsigned_abs() as usize;
        if var > num_vars {
            return Err(Error::Parse {
                line: clause_no,
                msg: format!("clause {clause_no}: variable {var} out of range 1..={num_vars}"),
            });
        }
        if out.contains(&-lit) {
            return Err(Error::Parse {
                line: clause_no,
                msg: format!("clause {clause_no} is tautological (contains x and not-x)"),
            });
        }
        if !out.contains(&lit) {
            out.push(lit);
        }
    }
    Ok(out)
}

/// Parses DIMACS CNF: a `p cnf <vars> <clauses>` header, clauses as
/// whitespace-separated literals terminated by `0`, `c` comment lines
/// anywhere. Clause and variable counts must match the header.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_start_line = 0usize;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse { line: line_no, msg: "duplicate header".into() });
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[1] != "cnf" {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "malformed header, expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let vars = toks[2].parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad variable count: {e}"),
            })?;
            let count = toks[3].parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad clause count: {e}"),
            })?;
            header = Some((vars, count));
            continue;
        }
        let (num_vars, _) = header.ok_or(Error::Parse {
            line: line_no,
            msg: "clause data before `p cnf` header".into(),
        })?;
        for tok in line.split_whitespace() {
            let lit = tok.parse::<i32>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad literal `{tok}`: {e}"),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Parse { line: line_no, msg: "empty clause".into() });
                }
                let clause = std::mem::take(&mut current);
                clauses.push(normalize_clause(clause, num_vars, clause_start_line.max(line_no))?);
            } else {
                if current.is_empty() {
                    clause_start_line = line_no;
                }
                if lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("variable {} out of range 1..={num_vars}", lit.unsigned_abs()),
                    });
                }
                current.push(lit);
            }
        }
    }
    let (num_vars, expected) = header.ok_or(Error::Parse { line: 0, msg: "missing `p cnf` header".into() })?;
    if !current.is_empty() {
        return Err(Error::Parse {
            line: clause_start_line,
            msg: "unterminated clause (missing trailing 0)".into(),
        });
    }
    if clauses.len() != expected {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {expected} clauses, file has {}", clauses.len()),
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Replaces every clause longer than 3 literals by a chain over `l - 2`
/// fresh variables:
///
/// ```text
/// (z1 v z2 v y1) ^ (!y1 v z3 v y2) ^ ... ^ (!y_{l-3} v z_{l-1} v y_{l-2})
///                ^ (!y_{l-2} v z_{l-1} v z_l)
/// ```
///
/// Equisatisfiable with the input (`y_i` encodes "none of z1..z_{i+1}
/// holds yet"); clauses of length at most 3 pass through unchanged.
pub fn to_3cnf(f: &CnfFormula) -> CnfFormula {
    let mut num_vars = f.num_vars;
    let mut clauses: Vec<Vec<i32>> = Vec::with_capacity(f.clauses.len());
    for clause in &f.clauses {
        let l = clause.len();
        if l <= 3 {
            clauses.push(clause.clone());
            continue;
        }
        let fresh_base = num_vars as i32;
        num_vars += l - 2;
        let y = |i: usize| fresh_base + i as i32; // y(1)..y(l-2)
        clauses.push(vec![clause[0], clause[1], y(1)]);
        for i in 2..=l - 2 {
            clauses.push(vec![-y(i - 1), clause[i], y(i)]);
        }
        clauses.push(vec![-y(l - 2), clause[l - 2], clause[l - 1]]);
    }
    CnfFormula { num_vars, clauses }
}

/// The lattice instance built from a 3-CNF: basis, target, and the
/// clause/variable bookkeeping needed to lift solutions back.
#[derive(Debug, Clone)]
pub struct SatReduction {
    basis: Matrix,
    target: Vector,
    k: usize,
    t: usize,
    incidence: Matrix,
    negation_counts: Vector,
}

impl SatReduction {
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn target(&self) -> &Vector {
        &self.target
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Rebuilds the bookkeeping from basis and target files: the incidence
    /// block sits in the first `t` rows and `k` columns, and the negation
    /// counts are `2 - target_i` there.
    pub fn from_parts(basis: Matrix, target: Vector, k: usize, t: usize) -> Result<Self> {
        let (m, n) = (k + 3 * t, k + 2 * t);
        if basis.rows() != m || basis.cols() != n {
            return Err(Error::ShapeMismatch {
                context: "reduction basis dims",
                expected: format!("{m}x{n}"),
                got: format!("{}x{}", basis.rows(), basis.cols()),
            });
        }
        if target.dim() != m {
            return Err(Error::ShapeMismatch {
                context: "reduction target length",
                expected: format!("{m}"),
                got: format!("{}", target.dim()),
            });
        }
        let mut incidence = Matrix::zeros(t, k);
        for i in 0..t {
            for j in 0..k {
                incidence.set(i, j, basis.get(i, j));
            }
        }
        let negation_counts =
            Vector::new((0..t).map(|i| 2.0 - target.get(i)).collect::<Vec<_>>())
                .unwrap_or_else(|_| Vector::zeros(t));
        Ok(Self { basis, target, k, t, incidence, negation_counts })
    }

    pub fn incidence(&self) -> &Matrix {
        &self.incidence
    }

    pub fn negation_counts(&self) -> &Vector {
        &self.negation_counts
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.k + 3 * self.t, self.k + 2 * self.t)
    }

    /// Exact squared distance `||B c - b||^2` over the integers.
    pub fn squared_distance_int(&self, coeffs: &[i64]) -> Result<i128> {
        let (m, n) = self.dims();
        if coeffs.len() != n {
            return Err(Error::ShapeMismatch {
                context: "coefficient length",
                expected: format!("{n}"),
                got: format!("{}", coeffs.len()),
            });
        }
        let mut total: i128 = 0;
        for i in 0..m {
            let mut acc: i128 = 0;
            let row = self.basis.row(i);
            for (j, &c) in coeffs.iter().enumerate() {
                acc += row[j] as i128 * c as i128;
            }
            acc -= self.target.get(i) as i128;
            total += acc * acc;
        }
        Ok(total)
    }
}

impl fmt::Display for SatReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, n) = self.dims();
        write!(f, "sat reduction k={} t={} ({m}x{n})", self.k, self.t)
    }
}

/// Builds the block basis and target for a 3-CNF `f` with `k` variables
/// and `t` clauses:
///
/// ```text
///     [ A    I_t   0   ]          [ 2 J_t - r ]
/// B = [ 2I_k  0    0   ]      b = [   J_k     ]
///     [ 0    2I_t  2I_t]          [   J_t     ]
///     [ 0     0    2I_t]          [   J_t     ]
/// ```
///
/// where `A` is the clause/variable incidence matrix and `r_i` counts the
/// negated literals of clause `i`. Coefficient vectors are read as
/// `(x, y - z, z)` blocks.
pub fn build_reduction(f: &CnfFormula) -> Result<SatReduction> {
    if !f.is_3cnf() {
        return Err(Error::InvalidParameter(
            "formula has clauses longer than 3 literals; normalize with to_3cnf first".into(),
        ));
    }
    if f.num_clauses() == 0 {
        return Err(Error::InvalidParameter("formula has no clauses".into()));
    }
    let (k, t) = (f.num_vars(), f.num_clauses());
    let (m, n) = (k + 3 * t, k + 2 * t);
    let mut incidence = Matrix::zeros(t, k);
    let mut negations = vec![0.0; t];
    for (i, clause) in f.clauses().iter().enumerate() {
        for &lit in clause {
            let j = lit.unsigned_abs() as usize - 1;
            incidence.set(i, j, if lit > 0 { 1.0 } else { -1.0 });
            if lit < 0 {
                negations[i] += 1.0;
            }
        }
    }
    let mut basis = Matrix::zeros(m, n);
    let mut target = vec![0.0; m];
    // Rows 0..t: [A | I_t | 0], target 2 - r_i.
    for i in 0..t {
        for j in 0..k {
            basis.set(i, j, incidence.get(i, j));
        }
        basis.set(i, k + i, 1.0);
        target[i] = 2.0 - negations[i];
    }
    // Rows t..t+k: [2 I_k | 0 | 0], target 1.
    for j in 0..k {
        basis.set(t + j, j, 2.0);
        target[t + j] = 1.0;
    }
    // Rows t+k..t+k+t: [0 | 2 I_t | 2 I_t], target 1.
    for i in 0..t {
        basis.set(t + k + i, k + i, 2.0);
        basis.set(t + k + i, k + t + i, 2.0);
        target[t + k + i] = 1.0;
    }
    // Rows t+k+t..m: [0 | 0 | 2 I_t], target 1.
    for i in 0..t {
        basis.set(t + k + t + i, k + t + i, 2.0);
        target[t + k + t + i] = 1.0;
    }
    Ok(SatReduction {
        basis,
        target: Vector::new(target)?,
        k,
        t,
        incidence,
        negation_counts: Vector::new(negations)?,
    })
}

/// Why a coefficient vector failed to lift to a satisfying assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftRejection {
    /// A reconstructed coordinate is outside {0, 1}.
    NonBinary { block: char, index: usize, value: i64 },
    /// A clause row of the linear system is violated.
    LinearMismatch { row: usize, lhs: i64, rhs: i64 },
}

impl fmt::Display for LiftRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftRejection::NonBinary { block, index, value } => {
                write!(f, "non-binary coordinate {block}[{index}] = {value}")
            }
            LiftRejection::LinearMismatch { row, lhs, rhs } => {
                write!(f, "clause row {row}: got {lhs}, expected {rhs}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    Accepted(Vec<bool>),
    Rejected(LiftRejection),
}

impl LiftOutcome {
    pub fn accepted(&self) -> Option<&[bool]> {
        match self {
            LiftOutcome::Accepted(a) => Some(a),
            LiftOutcome::Rejected(_) => None,
        }
    }
}

/// Interprets decoder coefficients as `(x, w, z)` with `y = w + z`,
/// accepts iff `x`, `y`, `z` are all binary and every clause row satisfies
/// `A x + y - z = 2 - r`, and returns the variable assignment on accept.
pub fn lift_solution(red: &SatReduction, coeffs: &[i64]) -> Result<LiftOutcome> {
    let (k, t) = (red.k, red.t);
    if coeffs.len() != k + 2 * t {
        return Err(Error::ShapeMismatch {
            context: "coefficient length",
            expected: format!("{}", k + 2 * t),
            got: format!("{}", coeffs.len()),
        });
    }
    let x = &coeffs[..k];
    let w = &coeffs[k..k + t];
    let z = &coeffs[k + t..];
    for (index, &value) in x.iter().enumerate() {
        if value != 0 && value != 1 {
            return Ok(LiftOutcome::Rejected(LiftRejection::NonBinary { block: 'x', index, value }));
        }
    }
    for index in 0..t {
        let y = w[index] + z[index];
        if y != 0 && y != 1 {
            return Ok(LiftOutcome::Rejected(LiftRejection::NonBinary {
                block: 'y',
                index,
                value: y,
            }));
        }
        if z[index] != 0 && z[index] != 1 {
            return Ok(LiftOutcome::Rejected(LiftRejection::NonBinary {
                block: 'z',
                index,
                value: z[index],
            }));
        }
    }
    for row in 0..t {
        let mut lhs: i64 = 0;
        for j in 0..k {
            lhs += red.incidence.get(row, j) as i64 * x[j];
        }
        lhs += w[row]; // y - z = w
        let rhs = 2 - red.negation_counts.get(row) as i64;
        if lhs != rhs {
            return Ok(LiftOutcome::Rejected(LiftRejection::LinearMismatch { row, lhs, rhs }));
        }
    }
    let assignment: Vec<bool> = x.iter().map(|&v| v == 1).collect();
    Ok(LiftOutcome::Accepted(assignment))
}

/// `||B c - b||` in exact integer arithmetic; equals `sqrt(k + 2t)`
/// exactly when [`lift_solution`] accepts `c`.
pub fn distance_check(red: &SatReduction, coeffs: &[i64]) -> Result<f64> {
    Ok((red.squared_distance_int(coeffs)? as f64).sqrt())
}

/// Maps a satisfying assignment to the coefficient vector `(x, y - z, z)`
/// whose lattice point sits at distance exactly `sqrt(k + 2t)` from the
/// target. Returns `None` if the assignment leaves some clause false.
pub fn assignment_to_coeffs(red: &SatReduction, assignment: &[bool]) -> Option<Vec<i64>> {
    let (k, t) = (red.k, red.t);
    if assignment.len() != k {
        return None;
    }
    let mut coeffs = vec![0i64; k + 2 * t];
    for (j, &bit) in assignment.iter().enumerate() {
        coeffs[j] = i64::from(bit);
    }
    for i in 0..t {
        let mut v: i64 = red.negation_counts.get(i) as i64;
        for j in 0..k {
            v += red.incidence.get(i, j) as i64 * coeffs[j];
        }
        // v counts satisfied literals of clause i; valid range 1..=3.
        let (y, z) = match v {
            1 => (1, 0),
            2 => (0, 0),
            3 => (0, 1),
            _ => return None,
        };
        coeffs[k + i] = y - z;
        coeffs[k + t + i] = z;
    }
    Some(coeffs)
}
