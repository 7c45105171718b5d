//! Brute-force reference solvers. These exist to check the fast paths on
//! tiny inputs and fail loudly rather than run unbounded.

use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix, Vector};
use crate::sat::CnfFormula;

/// Guard on exhaustive CVP enumeration.
pub const MAX_ENUMERATION_CELLS: u128 = 100_000_000;

/// Guard on truth-table SAT.
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

/// Per-coordinate integer bounds for exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl SearchBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameter("box bounds must be non-empty and equal length".into()));
        }
        if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
            return Err(Error::InvalidParameter("box has lo > hi".into()));
        }
        let b = Self { lo, hi };
        let cells = b.cell_count();
        if cells > MAX_ENUMERATION_CELLS {
            return Err(Error::BoxTooLarge { cells, limit: MAX_ENUMERATION_CELLS });
        }
        Ok(b)
    }

    /// `[-bound, bound]` in every one of `n` coordinates.
    pub fn symmetric(n: usize, bound: i64) -> Result<Self> {
        Self::new(vec![-bound; n], vec![bound; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn cell_count(&self) -> u128 {
        self.lo
            .iter()
            .zip(self.hi.iter())
            .map(|(a, b)| (b - a + 1) as u128)
            .product()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(self.hi.iter()))
                .all(|(v, (a, b))| a <= v && v <= b)
    }
}

/// Exhaustive closest-vector search over a coefficient box. Returns the
/// minimizer of `||B x - b||` and its distance; ties go to the
/// lexicographically smallest `x`.
pub fn brute_force_cvp(
    b_mat: &Matrix,
    target: &Vector,
    search: &SearchBox,
) -> Result<(Vec<i64>, f64)> {
    if search.dim() != b_mat.cols() {
        return Err(Error::ShapeMismatch {
            context: "box dimension",
            expected: format!("{}", b_mat.cols()),
            got: format!("{}", search.dim()),
        });
    }
    if target.dim() != b_mat.rows() {
        return Err(Error::ShapeMismatch {
            context: "target length",
            expected: format!("{}", b_mat.rows()),
            got: format!("{}", target.dim()),
        });
    }
    let n = b_mat.cols();
    let m = b_mat.rows();
    // Columns up front so the depth-first walk can add/remove them.
    let columns: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| b_mat.get(i, j)).collect())
        .collect();
    // residual accumulator starts at -b and follows B x - b.
    let mut acc: Vec<f64> = (0..m).map(|i| -target.get(i)).collect();
    let mut x = search.lo.clone();
    // Walk to the first cell: acc += sum_j lo_j * col_j.
    for j in 0..n {
        axpy(&mut acc, search.lo[j] as f64, &columns[j]);
    }
    let mut best_x = x.clone();
    let mut best_d2 = norm_sq(&acc);
    loop {
        // Odometer step over coordinates, least-significant last, which
        // visits cells in lexicographic order.
        let mut depth = n;
        loop {
            if depth == 0 {
                // Recompute the winning distance from scratch: the running
                // accumulator drifts over long enumerations.
                let exact = crate::linalg::residual_norm(b_mat, &best_x, target)?;
                return Ok((best_x, exact));
            }
            depth -= 1;
            if x[depth] < search.hi[depth] {
                x[depth] += 1;
                axpy(&mut acc, 1.0, &columns[depth]);
                break;
            }
            // reset this digit and carry
            axpy(&mut acc, (search.lo[depth] - x[depth]) as f64, &columns[depth]);
            x[depth] = search.lo[depth];
        }
        let d2 = norm_sq(&acc);
        if d2 < best_d2 {
            best_d2 = d2;
            best_x.copy_from_slice(&x);
        }
    }
}

fn axpy(acc: &mut [f64], a: f64, col: &[f64]) {
    if a == 0.0 {
        return;
    }
    for (r, c) in acc.iter_mut().zip(col.iter()) {
        *r += a * c;
    }
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// A box guaranteed to contain every coefficient vector whose lattice
/// point lies within distance `r` of the target: any such `x` satisfies
/// `||x|| <= ||B x|| / sigma_n(B) <= (||b|| + r) / sigma_n(B)`.
pub fn default_box(b_mat: &Matrix, target: &Vector, r: f64) -> Result<SearchBox> {
    let sv = singular_values(b_mat)?;
    let (first, last) = (sv[0], sv[sv.len() - 1]);
    if last < crate::linalg::RANK_TOL * first || first == 0.0 {
        return Err(Error::RankDeficient { sigma_min: last, sigma_max: first });
    }
    let bound = ((target.norm() + r) / last).ceil() as i64;
    SearchBox::symmetric(b_mat.cols(), bound)
}

/// Exhaustive satisfiability over all `2^k` assignments; returns the first
/// witness in ascending bitmask order when one exists.
pub fn truth_table_sat(f: &CnfFormula) -> Result<(bool, Option<Vec<bool>>)> {
    let k = f.num_vars();
    if k > MAX_TRUTH_TABLE_VARS {
        return Err(Error::TooManyVariables { vars: k, limit: MAX_TRUTH_TABLE_VARS });
    }
    for bits in 0u64..1u64 << k {
        let assignment: Vec<bool> = (0..k).map(|j| bits >> j & 1 == 1).collect();
        if f.evaluate(&assignment) {
            return Ok((true, Some(assignment)));
        }
    }
    Ok((false, None))
}
