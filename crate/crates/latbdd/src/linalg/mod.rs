//! Dense linear algebra: matrix/vector types, the Jacobi SVD, and the
//! handful of lattice statistics built on it.

mod matrix;
mod svd;

pub use matrix::{Matrix, Vector};
pub use svd::{singular_values, smallest_singular_pair, svd, SvdResult};

pub(crate) use svd::kernel_direction;

use crate::error::{Error, Result};

/// Relative threshold below which the smallest singular value is treated
/// as a rank deficiency.
pub const RANK_TOL: f64 = 1e-12;

/// `||B x - b||` for an integer coefficient vector `x`.
pub fn residual_norm(b_mat: &Matrix, x: &[i64], b: &Vector) -> Result<f64> {
    if b.dim() != b_mat.rows() {
        return Err(Error::ShapeMismatch {
            context: "target length",
            expected: format!("{}", b_mat.rows()),
            got: format!("{}", b.dim()),
        });
    }
    let bx = b_mat.matvec_int(x)?;
    Ok(bx.sub(b)?.norm())
}

/// Lattice determinant `sqrt(det(B^T B))`, computed as the product of the
/// singular values of `B`.
pub fn gram_determinant(b_mat: &Matrix) -> Result<f64> {
    let sv = singular_values(b_mat)?;
    let (first, last) = (sv[0], sv[sv.len() - 1]);
    if last < RANK_TOL * first || first == 0.0 {
        return Err(Error::RankDeficient { sigma_min: last, sigma_max: first });
    }
    Ok(sv.iter().product())
}

/// Minkowski's bound `sqrt(n) * det(L)^(1/n)` on the shortest nonzero
/// lattice vector.
pub fn minkowski_bound(b_mat: &Matrix) -> Result<f64> {
    let det = gram_determinant(b_mat)?;
    let n = b_mat.cols() as f64;
    Ok(n.sqrt() * det.powf(1.0 / n))
}
