//! Singular value decomposition via one-sided Jacobi rotations.
//!
//! The decoder depends on the *smallest* singular value and its right
//! singular vector, so the method is chosen for relative accuracy on the
//! small end of the spectrum: cyclic sweeps of plane rotations applied to
//! column pairs until every off-diagonal Gram entry `|a_i . a_j|` drops
//! below `1e-14 * ||a_i|| * ||a_j||`. A sweep cap of 60 turns
//! non-convergence into an explicit error instead of a silently wrong
//! factorization.

use crate::error::{Error, Result};
use crate::linalg::matrix::{Matrix, Vector};

const CONV_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 60;

/// Columns whose norm falls below this fraction of the largest column are
/// deflated: they carry a (numerically) zero singular value, and rotating
/// them forever against the relative convergence test would never
/// terminate on exactly singular input. Their left vectors come from
/// basis completion instead of normalization, since a deflated column's
/// direction is rounding noise.
const DEFLATE_TOL: f64 = 1e-14;

/// Factors `M = U . diag(sigma) . V^T` with `U` square `m x m`, `V` square
/// `c x c`, and `sigma` the `c` singular values in descending order.
///
/// Right singular vectors are sign-normalized so their largest-magnitude
/// entry is positive (the paired `U` column is flipped with them). For
/// repeated singular values the factors are one valid choice among many;
/// downstream decoding relies on the residual verification step, not on
/// uniqueness of the factors.
#[derive(Debug, Clone)]
pub struct SvdResult {
    u: Matrix,
    sigma: Vector,
    v: Matrix,
}

impl SvdResult {
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn sigma(&self) -> &Vector {
        &self.sigma
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// `U . diag(sigma) . V^T`, for residual checks.
    pub fn reconstruct(&self) -> Matrix {
        let m = self.u.rows();
        let c = self.v.rows();
        let mut out = Matrix::zeros(m, c);
        for k in 0..c {
            let s = self.sigma.get(k);
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let uik = self.u.get(i, k) * s;
                for j in 0..c {
                    out.set(i, j, out.get(i, j) + uik * self.v.get(j, k));
                }
            }
        }
        out
    }
}

pub fn svd(m: &Matrix) -> Result<SvdResult> {
    require_tall(m)?;
    let mut work = Workspace::new(m, true);
    work.run()?;
    work.sort_descending();
    let (u, slots) = work.left_vectors_full();
    let mut u = u;
    complete_basis(&mut u, m.rows(), &slots);
    let mut v = work.v.expect("V accumulated");
    sign_normalize(&mut u, &mut v, m.rows(), m.cols());
    Ok(SvdResult {
        u: col_major_to_matrix(&u, m.rows(), m.rows()),
        sigma: Vector::new(work.sigma)?,
        v: col_major_to_matrix(&v, m.cols(), m.cols()),
    })
}

/// Singular values only (descending), skipping the factor accumulation.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    require_tall(m)?;
    let mut work = Workspace::new(m, false);
    work.run()?;
    work.sort_descending();
    Ok(work.sigma)
}

/// The smallest singular value and its right singular vector, unit norm,
/// sign-normalized like the columns of [`svd`]'s `V`.
pub fn smallest_singular_pair(m: &Matrix) -> Result<(f64, Vector)> {
    require_tall(m)?;
    let mut work = Workspace::new(m, true);
    work.run()?;
    work.sort_descending();
    let v = work.v.expect("V accumulated");
    let c = m.cols();
    let mut last: Vec<f64> = (0..c).map(|i| v[(c - 1) * c + i]).collect();
    flip_to_positive_max(&mut last);
    Ok((work.sigma[c - 1], Vector::new(last)?))
}

/// Unit vector `z` with `M z = 0` for a matrix with exactly one more
/// column than rows (rank at most `rows`). Used by the decoder when the
/// basis is square: the last right singular direction then belongs to
/// singular value zero.
pub(crate) fn kernel_direction(m: &Matrix) -> Result<Vector> {
    if m.rows() + 1 != m.cols() {
        return Err(Error::ShapeMismatch {
            context: "kernel direction needs cols = rows + 1",
            expected: format!("{} cols", m.rows() + 1),
            got: format!("{}", m.cols()),
        });
    }
    let mt = m.transpose();
    let mut work = Workspace::new(&mt, false);
    work.run()?;
    work.sort_descending();
    let (mut u, slots) = work.left_vectors_full();
    complete_basis(&mut u, mt.rows(), &slots);
    // The first completed slot spans the orthogonal complement of the
    // range of M^T, i.e. the kernel of M.
    let slot = slots.first().copied().unwrap_or(mt.rows() - 1);
    let rows = mt.rows();
    let mut z: Vec<f64> = u[slot * rows..(slot + 1) * rows].to_vec();
    flip_to_positive_max(&mut z);
    Vector::new(z)
}

fn require_tall(m: &Matrix) -> Result<()> {
    if m.rows() < m.cols() {
        return Err(Error::ShapeMismatch {
            context: "svd requires rows >= cols",
            expected: format!(">= {} rows", m.cols()),
            got: format!("{}", m.rows()),
        });
    }
    Ok(())
}

struct Workspace {
    rows: usize,
    cols: usize,
    /// Column-major working copy; becomes `M . V` at convergence.
    a: Vec<f64>,
    /// Column-major accumulated right rotations.
    v: Option<Vec<f64>>,
    sigma: Vec<f64>,
}

impl Workspace {
    fn new(m: &Matrix, accumulate_v: bool) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut a = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                a[j * rows + i] = m.get(i, j);
            }
        }
        let v = accumulate_v.then(|| {
            let mut v = vec![0.0; cols * cols];
            for j in 0..cols {
                v[j * cols + j] = 1.0;
            }
            v
        });
        Self { rows, cols, a, v, sigma: Vec::new() }
    }

    fn run(&mut self) -> Result<()> {
        let (rows, cols) = (self.rows, self.cols);
        let mut norms = vec![0.0; cols];
        for _ in 0..MAX_SWEEPS {
            for (j, n) in norms.iter_mut().enumerate() {
                let col = &self.a[j * rows..(j + 1) * rows];
                *n = col.iter().map(|x| x * x).sum();
            }
            let max_norm = norms.iter().fold(0.0_f64, |a, &b| a.max(b));
            let deflated = DEFLATE_TOL * DEFLATE_TOL * max_norm;
            let mut rotated = false;
            for i in 0..cols - 1 {
                if norms[i] <= deflated {
                    continue;
                }
                for j in i + 1..cols {
                    if norms[j] <= deflated {
                        continue;
                    }
                    let d = {
                        let ci = &self.a[i * rows..(i + 1) * rows];
                        let cj = &self.a[j * rows..(j + 1) * rows];
                        ci.iter().zip(cj.iter()).map(|(x, y)| x * y).sum::<f64>()
                    };
                    if d * d <= CONV_TOL * CONV_TOL * norms[i] * norms[j] {
                        continue;
                    }
                    rotated = true;
                    let zeta = (norms[j] - norms[i]) / (2.0 * d);
                    let t = if zeta >= 0.0 {
                        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                    } else {
                        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    rotate_pair(&mut self.a, rows, i, j, c, s);
                    if let Some(v) = self.v.as_mut() {
                        rotate_pair(v, cols, i, j, c, s);
                    }
                    let (ni, nj) = (norms[i], norms[j]);
                    norms[i] = c * c * ni - 2.0 * c * s * d + s * s * nj;
                    norms[j] = s * s * ni + 2.0 * c * s * d + c * c * nj;
                }
            }
            if !rotated {
                self.sigma = (0..cols)
                    .map(|j| {
                        let col = &self.a[j * rows..(j + 1) * rows];
                        col.iter().map(|x| x * x).sum::<f64>().sqrt()
                    })
                    .collect();
                return Ok(());
            }
        }
        Err(Error::SvdNonConvergence { sweeps: MAX_SWEEPS })
    }

    /// Reorders columns (and V) so sigma is descending; stable on ties.
    fn sort_descending(&mut self) {
        let cols = self.cols;
        let mut order: Vec<usize> = (0..cols).collect();
        let sigma = &self.sigma;
        order.sort_by(|&p, &q| sigma[q].partial_cmp(&sigma[p]).unwrap());
        if order.iter().enumerate().all(|(i, &p)| i == p) {
            return;
        }
        self.sigma = order.iter().map(|&p| sigma[p]).collect();
        self.a = permute_columns(&self.a, self.rows, &order);
        if let Some(v) = self.v.take() {
            self.v = Some(permute_columns(&v, cols, &order));
        }
    }

    /// Normalized non-deflated columns placed into an `rows x rows`
    /// column-major buffer; returns the buffer and the indices of unfilled
    /// slots (deflated singular values plus the `rows - cols` tail).
    fn left_vectors_full(&self) -> (Vec<f64>, Vec<usize>) {
        let (rows, cols) = (self.rows, self.cols);
        let cutoff = DEFLATE_TOL * self.sigma.first().copied().unwrap_or(0.0);
        let mut u = vec![0.0; rows * rows];
        let mut slots = Vec::new();
        for k in 0..rows {
            if k < cols && self.sigma[k] > cutoff {
                let inv = 1.0 / self.sigma[k];
                let col = &self.a[k * rows..(k + 1) * rows];
                for (i, x) in col.iter().enumerate() {
                    u[k * rows + i] = x * inv;
                }
            } else {
                slots.push(k);
            }
        }
        (u, slots)
    }
}

fn rotate_pair(buf: &mut [f64], len: usize, i: usize, j: usize, c: f64, s: f64) {
    debug_assert!(i < j);
    let (left, right) = buf.split_at_mut(j * len);
    let ci = &mut left[i * len..(i + 1) * len];
    let cj = &mut right[..len];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

fn permute_columns(buf: &[f64], len: usize, order: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; buf.len()];
    for (dst, &src) in order.iter().enumerate() {
        out[dst * len..(dst + 1) * len].copy_from_slice(&buf[src * len..(src + 1) * len]);
    }
    out
}

/// Fills the listed empty slots of a column-major `dim x dim` buffer with
/// unit vectors orthogonal to all filled columns. Greedy: repeatedly
/// orthogonalize the standard basis vector with the largest residual
/// against the current columns (re-orthogonalized once for stability).
fn complete_basis(u: &mut [f64], dim: usize, slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let mut filled: Vec<usize> = (0..dim).filter(|k| !slots.contains(k)).collect();
    // row_mass[j] = squared norm of row j over filled columns; the residual
    // of e_j against the filled span is 1 - row_mass[j].
    let mut row_mass = vec![0.0; dim];
    for &k in &filled {
        for i in 0..dim {
            row_mass[i] += u[k * dim + i] * u[k * dim + i];
        }
    }
    for &slot in slots {
        let mut best = 0usize;
        for j in 1..dim {
            if row_mass[j] < row_mass[best] {
                best = j;
            }
        }
        let mut r = vec![0.0; dim];
        r[best] = 1.0;
        for _pass in 0..2 {
            for &k in &filled {
                let col = &u[k * dim..(k + 1) * dim];
                let proj: f64 = col.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
                for (ri, ci) in r.iter_mut().zip(col.iter()) {
                    *ri -= proj * ci;
                }
            }
        }
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        debug_assert!(norm > 1e-8, "basis completion lost orthogonality");
        for (i, x) in r.iter().enumerate() {
            let val = x / norm;
            u[slot * dim + i] = val;
            row_mass[i] += val * val;
        }
        filled.push(slot);
    }
}

/// Flips each V column (and the paired U column) so the V entry of largest
/// magnitude is positive; removes the factor-of-minus-one ambiguity.
fn sign_normalize(u: &mut [f64], v: &mut [f64], rows: usize, cols: usize) {
    for k in 0..cols {
        let col = &mut v[k * cols..(k + 1) * cols];
        let mut arg = 0usize;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[arg].abs() {
                arg = i;
            }
        }
        if col[arg] < 0.0 {
            for x in col.iter_mut() {
                *x = -*x;
            }
            for x in u[k * rows..(k + 1) * rows].iter_mut() {
                *x = -*x;
            }
        }
    }
}

fn flip_to_positive_max(v: &mut [f64]) {
    let mut arg = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[arg].abs() {
            arg = i;
        }
    }
    if v[arg] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn col_major_to_matrix(buf: &[f64], rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m.set(i, j, buf[j * rows + i]);
        }
    }
    m
}
