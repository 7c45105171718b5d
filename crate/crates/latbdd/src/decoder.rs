//! Bounded distance decoding driven by the smallest right singular vector.
//!
//! The single-candidate decoder forms `M = (B, -b)`, reads the last column
//! `z` of `V` from an SVD of `M`, rounds `z_i / z_{n+1}` to integers, and
//! keeps the result only if the residual beats the radius. The scan
//! variant widens the search to every distinct rounding of `c z` as
//! `c z_{n+1}` runs over `[0.5, 1.5]`. A least-squares rounding decoder is
//! included as a baseline.

use crate::error::{Error, Result};
use crate::linalg::{self, kernel_direction, smallest_singular_pair, svd, Matrix, Vector};

/// Relative slack on the radius check so exact-integer instances are not
/// rejected by last-ulp noise.
pub const RESIDUAL_SLACK: f64 = 1e-9;

/// `|z_{n+1}|` below this is treated as the algorithm's "last entry is
/// zero" failure; it is beneath double-precision resolution of a unit
/// vector.
pub const ZERO_LAST_ENTRY_TOL: f64 = 1e-12;

/// Hard cap on scan candidates before giving up as a numerical failure.
pub const SCAN_CANDIDATE_CAP: usize = 1_000_000;

/// A basis, a target, and a radius. The basis is not assumed to have full
/// column rank; the decoders tolerate deficiency and report failure.
/// Square bases (`m = n`) are accepted: the appended-target matrix then
/// has a nontrivial kernel that plays the role of the last singular
/// direction.
#[derive(Debug, Clone)]
pub struct BddInstance {
    basis: Matrix,
    target: Vector,
    radius: f64,
}

impl BddInstance {
    pub fn new(basis: Matrix, target: Vector, radius: f64) -> Result<Self> {
        if basis.rows() < basis.cols() {
            return Err(Error::ShapeMismatch {
                context: "basis must have at least as many rows as columns",
                expected: format!(">= {} rows", basis.cols()),
                got: format!("{}", basis.rows()),
            });
        }
        if target.dim() != basis.rows() {
            return Err(Error::ShapeMismatch {
                context: "target length",
                expected: format!("{}", basis.rows()),
                got: format!("{}", target.dim()),
            });
        }
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("radius must be >= 0, got {radius}")));
        }
        Ok(Self { basis, target, radius })
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn target(&self) -> &Vector {
        &self.target
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.basis.rows(), self.basis.cols())
    }

    fn accepts(&self, residual: f64) -> bool {
        residual <= self.radius * (1.0 + RESIDUAL_SLACK)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    ZeroLastEntry,
    ResidualExceedsRadius,
    Numerical,
}

impl FailureReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            FailureReason::ZeroLastEntry => "zero-last-entry",
            FailureReason::ResidualExceedsRadius => "residual-exceeds-radius",
            FailureReason::Numerical => "numerical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecodeStatus {
    Success { coefficients: Vec<i64>, residual: f64 },
    Failure { reason: FailureReason },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub candidates_tried: usize,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.status, DecodeStatus::Success { .. })
    }

    pub fn coefficients(&self) -> Option<&[i64]> {
        match &self.status {
            DecodeStatus::Success { coefficients, .. } => Some(coefficients),
            DecodeStatus::Failure { .. } => None,
        }
    }

    pub fn residual(&self) -> Option<f64> {
        match &self.status {
            DecodeStatus::Success { residual, .. } => Some(*residual),
            DecodeStatus::Failure { .. } => None,
        }
    }

    pub fn failure_reason(&self) -> Option<FailureReason> {
        match &self.status {
            DecodeStatus::Success { .. } => None,
            DecodeStatus::Failure { reason } => Some(*reason),
        }
    }

    fn failure(reason: FailureReason, candidates_tried: usize) -> Self {
        Self { status: DecodeStatus::Failure { reason }, candidates_tried }
    }
}

/// The last right singular direction of `M = (B, -b)` together with its
/// singular value (zero exactly when the basis is square).
fn last_direction(inst: &BddInstance) -> Result<(f64, Vector)> {
    let m = inst.basis.with_appended_column(&inst.target, -1.0)?;
    if m.rows() >= m.cols() {
        smallest_singular_pair(&m)
    } else {
        Ok((0.0, kernel_direction(&m)?))
    }
}

/// Single-candidate decoding. Never panics on finite inputs: numerical
/// trouble inside the SVD is reported as a failure outcome.
pub fn decode(inst: &BddInstance) -> DecodeOutcome {
    decode_with_diag(inst).0
}

/// Like [`decode`] but also exposes the smallest singular value of the
/// appended-target matrix, which the experiment harness records.
pub fn decode_with_diag(inst: &BddInstance) -> (DecodeOutcome, Option<f64>) {
    let (sigma_last, z) = match last_direction(inst) {
        Ok(pair) => pair,
        Err(_) => return (DecodeOutcome::failure(FailureReason::Numerical, 0), None),
    };
    let n = inst.basis.cols();
    let z_last = z.get(n);
    if z_last.abs() < ZERO_LAST_ENTRY_TOL {
        return (DecodeOutcome::failure(FailureReason::ZeroLastEntry, 0), Some(sigma_last));
    }
    let coefficients: Vec<i64> = (0..n)
        .map(|i| (z.get(i) / z_last).round_ties_even() as i64)
        .collect();
    let outcome = verify_candidate(inst, coefficients, 1);
    (outcome, Some(sigma_last))
}

fn verify_candidate(inst: &BddInstance, coefficients: Vec<i64>, tried: usize) -> DecodeOutcome {
    match linalg::residual_norm(&inst.basis, &coefficients, &inst.target) {
        Ok(residual) if inst.accepts(residual) => DecodeOutcome {
            status: DecodeStatus::Success { coefficients, residual },
            candidates_tried: tried,
        },
        Ok(_) => DecodeOutcome::failure(FailureReason::ResidualExceedsRadius, tried),
        Err(_) => DecodeOutcome::failure(FailureReason::Numerical, tried),
    }
}

/// Candidate-scan decoding: tries every distinct integer vector
/// `round(c z)` with `c z_{n+1}` in `[0.5, 1.5]`, in ascending order of
/// `c z_{n+1}`, and returns the first candidate whose residual beats the
/// radius.
pub fn decode_with_scan(inst: &BddInstance) -> DecodeOutcome {
    let (_, z) = match last_direction(inst) {
        Ok(pair) => pair,
        Err(_) => return DecodeOutcome::failure(FailureReason::Numerical, 0),
    };
    let n = inst.basis.cols();
    let z_last = z.get(n);
    if z_last.abs() < ZERO_LAST_ENTRY_TOL {
        return DecodeOutcome::failure(FailureReason::ZeroLastEntry, 0);
    }
    let ratios: Vec<f64> = (0..=n).map(|i| z.get(i) / z_last).collect();
    let candidates = match enumerate_scan_candidates(&ratios) {
        Ok(c) => c,
        Err(_) => return DecodeOutcome::failure(FailureReason::Numerical, 0),
    };
    let mut tried = 0;
    for cand in candidates {
        tried += 1;
        let outcome = verify_candidate(inst, cand, tried);
        if outcome.is_success() {
            return outcome;
        }
    }
    DecodeOutcome::failure(FailureReason::ResidualExceedsRadius, tried)
}

/// Distinct roundings of `s * ratios` (last ratio normalized to 1) as `s`
/// sweeps the open interval `(0.5, 1.5)`. Candidates carry a final
/// coordinate of 1, which is dropped; each entry is the length-`n` integer
/// vector of the remaining coordinates. Ordered by ascending `s` and
/// deduplicated.
pub(crate) fn enumerate_scan_candidates(ratios: &[f64]) -> Result<Vec<Vec<i64>>> {
    let n = ratios.len() - 1;
    // Breakpoints: values of s in (0.5, 1.5) where some s*ratio crosses a
    // half-integer, i.e. where the rounding changes.
    let mut breaks: Vec<f64> = Vec::new();
    for &w in &ratios[..n] {
        if w == 0.0 {
            continue;
        }
        let (lo, hi) = if w > 0.0 { (0.5 * w, 1.5 * w) } else { (1.5 * w, 0.5 * w) };
        // Half-integer grid points strictly inside (lo, hi).
        let mut q = (lo - 0.5).ceil() as i64;
        loop {
            let g = q as f64 + 0.5;
            if g >= hi {
                break;
            }
            if g > lo {
                let s = g / w;
                if s > 0.5 && s < 1.5 {
                    breaks.push(s);
                }
            }
            q += 1;
            if breaks.len() > SCAN_CANDIDATE_CAP {
                return Err(Error::InvalidParameter("scan candidate cap exceeded".into()));
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    if breaks.len() + 1 > SCAN_CANDIDATE_CAP {
        return Err(Error::InvalidParameter("scan candidate cap exceeded".into()));
    }
    let mut segment_edges = Vec::with_capacity(breaks.len() + 2);
    segment_edges.push(0.5);
    segment_edges.extend_from_slice(&breaks);
    segment_edges.push(1.5);
    let mut candidates: Vec<Vec<i64>> = Vec::with_capacity(segment_edges.len() - 1);
    for pair in segment_edges.windows(2) {
        let s = 0.5 * (pair[0] + pair[1]);
        let cand: Vec<i64> = ratios[..n]
            .iter()
            .map(|w| (s * w).round_ties_even() as i64)
            .collect();
        // The normalized last coordinate rounds to 1 everywhere inside the
        // open window; skip degenerate edge cases.
        if (s * ratios[n]).round_ties_even() as i64 != 1 {
            continue;
        }
        if candidates.iter().all(|c| c != &cand) {
            candidates.push(cand);
        }
    }
    Ok(candidates)
}

/// Baseline: round the real least-squares solution, obtained from the SVD
/// pseudo-inverse of the basis.
pub fn least_squares_decode(inst: &BddInstance) -> DecodeOutcome {
    let f = match svd(&inst.basis) {
        Ok(f) => f,
        Err(_) => return DecodeOutcome::failure(FailureReason::Numerical, 0),
    };
    let n = inst.basis.cols();
    let sigma = f.sigma();
    if sigma.get(n - 1) < linalg::RANK_TOL * sigma.get(0) || sigma.get(0) == 0.0 {
        return DecodeOutcome::failure(FailureReason::Numerical, 0);
    }
    // y = V . diag(1/sigma) . U^T b restricted to the first n columns.
    let m_rows = inst.basis.rows();
    let mut y = vec![0.0; n];
    for k in 0..n {
        let mut ub = 0.0;
        for i in 0..m_rows {
            ub += f.u().get(i, k) * inst.target.get(i);
        }
        let w = ub / sigma.get(k);
        for j in 0..n {
            y[j] += w * f.v().get(j, k);
        }
    }
    let coefficients: Vec<i64> = y.iter().map(|x| x.round_ties_even() as i64).collect();
    verify_candidate(inst, coefficients, 1)
}
