//! Seeded generation of random lattice ensembles and planted instances.
//!
//! All generators are pure functions of their parameters and a 64-bit
//! seed: entries are drawn in a pinned order (basis row-major, then the
//! binary secret, then the error vector), so identical inputs reproduce
//! instances bit for bit.

use std::io::{BufRead, Write};

use crate::decoder::BddInstance;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rng::SplitMix64;
use crate::textio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Gaussian,
    UniformInterval,
    Rademacher,
}

/// An entry law together with its scale: `N(0, scale^2)` for Gaussian,
/// uniform on `[-scale, scale]`, or the two-point law on `{-scale, scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub scale: f64,
}

impl DistributionSpec {
    pub fn new(kind: DistributionKind, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!("scale must be > 0, got {scale}")));
        }
        Ok(Self { kind, scale })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(DistributionKind::Gaussian, sigma)
    }

    pub fn uniform_interval(gamma: f64) -> Result<Self> {
        Self::new(DistributionKind::UniformInterval, gamma)
    }

    pub fn rademacher(gamma: f64) -> Result<Self> {
        Self::new(DistributionKind::Rademacher, gamma)
    }

    /// The variance implied by the law: `scale^2`, `scale^2 / 3`, or
    /// `scale^2` respectively.
    pub fn variance(&self) -> f64 {
        match self.kind {
            DistributionKind::Gaussian => self.scale * self.scale,
            DistributionKind::UniformInterval => self.scale * self.scale / 3.0,
            DistributionKind::Rademacher => self.scale * self.scale,
        }
    }

    fn sample(&self, rng: &mut SplitMix64) -> f64 {
        match self.kind {
            DistributionKind::Gaussian => rng.normal(self.scale),
            DistributionKind::UniformInterval => rng.uniform_interval(self.scale),
            DistributionKind::Rademacher => rng.rademacher(self.scale),
        }
    }
}

/// Parameters of the LWE-over-reals ensemble: dimensions `m = ceil(beta n)`
/// and interval widths `gamma1 = theta * gamma0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LweParams {
    pub n: usize,
    pub beta: f64,
    pub theta: f64,
    pub gamma0: f64,
    pub integer_mode: bool,
}

impl LweParams {
    pub fn new(n: usize, beta: f64, theta: f64, gamma0: f64, integer_mode: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if !(beta >= 1.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be >= 1, got {beta}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("theta must be > 0, got {theta}")));
        }
        if !(gamma0 > 0.0) || !gamma0.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma0 must be > 0, got {gamma0}")));
        }
        Ok(Self { n, beta, theta, gamma0, integer_mode })
    }

    pub fn m(&self) -> usize {
        ceil_product(self.beta, self.n)
    }

    pub fn gamma1(&self) -> f64 {
        self.theta * self.gamma0
    }
}

/// `ceil(beta * n)` with a snap to the nearest integer when the floating
/// product sits within 1e-9 of one, so e.g. beta = 1.1, n = 100 yields 110
/// rather than 111.
pub(crate) fn ceil_product(beta: f64, n: usize) -> usize {
    let p = beta * n as f64;
    let r = p.round();
    if (p - r).abs() < 1e-9 * r.abs().max(1.0) {
        r as usize
    } else {
        p.ceil() as usize
    }
}

/// A decoding instance with its generation provenance: the planted binary
/// secret, the error vector actually added, and the seed that produced
/// everything.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub instance: BddInstance,
    pub planted_x: Vec<i64>,
    pub error: Vector,
    pub seed: u64,
}

/// An `m x n` matrix of i.i.d. samples, filled row-major.
pub fn sample_matrix(spec: &DistributionSpec, m: usize, n: usize, seed: u64) -> Matrix {
    let mut rng = SplitMix64::new(seed);
    sample_matrix_with(spec, m, n, &mut rng)
}

fn sample_matrix_with(spec: &DistributionSpec, m: usize, n: usize, rng: &mut SplitMix64) -> Matrix {
    let entries: Vec<f64> = (0..m * n).map(|_| spec.sample(rng)).collect();
    Matrix::new(m, n, entries).expect("sampled entries are finite")
}

fn sample_binary_secret(n: usize, rng: &mut SplitMix64) -> Vec<i64> {
    (0..n).map(|_| rng.bernoulli_bit()).collect()
}

/// LWE over the reals: basis uniform on `[-gamma1, gamma1]`, binary
/// secret, error uniform on `[-gamma0, gamma0]` per entry, then everything
/// rescaled by `1/gamma0` so the effective error width is 1. The decoding
/// radius is the rescaled error norm.
pub fn generate_lwe_real(params: &LweParams, seed: u64) -> Result<PlantedInstance> {
    if params.integer_mode {
        return Err(Error::InvalidParameter(
            "integer_mode=true: use generate_lwe_integer".into(),
        ));
    }
    let (m, n) = (params.m(), params.n);
    let mut rng = SplitMix64::new(seed);
    let inv = 1.0 / params.gamma0;
    let b_raw = sample_matrix_with(
        &DistributionSpec::uniform_interval(params.gamma1())?,
        m,
        n,
        &mut rng,
    );
    let basis = b_raw.scale(inv)?;
    let x = sample_binary_secret(n, &mut rng);
    let error = Vector::new((0..m).map(|_| inv * rng.uniform_interval(params.gamma0)).collect())?;
    finish_instance(basis, x, error, None, seed)
}

/// Integer LWE: basis entries are the half-to-even roundings of uniform
/// samples on `[-gamma1, gamma1]` (so for `0.7 <= theta <= 1.5` entries
/// are in `{-1, 0, 1}` and for `1.5 < theta <= 2.1` in `{-2, ..., 2}`,
/// with the corresponding interval-mass probabilities), and error entries
/// are `gamma0` times a uniform draw from `{-1, 0, 1}`, rounded.
pub fn generate_lwe_integer(params: &LweParams, seed: u64) -> Result<PlantedInstance> {
    if !params.integer_mode {
        return Err(Error::InvalidParameter(
            "integer_mode=false: use generate_lwe_real".into(),
        ));
    }
    let (m, n) = (params.m(), params.n);
    let mut rng = SplitMix64::new(seed);
    let gamma1 = params.gamma1();
    let basis = Matrix::new(
        m,
        n,
        (0..m * n)
            .map(|_| rng.uniform_interval(gamma1).round_ties_even())
            .collect(),
    )?;
    let x = sample_binary_secret(n, &mut rng);
    let error = Vector::new(
        (0..m)
            .map(|_| {
                let pick = (rng.next_u64() % 3) as i64 - 1;
                (params.gamma0 * pick as f64).round_ties_even()
            })
            .collect(),
    )?;
    finish_instance(basis, x, error, None, seed)
}

/// Gaussian-basis planted instance: entries `N(0, sigma^2)`, binary
/// secret, error drawn inside the radius-`r` ball (uniform direction,
/// length `r u` with `u` uniform on `[0, 1]`, so `||e|| <= r` surely).
/// The instance keeps the given radius.
pub fn generate_gaussian_bdd(
    n: usize,
    beta: f64,
    sigma: f64,
    radius: f64,
    seed: u64,
) -> Result<PlantedInstance> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(beta >= 1.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be >= 1, got {beta}")));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be >= 0, got {radius}")));
    }
    let m = ceil_product(beta, n);
    let mut rng = SplitMix64::new(seed);
    let basis = sample_matrix_with(&DistributionSpec::gaussian(sigma)?, m, n, &mut rng);
    let x = sample_binary_secret(n, &mut rng);
    let error = if radius == 0.0 {
        Vector::zeros(m)
    } else {
        loop {
            let dir: Vec<f64> = (0..m).map(|_| rng.standard_normal()).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                let len = radius * rng.next_f64();
                break Vector::new(dir.iter().map(|v| v * len / norm).collect())?;
            }
        }
    };
    finish_instance(basis, x, error, Some(radius), seed)
}

fn finish_instance(
    basis: Matrix,
    x: Vec<i64>,
    error: Vector,
    radius: Option<f64>,
    seed: u64,
) -> Result<PlantedInstance> {
    let target = basis.matvec_int(&x)?.add(&error)?;
    let radius = radius.unwrap_or_else(|| error.norm());
    let instance = BddInstance::new(basis, target, radius)?;
    Ok(PlantedInstance { instance, planted_x: x, error, seed })
}

/// Writes an LWE instance in the text interchange format: a parameter
/// header `n m beta theta gamma0 integer_mode seed`, then the basis, the
/// target, a `radius` line, the planted secret, and the error vector.
pub fn write_instance<W: Write>(
    w: &mut W,
    params: &LweParams,
    inst: &PlantedInstance,
) -> Result<()> {
    writeln!(
        w,
        "{} {} {} {} {} {} {}",
        params.n,
        params.m(),
        params.beta,
        params.theta,
        params.gamma0,
        u8::from(params.integer_mode),
        inst.seed
    )?;
    textio::write_matrix(w, inst.instance.basis(), None)?;
    textio::write_vector(w, inst.instance.target(), None)?;
    writeln!(w, "radius {:.16e}", inst.instance.radius())?;
    textio::write_int_vector(w, &inst.planted_x, None)?;
    textio::write_vector(w, &inst.error, None)?;
    Ok(())
}

pub fn read_instance<R: BufRead>(r: &mut R) -> Result<(LweParams, PlantedInstance)> {
    let mut header = String::new();
    loop {
        header.clear();
        if r.read_line(&mut header)? == 0 {
            return Err(Error::Parse { line: 1, msg: "empty instance file".into() });
        }
        if !header.trim().is_empty() {
            break;
        }
    }
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 7 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected 7 header fields, got {}", tokens.len()),
        });
    }
    let n: usize = parse_tok(tokens[0])?;
    let m: usize = parse_tok(tokens[1])?;
    let beta: f64 = parse_tok(tokens[2])?;
    let theta: f64 = parse_tok(tokens[3])?;
    let gamma0: f64 = parse_tok(tokens[4])?;
    let integer_mode = tokens[5] == "1";
    let seed: u64 = parse_tok(tokens[6])?;
    let params = LweParams::new(n, beta, theta, gamma0, integer_mode)?;
    if params.m() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header m = {m} disagrees with ceil(beta n) = {}", params.m()),
        });
    }
    let basis = textio::read_matrix(r)?;
    let target = textio::read_vector(r)?;
    let mut radius_line = String::new();
    r.read_line(&mut radius_line)?;
    let radius = radius_line
        .trim()
        .strip_prefix("radius ")
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| Error::Parse { line: 0, msg: "expected `radius <value>` line".into() })?;
    let planted_x = textio::read_int_vector(r)?;
    let error = textio::read_vector(r)?;
    let instance = BddInstance::new(basis, target, radius)?;
    Ok((params, PlantedInstance { instance, planted_x, error, seed }))
}

fn parse_tok<T: std::str::FromStr>(tok: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    tok.parse::<T>()
        .map_err(|e| Error::Parse { line: 1, msg: format!("bad header field `{tok}`: {e}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_entries_are_signs() {
        let spec = DistributionSpec::rademacher(1.0).unwrap();
        let m = sample_matrix(&spec, 8, 9, 5);
        assert!(m.entries().iter().all(|&x| x == 1.0 || x == -1.0));
    }

    #[test]
    fn uniform_interval_moments() {
        let spec = DistributionSpec::uniform_interval(2.0).unwrap();
        let m = sample_matrix(&spec, 1000, 100, 11);
        let n = m.entries().len() as f64;
        let mean: f64 = m.entries().iter().sum::<f64>() / n;
        let var: f64 = m.entries().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 4.0 / 3.0).abs() < 0.05, "var {var}");
        assert!((spec.variance() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ceil_product_snaps_float_noise() {
        assert_eq!(ceil_product(1.1, 100), 110);
        assert_eq!(ceil_product(1.2, 100), 120);
        assert_eq!(ceil_product(4.0 / 3.0, 120), 160);
        assert_eq!(ceil_product(1.34, 100), 134);
        assert_eq!(ceil_product(1.005, 10), 11); // genuinely fractional: ceil
    }

    #[test]
    fn lwe_real_is_deterministic_and_consistent() {
        let params = LweParams::new(20, 1.5, 2.0, 1.0, false).unwrap();
        let a = generate_lwe_real(&params, 99).unwrap();
        let b = generate_lwe_real(&params, 99).unwrap();
        assert_eq!(a.instance.basis(), b.instance.basis());
        assert_eq!(a.instance.target(), b.instance.target());
        assert_eq!(a.planted_x, b.planted_x);
        assert_eq!(a.error, b.error);
        // target = basis * x + e exactly as computed
        let recomputed = a
            .instance
            .basis()
            .matvec_int(&a.planted_x)
            .unwrap()
            .add(&a.error)
            .unwrap();
        assert_eq!(&recomputed, a.instance.target());
        assert_eq!(a.instance.radius(), a.error.norm());
        assert!(a.planted_x.iter().all(|&v| v == 0 || v == 1));
    }

    #[test]
    fn lwe_rescale_makes_gamma0_one() {
        // With gamma0 = 4 the rescaled error entries must lie in [-1, 1].
        let params = LweParams::new(30, 1.5, 2.0, 4.0, false).unwrap();
        let inst = generate_lwe_real(&params, 7).unwrap();
        assert!(inst.error.as_slice().iter().all(|&x| x.abs() <= 1.0));
        // Basis entries in [-theta, theta] after rescale.
        assert!(inst.instance.basis().max_abs_entry() <= params.theta);
    }

    #[test]
    fn integer_mode_entry_laws() {
        // theta = 1.0: entries in {-1,0,1}, P(+-1) = 1/4, P(0) = 1/2.
        // m*n = 1000*100 = 1e5 samples of the entry law.
        let params = LweParams::new(100, 10.0, 1.0, 1.0, true).unwrap();
        let inst = generate_lwe_integer(&params, 13).unwrap();
        let entries = inst.instance.basis().entries();
        assert_eq!(entries.len(), 100_000);
        let freq = |v: f64| entries.iter().filter(|&&x| x == v).count() as f64 / entries.len() as f64;
        let tol = 3.0 * (0.25 * 0.75 / entries.len() as f64).sqrt();
        assert!((freq(1.0) - 0.25).abs() < tol, "P(1) = {}", freq(1.0));
        assert!((freq(-1.0) - 0.25).abs() < tol, "P(-1) = {}", freq(-1.0));
        assert!((freq(0.0) - 0.5).abs() < 1.5 * tol, "P(0) = {}", freq(0.0));
        assert!(entries.iter().all(|&x| x == -1.0 || x == 0.0 || x == 1.0));
    }

    #[test]
    fn integer_mode_theta_two_laws() {
        let params = LweParams::new(100, 10.0, 2.0, 1.0, true).unwrap();
        let inst = generate_lwe_integer(&params, 17).unwrap();
        let entries = inst.instance.basis().entries();
        let total = entries.len() as f64;
        let freq = |v: f64| entries.iter().filter(|&&x| x == v).count() as f64 / total;
        let tol = 3.0 * (0.25 / total).sqrt() + 0.002;
        assert!((freq(2.0) - 0.125).abs() < tol);
        assert!((freq(-2.0) - 0.125).abs() < tol);
        for v in [-1.0, 0.0, 1.0] {
            assert!((freq(v) - 0.25).abs() < tol, "P({v}) = {}", freq(v));
        }
        // Error entries uniform on {-1,0,1}.
        let e = inst.error.as_slice();
        assert!(e.iter().all(|&x| x == -1.0 || x == 0.0 || x == 1.0));
        let e_tol = 3.0 * (1.0 / 3.0 * 2.0 / 3.0 / e.len() as f64).sqrt();
        for v in [-1.0, 0.0, 1.0] {
            let f = e.iter().filter(|&&x| x == v).count() as f64 / e.len() as f64;
            assert!((f - 1.0 / 3.0).abs() < e_tol, "P(e = {v}) = {f}");
        }
    }

    #[test]
    fn gaussian_error_stays_in_ball() {
        for seed in 0..200 {
            let inst = generate_gaussian_bdd(6, 1.5, 5.0, 2.25, seed).unwrap();
            assert!(inst.error.norm() <= 2.25);
            assert_eq!(inst.instance.radius(), 2.25);
        }
    }

    #[test]
    fn gaussian_radius_zero_gives_exact_instance() {
        let inst = generate_gaussian_bdd(5, 1.5, 3.0, 0.0, 4).unwrap();
        assert_eq!(inst.error.norm(), 0.0);
        let out = crate::decoder::decode(&inst.instance);
        assert_eq!(out.coefficients(), Some(inst.planted_x.as_slice()));
        assert_eq!(out.residual(), Some(0.0));
    }

    #[test]
    fn instance_text_roundtrip() {
        let params = LweParams::new(6, 1.5, 2.0, 1.0, false).unwrap();
        let inst = generate_lwe_real(&params, 21).unwrap();
        let mut buf = Vec::new();
        write_instance(&mut buf, &params, &inst).unwrap();
        let (params2, inst2) = read_instance(&mut std::io::Cursor::new(buf)).unwrap();
        assert_eq!(params, params2);
        assert_eq!(inst.instance.basis(), inst2.instance.basis());
        assert_eq!(inst.instance.target(), inst2.instance.target());
        assert_eq!(inst.instance.radius(), inst2.instance.radius());
        assert_eq!(inst.planted_x, inst2.planted_x);
        assert_eq!(inst.error, inst2.error);
        assert_eq!(inst.seed, inst2.seed);
    }
}
