//! Seeded Monte-Carlo campaigns over the decoder, with CSV/JSON output
//! and singular-value concentration checks.
//!
//! Trial `i` of a campaign uses the substream seed `spec.seed XOR i`, so
//! results are a pure function of the spec and seed no matter how trials
//! are scheduled across workers. Per-trial numerical failures count as
//! non-successes; they never abort a campaign.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decoder::{self, BddInstance, DecodeOutcome};
use crate::ensembles::{self, LweParams, PlantedInstance};
use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::rng::SplitMix64;

/// Worker count: `LATBDD_THREADS` when set, otherwise available
/// parallelism.
pub fn worker_count() -> usize {
    if let Ok(v) = std::env::var("LATBDD_THREADS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k >= 1 {
                return k;
            }
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    LweReal,
    LweInteger,
    Gaussian,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::LweReal => "lwe-real",
            Mode::LweInteger => "lwe-integer",
            Mode::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    Svd,
    SvdScan,
    LeastSquares,
}

impl DecoderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecoderKind::Svd => "svd",
            DecoderKind::SvdScan => "svd-scan",
            DecoderKind::LeastSquares => "least-squares",
        }
    }
}

fn default_gamma0() -> f64 {
    1.0
}

fn default_theta() -> f64 {
    0.0
}

fn default_decoder() -> DecoderKind {
    DecoderKind::Svd
}

/// One experiment cell: ensemble parameters, trial count, seed, and the
/// decoder under test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub n: usize,
    pub beta: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_gamma0")]
    pub gamma0: f64,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default = "default_decoder")]
    pub decoder: DecoderKind,
}

impl ExperimentSpec {
    pub fn m(&self) -> usize {
        ensembles::ceil_product(self.beta, self.n)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        match self.mode {
            Mode::LweReal | Mode::LweInteger => {
                // LweParams::new re-checks n, beta, theta, gamma0.
                LweParams::new(self.n, self.beta, self.theta, self.gamma0, false)?;
            }
            Mode::Gaussian => {
                let sigma = self.sigma.ok_or_else(|| {
                    Error::InvalidParameter("gaussian mode requires sigma".into())
                })?;
                if !(sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
                }
                if self.n == 0 || !(self.beta >= 1.0) {
                    return Err(Error::InvalidParameter("need n >= 1 and beta >= 1".into()));
                }
            }
        }
        Ok(())
    }

    fn generate(&self, trial_seed: u64) -> Result<PlantedInstance> {
        match self.mode {
            Mode::LweReal => ensembles::generate_lwe_real(
                &LweParams::new(self.n, self.beta, self.theta, self.gamma0, false)?,
                trial_seed,
            ),
            Mode::LweInteger => ensembles::generate_lwe_integer(
                &LweParams::new(self.n, self.beta, self.theta, self.gamma0, true)?,
                trial_seed,
            ),
            Mode::Gaussian => ensembles::generate_gaussian_bdd(
                self.n,
                self.beta,
                self.sigma.expect("validated"),
                (self.n as f64).sqrt(),
                trial_seed,
            ),
        }
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    /// Decoder reported success at the instance radius.
    pub decode_success: bool,
    /// Recovered coefficients equal the planted secret.
    pub exact_recovery: bool,
    /// Residual within the planted error norm.
    pub residual_ok: bool,
    pub residual: Option<f64>,
    pub candidates_tried: usize,
    pub sigma_n_b: f64,
    pub sigma_n1_m: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub m: usize,
    pub trials: u64,
    /// Exact planted-secret recoveries; this is the headline probability.
    pub successes: u64,
    /// Residual-within-error-norm count, recorded alongside.
    pub residual_successes: u64,
    pub decode_successes: u64,
    pub probability: f64,
    pub wilson_ci95: (f64, f64),
    pub mean_sigma_n_b: f64,
    pub mean_sigma_n1_m: f64,
    pub wall_time_seconds: f64,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    run_experiment_with_workers(spec, worker_count())
}

pub fn run_experiment_with_workers(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentResult> {
    spec.validate()?;
    let start = Instant::now();
    let trials = spec.trials;
    let records = parallel_map(trials as usize, workers, |i| run_trial(spec, i as u64));
    let mut successes = 0u64;
    let mut residual_successes = 0u64;
    let mut decode_successes = 0u64;
    let mut sum_sn_b = 0.0;
    let mut sum_sn1_m = 0.0;
    for rec in &records {
        successes += u64::from(rec.exact_recovery);
        residual_successes += u64::from(rec.residual_ok);
        decode_successes += u64::from(rec.decode_success);
        sum_sn_b += rec.sigma_n_b;
        sum_sn1_m += rec.sigma_n1_m;
    }
    let probability = successes as f64 / trials as f64;
    Ok(ExperimentResult {
        spec: spec.clone(),
        m: spec.m(),
        trials,
        successes,
        residual_successes,
        decode_successes,
        probability,
        wilson_ci95: wilson_interval(successes, trials),
        mean_sigma_n_b: sum_sn_b / trials as f64,
        mean_sigma_n1_m: sum_sn1_m / trials as f64,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Detailed per-trial records for one campaign, in trial order.
pub fn run_trials(spec: &ExperimentSpec, workers: usize) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    Ok(parallel_map(spec.trials as usize, workers, |i| run_trial(spec, i as u64)))
}

fn run_trial(spec: &ExperimentSpec, trial: u64) -> TrialRecord {
    let seed = spec.seed ^ trial;
    let failed = |seed| TrialRecord {
        trial,
        seed,
        decode_success: false,
        exact_recovery: false,
        residual_ok: false,
        residual: None,
        candidates_tried: 0,
        sigma_n_b: 0.0,
        sigma_n1_m: 0.0,
    };
    let planted = match spec.generate(seed) {
        Ok(p) => p,
        Err(_) => return failed(seed),
    };
    let inst = &planted.instance;
    let sigma_n_b = singular_values(inst.basis()).map(|v| v[v.len() - 1]).unwrap_or(0.0);
    let (outcome, sigma_from_decode) = match spec.decoder {
        DecoderKind::Svd => decoder::decode_with_diag(inst),
        DecoderKind::SvdScan => (decoder::decode_with_scan(inst), None),
        DecoderKind::LeastSquares => (decoder::least_squares_decode(inst), None),
    };
    let sigma_n1_m = sigma_from_decode.unwrap_or_else(|| sigma_last_of_appended(inst));
    record_from_outcome(trial, seed, &planted, outcome, sigma_n_b, sigma_n1_m)
}

fn sigma_last_of_appended(inst: &BddInstance) -> f64 {
    let m = match inst.basis().with_appended_column(inst.target(), -1.0) {
        Ok(m) => m,
        Err(_) => return 0.0,
    };
    if m.rows() >= m.cols() {
        singular_values(&m).map(|v| v[v.len() - 1]).unwrap_or(0.0)
    } else {
        // Square basis: the appended matrix has a kernel, so the
        // (n+1)-st singular value is zero by definition.
        0.0
    }
}

fn record_from_outcome(
    trial: u64,
    seed: u64,
    planted: &PlantedInstance,
    outcome: DecodeOutcome,
    sigma_n_b: f64,
    sigma_n1_m: f64,
) -> TrialRecord {
    let decode_success = outcome.is_success();
    if let Some(residual) = outcome.residual() {
        // Soundness of any success outcome, checked in debug builds.
        debug_assert!(
            residual <= planted.instance.radius() * (1.0 + decoder::RESIDUAL_SLACK),
            "unsound success: residual {residual} > radius {}",
            planted.instance.radius()
        );
    }
    let exact_recovery =
        decode_success && outcome.coefficients() == Some(planted.planted_x.as_slice());
    let error_norm = planted.error.norm();
    let residual_ok = match outcome.residual() {
        Some(r) => r <= error_norm * (1.0 + decoder::RESIDUAL_SLACK),
        None => false,
    };
    TrialRecord {
        trial,
        seed,
        decode_success,
        exact_recovery,
        residual_ok,
        residual: outcome.residual(),
        candidates_tried: outcome.candidates_tried,
        sigma_n_b,
        sigma_n1_m,
    }
}

/// 95% Wilson score interval for a binomial proportion; always brackets
/// the point estimate.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1, "wilson interval needs at least one trial");
    let z = 1.96_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub const CSV_HEADER: &str = "mode,n,m,beta,theta,gamma0,sigma,decoder,trials,successes,prob,ci_lo,ci_hi,mean_sigma_n_B,mean_sigma_n1_M,seed,wall_time_seconds";

impl ExperimentResult {
    pub fn csv_line(&self) -> String {
        let sigma = self.spec.sigma.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.spec.mode.as_str(),
            self.spec.n,
            self.m,
            self.spec.beta,
            self.spec.theta,
            self.spec.gamma0,
            sigma,
            self.spec.decoder.as_str(),
            self.trials,
            self.successes,
            self.probability,
            self.wilson_ci95.0,
            self.wilson_ci95.1,
            self.mean_sigma_n_b,
            self.mean_sigma_n1_m,
            self.spec.seed,
            self.wall_time_seconds,
        )
    }
}

/// Runs every spec and writes one CSV line per row, plus a JSON echo of
/// the specs (with their seeds) next to the CSV for provenance.
pub fn run_table(rows: &[ExperimentSpec], path: &Path) -> Result<Vec<ExperimentResult>> {
    let mut results = Vec::with_capacity(rows.len());
    for spec in rows {
        results.push(run_experiment(spec)?);
    }
    let mut csv = String::new();
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &results {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    write_atomic(path, csv.as_bytes())?;
    let echo = serde_json::to_string_pretty(rows)?;
    write_atomic(&path.with_extension("json"), echo.as_bytes())?;
    Ok(results)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

/// Empirical extreme-singular-value statistics for Gaussian matrices,
/// normalized by `sigma sqrt(m)`, with tail-rate checks against the
/// Gaussian concentration bound `exp(-m t^2 / 2)`.
#[derive(Debug, Clone, Serialize)]
pub struct SvConcentration {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub sigma: f64,
    pub draws: usize,
    pub mean_smallest: f64,
    pub mean_largest: f64,
    /// min, q25, median, q75, max of the normalized smallest singular value.
    pub quantiles_smallest: [f64; 5],
    pub quantiles_largest: [f64; 5],
    pub checks: Vec<TailCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailCheck {
    pub t: f64,
    pub bound: f64,
    /// Fraction of draws with smallest value below `1 - sqrt(1/beta) - t`.
    pub lower_rate: f64,
    /// Fraction of draws with largest value above `1 + sqrt(1/beta) + t`.
    pub upper_rate: f64,
    /// Set when an empirical rate exceeds bound + 3 binomial sigma.
    pub flagged: bool,
}

impl fmt::Display for SvConcentration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sv-concentration n={} m={} beta={} sigma={} draws={}",
            self.n, self.m, self.beta, self.sigma, self.draws
        )?;
        let expect_lo = 1.0 - (1.0 / self.beta).sqrt();
        let expect_hi = 1.0 + (1.0 / self.beta).sqrt();
        writeln!(
            f,
            "smallest/(sigma sqrt(m)): mean {:.4} (limit {:.4}), quantiles {:?}",
            self.mean_smallest, expect_lo, self.quantiles_smallest
        )?;
        writeln!(
            f,
            "largest/(sigma sqrt(m)):  mean {:.4} (limit {:.4}), quantiles {:?}",
            self.mean_largest, expect_hi, self.quantiles_largest
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "t={:<4} bound {:.3e} lower-rate {:.4} upper-rate {:.4}{}",
                c.t,
                c.bound,
                c.lower_rate,
                c.upper_rate,
                if c.flagged { "  FLAG" } else { "" }
            )?;
        }
        Ok(())
    }
}

pub fn sv_concentration(
    n: usize,
    beta: f64,
    sigma: f64,
    draws: usize,
    seed: u64,
) -> Result<SvConcentration> {
    if draws < 50 {
        return Err(Error::InvalidParameter(format!("need at least 50 draws, got {draws}")));
    }
    if n == 0 || !(beta >= 1.0) || !(sigma > 0.0) {
        return Err(Error::InvalidParameter("need n >= 1, beta >= 1, sigma > 0".into()));
    }
    let m = ensembles::ceil_product(beta, n);
    let norm = sigma * (m as f64).sqrt();
    let spec = ensembles::DistributionSpec::gaussian(sigma)?;
    let pairs = parallel_map(draws, worker_count(), |i| {
        let mut rng = SplitMix64::substream(seed, i as u64);
        let mat = sample_matrix_from(&spec, m, n, &mut rng);
        match singular_values(&mat) {
            Ok(sv) => (sv[n - 1] / norm, sv[0] / norm),
            Err(_) => (0.0, f64::INFINITY),
        }
    });
    let mut smallest: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut largest: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mean_smallest = smallest.iter().sum::<f64>() / draws as f64;
    let mean_largest = largest.iter().sum::<f64>() / draws as f64;
    smallest.sort_by(|a, b| a.partial_cmp(b).unwrap());
    largest.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo_limit = 1.0 - (1.0 / beta).sqrt();
    let hi_limit = 1.0 + (1.0 / beta).sqrt();
    let checks = [0.05, 0.1, 0.2]
        .iter()
        .map(|&t| {
            let bound = (-(m as f64) * t * t / 2.0).exp();
            let lower_rate =
                smallest.iter().filter(|&&s| s <= lo_limit - t).count() as f64 / draws as f64;
            let upper_rate =
                largest.iter().filter(|&&s| s >= hi_limit + t).count() as f64 / draws as f64;
            let binom_sigma = (bound * (1.0 - bound) / draws as f64).sqrt();
            let limit = bound + 3.0 * binom_sigma;
            TailCheck { t, bound, lower_rate, upper_rate, flagged: lower_rate > limit || upper_rate > limit }
        })
        .collect();
    Ok(SvConcentration {
        n,
        m,
        beta,
        sigma,
        draws,
        mean_smallest,
        mean_largest,
        quantiles_smallest: quantiles(&smallest),
        quantiles_largest: quantiles(&largest),
        checks,
    })
}

fn sample_matrix_from(
    spec: &ensembles::DistributionSpec,
    m: usize,
    n: usize,
    rng: &mut SplitMix64,
) -> crate::linalg::Matrix {
    let entries: Vec<f64> = (0..m * n)
        .map(|_| match spec.kind {
            ensembles::DistributionKind::Gaussian => rng.normal(spec.scale),
            ensembles::DistributionKind::UniformInterval => rng.uniform_interval(spec.scale),
            ensembles::DistributionKind::Rademacher => rng.rademacher(spec.scale),
        })
        .collect();
    crate::linalg::Matrix::new(m, n, entries).expect("finite samples")
}

fn quantiles(sorted: &[f64]) -> [f64; 5] {
    let n = sorted.len();
    let at = |q: f64| sorted[((q * (n - 1) as f64).round() as usize).min(n - 1)];
    [sorted[0], at(0.25), at(0.5), at(0.75), sorted[n - 1]]
}

/// Deterministic indexed map over a worker pool: `out[i] = f(i)` no
/// matter how indices are scheduled.
fn parallel_map<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if workers <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let workers = workers.min(count);
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..count)
                        .step_by(workers)
                        .map(|i| (i, f(i)))
                        .collect::<Vec<(usize, T)>>()
                })
            })
            .collect();
        for h in handles {
            for (i, value) in h.join().expect("worker panicked") {
                slots[i] = Some(value);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("all indices filled")).collect()
}
