//! Command-line front end. Kept thin: every subcommand is a small wrapper
//! over the library.
//!
//! Exit codes: 0 success, 1 decode failure / lift rejection, 2 usage or
//! I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decoder::{self, BddInstance};
use crate::ensembles::{self, LweParams};
use crate::error::Result;
use crate::harness::{self, DecoderKind, ExperimentSpec, Mode};
use crate::linalg::{Matrix, Vector};
use crate::oracle;
use crate::sat;
use crate::textio;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DECODE_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "latbdd",
    version,
    about = "Bounded distance decoding for random lattices via the SVD"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decode a basis/target pair within a radius.
    Decode(DecodeArgs),
    /// Generate a planted random instance.
    Gen(GenArgs),
    /// Reduce a DIMACS CNF formula to a lattice instance.
    ReduceSat(ReduceSatArgs),
    /// Lift decoder coefficients back to a variable assignment.
    Lift(LiftArgs),
    /// Run one Monte-Carlo experiment and print a CSV line.
    Experiment(ExperimentArgs),
    /// Run a batch of experiments from a JSON spec file into a CSV file.
    Table(TableArgs),
    /// Empirical extreme-singular-value concentration check.
    SvCheck(SvCheckArgs),
    /// Brute-force reference solvers (debugging aid).
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Svd,
    SvdScan,
    LeastSquares,
}

impl From<DecoderArg> for DecoderKind {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Svd => DecoderKind::Svd,
            DecoderArg::SvdScan => DecoderKind::SvdScan,
            DecoderArg::LeastSquares => DecoderKind::LeastSquares,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    LweReal,
    LweInteger,
    Gaussian,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::LweReal => Mode::LweReal,
            ModeArg::LweInteger => Mode::LweInteger,
            ModeArg::Gaussian => Mode::Gaussian,
        }
    }
}

#[derive(Args)]
struct DecodeArgs {
    /// Basis matrix file (text format).
    #[arg(long)]
    basis: PathBuf,
    /// Target vector file (text format).
    #[arg(long)]
    target: PathBuf,
    /// Decoding radius.
    #[arg(long)]
    radius: f64,
    #[arg(long, value_enum, default_value = "svd")]
    decoder: DecoderArg,
    /// Write the recovered coefficients to this file on success.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "lwe-real")]
    mode: ModeArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 2.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma0: f64,
    /// Gaussian mode: entry standard deviation.
    #[arg(long)]
    sigma: Option<f64>,
    /// Gaussian mode: error-ball radius (default sqrt(n)).
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for basis.txt, target.txt, planted.txt, and
    /// friends.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReduceSatArgs {
    /// DIMACS CNF input file.
    cnf: PathBuf,
    /// Output directory for basis.txt and target.txt.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct LiftArgs {
    /// Reduction basis file (carries the `sat-reduction k t` header).
    #[arg(long)]
    basis: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Integer coefficient vector file.
    #[arg(long)]
    coeffs: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 2.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma0: f64,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "lwe-real")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "svd")]
    decoder: DecoderArg,
    /// Also append the CSV line to this file (header added when new).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// JSON array of experiment objects.
    #[arg(long)]
    specs: PathBuf,
    /// CSV output path; a JSON echo of the specs lands next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SvCheckArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 200)]
    draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    cmd: OracleCmd,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exhaustive CVP over the default coefficient box.
    Cvp {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        radius: f64,
    },
    /// Truth-table satisfiability of a DIMACS formula.
    Sat { cnf: PathBuf },
}

/// Runs the CLI against an argument list and returns the process exit
/// code. Usage errors print to standard error and return 2.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Decode(a) => cmd_decode(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::ReduceSat(a) => cmd_reduce_sat(a),
        Cmd::Lift(a) => cmd_lift(a),
        Cmd::Experiment(a) => cmd_experiment(a),
        Cmd::Table(a) => cmd_table(a),
        Cmd::SvCheck(a) => cmd_sv_check(a),
        Cmd::Oracle(a) => cmd_oracle(a),
    }
}

fn read_matrix_file(path: &Path) -> Result<Matrix> {
    let mut r = BufReader::new(fs::File::open(path)?);
    textio::read_matrix(&mut r)
}

fn read_vector_file(path: &Path) -> Result<Vector> {
    let mut r = BufReader::new(fs::File::open(path)?);
    textio::read_vector(&mut r)
}

fn cmd_decode(a: DecodeArgs) -> Result<i32> {
    let basis = read_matrix_file(&a.basis)?;
    let target = read_vector_file(&a.target)?;
    let inst = BddInstance::new(basis, target, a.radius)?;
    let outcome = match DecoderKind::from(a.decoder) {
        DecoderKind::Svd => decoder::decode(&inst),
        DecoderKind::SvdScan => decoder::decode_with_scan(&inst),
        DecoderKind::LeastSquares => decoder::least_squares_decode(&inst),
    };
    match &outcome.status {
        decoder::DecodeStatus::Success { coefficients, residual } => {
            println!(
                "success residual={residual:.6e} candidates={}",
                outcome.candidates_tried
            );
            println!(
                "x: {}",
                coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            );
            if let Some(path) = a.output {
                let mut f = fs::File::create(path)?;
                textio::write_int_vector(&mut f, coefficients, None)?;
            }
            Ok(EXIT_OK)
        }
        decoder::DecodeStatus::Failure { reason } => {
            println!(
                "failure reason={} candidates={}",
                reason.as_str(),
                outcome.candidates_tried
            );
            Ok(EXIT_DECODE_FAILURE)
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<i32> {
    fs::create_dir_all(&a.out)?;
    let mode = Mode::from(a.mode);
    let (planted, lwe_params) = match mode {
        Mode::LweReal => {
            let params = LweParams::new(a.n, a.beta, a.theta, a.gamma0, false)?;
            (ensembles::generate_lwe_real(&params, a.seed)?, Some(params))
        }
        Mode::LweInteger => {
            let params = LweParams::new(a.n, a.beta, a.theta, a.gamma0, true)?;
            (ensembles::generate_lwe_integer(&params, a.seed)?, Some(params))
        }
        Mode::Gaussian => {
            let sigma = a.sigma.ok_or_else(|| {
                crate::error::Error::InvalidParameter("gaussian mode requires --sigma".into())
            })?;
            let radius = a.radius.unwrap_or_else(|| (a.n as f64).sqrt());
            (ensembles::generate_gaussian_bdd(a.n, a.beta, sigma, radius, a.seed)?, None)
        }
    };
    let inst = &planted.instance;
    let header = lwe_params.map(|p| {
        format!(
            "{} {} {} {} {} {} {}",
            p.n,
            p.m(),
            p.beta,
            p.theta,
            p.gamma0,
            u8::from(p.integer_mode),
            planted.seed
        )
    });
    write_file(&a.out.join("basis.txt"), |w| {
        textio::write_matrix(w, inst.basis(), header.as_deref())
    })?;
    write_file(&a.out.join("target.txt"), |w| {
        textio::write_vector(w, inst.target(), header.as_deref())
    })?;
    write_file(&a.out.join("planted.txt"), |w| {
        textio::write_int_vector(w, &planted.planted_x, None)
    })?;
    write_file(&a.out.join("error.txt"), |w| textio::write_vector(w, &planted.error, None))?;
    if let Some(params) = lwe_params {
        write_file(&a.out.join("instance.txt"), |w| {
            ensembles::write_instance(w, &params, &planted)
        })?;
    }
    let meta = serde_json::json!({
        "mode": mode.as_str(),
        "n": a.n,
        "m": inst.dims().0,
        "beta": a.beta,
        "theta": a.theta,
        "gamma0": a.gamma0,
        "sigma": a.sigma,
        "radius": inst.radius(),
        "error_norm": planted.error.norm(),
        "seed": a.seed,
    });
    fs::write(a.out.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
    println!(
        "generated {} instance {}x{} radius={:.6e} -> {}",
        mode.as_str(),
        inst.dims().0,
        inst.dims().1,
        inst.radius(),
        a.out.display()
    );
    Ok(EXIT_OK)
}

fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut fs::File) -> Result<()>,
{
    let mut file = fs::File::create(path)?;
    f(&mut file)?;
    file.flush()?;
    Ok(())
}

fn cmd_reduce_sat(a: ReduceSatArgs) -> Result<i32> {
    let text = fs::read_to_string(&a.cnf)?;
    let formula = sat::parse_dimacs(&text)?;
    let formula = sat::to_3cnf(&formula);
    let red = sat::build_reduction(&formula)?;
    fs::create_dir_all(&a.out)?;
    let header = format!("sat-reduction {} {}", red.k(), red.t());
    write_file(&a.out.join("basis.txt"), |w| textio::write_matrix(w, red.basis(), Some(&header)))?;
    write_file(&a.out.join("target.txt"), |w| {
        textio::write_vector(w, red.target(), Some(&header))
    })?;
    let (m, n) = red.dims();
    println!(
        "reduced k={} t={} -> {}x{} instance, decode radius sqrt({n}) = {:.12}",
        red.k(),
        red.t(),
        m,
        n,
        (n as f64).sqrt()
    );
    Ok(EXIT_OK)
}

fn parse_reduction_header(header: Option<&str>) -> Result<(usize, usize)> {
    let h = header.ok_or_else(|| crate::error::Error::Parse {
        line: 1,
        msg: "missing `sat-reduction k t` header".into(),
    })?;
    let toks: Vec<&str> = h.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "sat-reduction" {
        return Err(crate::error::Error::Parse {
            line: 1,
            msg: format!("expected `sat-reduction k t` header, got `{h}`"),
        });
    }
    let k = toks[1].parse().map_err(|e| crate::error::Error::Parse {
        line: 1,
        msg: format!("bad k: {e}"),
    })?;
    let t = toks[2].parse().map_err(|e| crate::error::Error::Parse {
        line: 1,
        msg: format!("bad t: {e}"),
    })?;
    Ok((k, t))
}

fn cmd_lift(a: LiftArgs) -> Result<i32> {
    let mut r = BufReader::new(fs::File::open(&a.basis)?);
    let (header, basis) = textio::read_matrix_with_header(&mut r)?;
    let (k, t) = parse_reduction_header(header.as_deref())?;
    let mut r = BufReader::new(fs::File::open(&a.target)?);
    let (_, target) = textio::read_vector_with_header(&mut r)?;
    let red = sat::SatReduction::from_parts(basis, target, k, t)?;
    let mut r = BufReader::new(fs::File::open(&a.coeffs)?);
    let coeffs = textio::read_int_vector(&mut r)?;
    match sat::lift_solution(&red, &coeffs)? {
        sat::LiftOutcome::Accepted(assignment) => {
            let dist = sat::distance_check(&red, &coeffs)?;
            println!(
                "accept assignment: {}",
                assignment.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" ")
            );
            println!("distance {dist:.12} = sqrt({})", red.k() + 2 * red.t());
            Ok(EXIT_OK)
        }
        sat::LiftOutcome::Rejected(reason) => {
            println!("reject: {reason}");
            Ok(EXIT_DECODE_FAILURE)
        }
    }
}

fn cmd_experiment(a: ExperimentArgs) -> Result<i32> {
    let spec = ExperimentSpec {
        n: a.n,
        beta: a.beta,
        theta: a.theta,
        gamma0: a.gamma0,
        trials: a.trials,
        seed: a.seed,
        mode: a.mode.into(),
        sigma: a.sigma,
        decoder: a.decoder.into(),
    };
    let result = harness::run_experiment(&spec)?;
    println!("{}", harness::CSV_HEADER);
    println!("{}", result.csv_line());
    if let Some(path) = a.output {
        let add_header = !path.exists();
        let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
        if add_header {
            writeln!(f, "{}", harness::CSV_HEADER)?;
        }
        writeln!(f, "{}", result.csv_line())?;
    }
    Ok(EXIT_OK)
}

fn cmd_table(a: TableArgs) -> Result<i32> {
    let text = fs::read_to_string(&a.specs)?;
    let rows: Vec<ExperimentSpec> = serde_json::from_str(&text)?;
    let results = harness::run_table(&rows, &a.output)?;
    println!("wrote {} rows to {}", results.len(), a.output.display());
    Ok(EXIT_OK)
}

fn cmd_sv_check(a: SvCheckArgs) -> Result<i32> {
    let summary = harness::sv_concentration(a.n, a.beta, a.sigma, a.draws, a.seed)?;
    print!("{summary}");
    Ok(EXIT_OK)
}

fn cmd_oracle(a: OracleArgs) -> Result<i32> {
    match a.cmd {
        OracleCmd::Cvp { basis, target, radius } => {
            let b = read_matrix_file(&basis)?;
            let t = read_vector_file(&target)?;
            let search = oracle::default_box(&b, &t, radius)?;
            let (x, dist) = oracle::brute_force_cvp(&b, &t, &search)?;
            println!("x*: {}", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
            println!("distance {dist:.12e} (box {} cells)", search.cell_count());
            Ok(if dist <= radius { EXIT_OK } else { EXIT_DECODE_FAILURE })
        }
        OracleCmd::Sat { cnf } => {
            let text = fs::read_to_string(&cnf)?;
            let formula = sat::parse_dimacs(&text)?;
            let (satisfiable, witness) = oracle::truth_table_sat(&formula)?;
            if let Some(w) = witness {
                println!(
                    "satisfiable: {}",
                    w.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" ")
                );
                Ok(EXIT_OK)
            } else {
                debug_assert!(!satisfiable);
                println!("unsatisfiable");
                Ok(EXIT_DECODE_FAILURE)
            }
        }
    }
}
