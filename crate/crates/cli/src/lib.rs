//! Command-line front end: tomograms, reconstruction, fidelity, purity,
//! kernel reports and quantumness checks.
//!
//! [`run`] is the whole program; the `pntomo` binary forwards its arguments
//! and standard streams to it and exits with the returned code.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pntomo::numerics::tol;
use pntomo::starprod::{
    build_report, fidelity_via_tomograms, quantumness_check, FidelityKernel, KernelKind, ReportOptions,
};
use pntomo::states::make_state;
use pntomo::{io as mio, CMatrix, Error, StateSpec, TomogramGrid};

pub mod config;

use config::{ConfigLayer, RunConfig};

/// Exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const CONFIG: u8 = 3;
    pub const INPUT: u8 = 4;
    pub const DIVERGENT: u8 = 5;
    pub const NOT_QUANTUM: u8 = 10;
}

#[derive(Parser)]
#[command(name = "pntomo", version, about = "Photon-number tomography: tomograms, reconstruction, fidelity and kernel checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct ConfigArgs {
    /// `key = value` file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Fock-space cutoff
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Largest photon number kept in tomograms
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Radius of the integration disk
    #[arg(long, global = true)]
    radius: Option<f64>,
    #[arg(long, global = true)]
    radial: Option<usize>,
    #[arg(long, global = true)]
    angular: Option<usize>,
    /// Real part of the ordering parameter s
    #[arg(long, global = true, allow_negative_numbers = true)]
    s_re: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    s_im: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Fixed-order reductions: bitwise reproducible across thread counts (default)
    #[arg(long, global = true, conflicts_with = "unordered")]
    ordered: bool,
    #[arg(long, global = true)]
    unordered: bool,
}

impl ConfigArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            dim: self.dim,
            n_max: self.n_max,
            radius: self.radius,
            radial_nodes: self.radial,
            angular_nodes: self.angular,
            s_re: self.s_re,
            s_im: self.s_im,
            seed: self.seed,
            ordered_reduction: if self.ordered {
                Some(true)
            } else if self.unordered {
                Some(false)
            } else {
                None
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the tomogram of a benchmark state and write it as CSV
    Tomogram {
        /// ground | fock:N | coherent:RE+IMi | thermal:NBAR | cat:even|odd:RE+IMi
        #[arg(long)]
        state: StateSpec,
        /// Output CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a density matrix from a tomogram CSV
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output JSON matrix
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tr ρ₁ρ₂ from two tomograms or two matrices
    Fidelity {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Tomogram)]
        via: Via,
    },
    /// Tr ρ² from a tomogram or a matrix
    Purity {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Tomogram)]
        via: Via,
    },
    /// Compare a closed-form kernel with its trace oracle at 50 random points
    KernelReport {
        #[arg(long)]
        which: KernelKind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Nonnegativity and purity-bound checks on a tomogram
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Tomogram,
    Direct,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl std::fmt::Display) -> Self {
        Self { code, message: message.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

/// Runs one command line (program name first) and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return if e.use_stderr() { exit::PARSE } else { exit::OK };
        }
    };
    let mut io = Streams { out, err };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Streams<'_> {
    fn line(&mut self, text: String) -> Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(|e| Failure::new(exit::IO, e))
    }

    fn warn(&mut self, text: String) {
        let _ = writeln!(self.err, "warning: {text}");
    }
}

fn dispatch(cli: Cli, io: &mut Streams) -> Outcome {
    let defaults = match cli.command {
        Command::KernelReport { .. } => RunConfig { dim: 40, ..RunConfig::default() },
        _ => RunConfig::default(),
    };
    let file = match &cli.config.config {
        Some(path) => ConfigLayer::load(path).map_err(|e| Failure::new(exit::CONFIG, e))?,
        None => ConfigLayer::default(),
    };
    let cfg = RunConfig::resolve(&cli.config.layer().over(file), defaults);
    cfg.validate().map_err(|e| Failure::new(exit::CONFIG, e))?;

    match cli.command {
        Command::Tomogram { state, out } => cmd_tomogram(state, &cfg, out.as_deref(), io),
        Command::Reconstruct { input, out } => cmd_reconstruct(&input, &cfg, out.as_deref(), io),
        Command::Fidelity { a, b, via } => cmd_fidelity(&a, &b, &cfg, via, io),
        Command::Purity { input, via } => cmd_purity(&input, &cfg, via, io),
        Command::KernelReport { which, out } => cmd_kernel_report(which, &cfg, &out, io),
        Command::Check { input } => cmd_check(&input, &cfg, io),
    }
}

fn num(x: f64) -> String {
    format!("{x:.8e}")
}

/// Exit code for a library error raised after inputs were read.
fn compute_failure(e: Error) -> Failure {
    let code = match e {
        Error::Divergent { .. } | Error::ImaginaryResidue { .. } => exit::DIVERGENT,
        Error::GridMismatch(_) | Error::DimensionMismatch { .. } => exit::INPUT,
        _ => exit::CONFIG,
    };
    Failure::new(code, e)
}

fn read_tomogram(path: &Path) -> Result<TomogramGrid, Failure> {
    let file = File::open(path).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))?;
    TomogramGrid::read_csv(BufReader::new(file)).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<CMatrix, Failure> {
    mio::read_matrix(path).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::new(exit::IO, format!("{}: {e}", path.display())))
}

fn cmd_tomogram(state: StateSpec, cfg: &RunConfig, out: Option<&Path>, io: &mut Streams) -> Outcome {
    let frame = cfg.frame().map_err(|e| Failure::new(exit::CONFIG, e))?;
    let rho = make_state(frame.space(), state).map_err(|e| Failure::new(exit::CONFIG, e))?;
    if rho.truncation_warning() {
        io.warn(format!("{state} loses {} of its norm at dim {}", num(rho.leakage()), cfg.dim));
    }
    let tomo = frame.forward(&rho).map_err(compute_failure)?;
    let mut buf = Vec::new();
    tomo.write_csv(&mut buf).map_err(|e| Failure::new(exit::IO, e))?;
    match out {
        Some(path) => write_output(path, &buf)?,
        None => io.out.write_all(&buf).map_err(|e| Failure::new(exit::IO, e))?,
    }
    Ok(exit::OK)
}

fn cmd_reconstruct(input: &Path, cfg: &RunConfig, out: Option<&Path>, io: &mut Streams) -> Outcome {
    let tomo = read_tomogram(input)?;
    let frame = cfg.frame_on(tomo.scheme().clone(), tomo.n_max()).map_err(|e| Failure::new(exit::CONFIG, e))?;
    let rec = frame.reconstruct_unchecked(&tomo).map_err(compute_failure)?;
    io.line(format!(
        "trace_defect={} herm_defect={} min_eig={}",
        num(rec.trace_defect),
        num(rec.hermiticity_defect),
        num(rec.min_eigenvalue)
    ))?;
    if !(rec.trace_defect <= tol::DIVERGENT_TRACE_DEFECT) {
        return Err(compute_failure(Error::Divergent { trace_defect: rec.trace_defect }));
    }
    if let Some(path) = out {
        let json = mio::matrix_to_json(&rec.matrix).map_err(|e| Failure::new(exit::IO, e))?;
        write_output(path, json.as_bytes())?;
    }
    Ok(exit::OK)
}

fn warn_outside_unit(name: &str, value: f64, io: &mut Streams) {
    if !(-tol::BOUNDS_SLACK..=1.0 + tol::BOUNDS_SLACK).contains(&value) {
        io.warn(format!("{name} {} lies outside [0, 1]", num(value)));
    }
}

fn tomographic_overlap(a: &Path, b: &Path, cfg: &RunConfig) -> Result<f64, Failure> {
    let ta = read_tomogram(a)?;
    let tb = if a == b { ta.clone() } else { read_tomogram(b)? };
    ta.check_compatible(&tb).map_err(|e| Failure::new(exit::INPUT, e))?;
    let frame = cfg.frame_on(ta.scheme().clone(), ta.n_max()).map_err(|e| Failure::new(exit::CONFIG, e))?;
    fidelity_via_tomograms(&ta, &tb, &frame, FidelityKernel::Oracle).map_err(compute_failure)
}

fn direct_overlap(a: &Path, b: &Path) -> Result<f64, Failure> {
    let ma = read_matrix(a)?;
    let mb = if a == b { ma.clone() } else { read_matrix(b)? };
    let value = ma.trace_of_product(&mb).map_err(|e| Failure::new(exit::INPUT, e))?;
    Ok(value.re)
}

fn overlap(a: &Path, b: &Path, cfg: &RunConfig, via: Via) -> Result<f64, Failure> {
    match via {
        Via::Tomogram => tomographic_overlap(a, b, cfg),
        Via::Direct => direct_overlap(a, b),
    }
}

fn cmd_fidelity(a: &Path, b: &Path, cfg: &RunConfig, via: Via, io: &mut Streams) -> Outcome {
    let value = overlap(a, b, cfg, via)?;
    io.line(format!("fidelity={}", num(value)))?;
    warn_outside_unit("fidelity", value, io);
    Ok(exit::OK)
}

fn cmd_purity(input: &Path, cfg: &RunConfig, via: Via, io: &mut Streams) -> Outcome {
    let value = overlap(input, input, cfg, via)?;
    io.line(format!("purity={}", num(value)))?;
    warn_outside_unit("purity", value, io);
    Ok(exit::OK)
}

fn cmd_kernel_report(which: KernelKind, cfg: &RunConfig, out: &Path, io: &mut Streams) -> Outcome {
    let ordering = cfg.ordering().map_err(|e| Failure::new(exit::CONFIG, e))?;
    let opts = ReportOptions { dim: cfg.dim, ..ReportOptions::new(which, ordering, cfg.seed) };
    let report = build_report(&opts).map_err(|e| Failure::new(exit::CONFIG, e))?;
    let json = report.to_json().map_err(|e| Failure::new(exit::IO, e))?;
    write_output(out, json.as_bytes())?;
    let h = &report.header;
    io.line(format!("matched={}/{}", h.matched, h.points))?;
    if let Some(amended) = h.matched_amended {
        io.line(format!("matched_amended={amended}/{}", h.points))?;
    }
    io.line(format!("consistency={}", if report.consistency_ok() { "pass" } else { "fail" }))?;
    Ok(exit::OK)
}

fn cmd_check(input: &Path, cfg: &RunConfig, io: &mut Streams) -> Outcome {
    let tomo = read_tomogram(input)?;
    let frame = cfg.frame_on(tomo.scheme().clone(), tomo.n_max()).map_err(|e| Failure::new(exit::CONFIG, e))?;
    let report = quantumness_check(&tomo, &frame).map_err(compute_failure)?;
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    io.line(format!(
        "min_eig={} purity={} trace_defect={}",
        num(report.min_eigenvalue),
        num(report.purity),
        num(report.trace_defect)
    ))?;
    io.line(format!("nonnegativity={} bounds={}", verdict(report.passes), verdict(report.bounds_ok)))?;
    Ok(if report.is_quantum() { exit::OK } else { exit::NOT_QUANTUM })
}
