//! Command-line front end.
//!
//! Exit codes: 0 success or battery pass, 1 battery fail, 2 usage or
//! configuration error, 3 I/O error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::bench::{scaling_table, CSV_HEADER};
use crate::error::Error;
use crate::files::{parse_gates, parse_state, sidecar_path, write_atomic};
use crate::gates::{apply_sequence, resolve_specs};
use crate::nbl::{
    amplitude_estimate, measure_membership, BitString, NoiseBitSystem, OpCount, SuperpositionState,
};
use crate::rng::{pack_bits, unpack_bits, BitstreamMeta, PipelineConfig};
use crate::stat_tests::{run_battery, DEFAULT_ALPHA};
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable supplying the seed when `--seed` is absent.
pub const SEED_ENV: &str = "NOISEBIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "noisebit", version, about = "Noise-based logic simulator and thermal-noise bit generator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate XOR-combined sign-extractor bits into a packed file plus JSON sidecar.
    Rng(RngArgs),
    /// Run the randomness battery on a packed bit file.
    Test(TestArgs),
    /// Build a noise-bit state, apply gates and read out strings.
    Nbl(NblArgs),
    /// Counted-operation scaling table as CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RngArgs {
    /// Number of combined generators.
    #[arg(short = 'k', long, default_value_t = 4)]
    pub generators: usize,
    /// Output bits.
    #[arg(short = 'n', long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Steps between emitted bits; defaults to ceil(5 / (1 - rho)).
    #[arg(short = 'd', long)]
    pub decimation: Option<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TestArgs {
    /// Packed bit file; `<file>.json` supplies the exact bit count when present.
    #[arg(short, long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NblArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub gates: Option<PathBuf>,
    /// Bit string to read out (repeatable); character i is bit i.
    #[arg(short, long = "measure")]
    pub measure: Vec<String>,
    /// Observation length M.
    #[arg(short = 'M', long, default_value_t = 4096)]
    pub steps: u64,
    /// Overrides the state file's master seed.
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 64)]
    pub max_n: usize,
    /// Time steps evaluated per product-form row.
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when omitted. A `<out>.json` sidecar echoes the config.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|e| io_err(path, e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn emit(report: &serde_json::Value, path: Option<&Path>) -> Result<(), CliError> {
    let text = to_json(report);
    match path {
        Some(p) => write_out(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Rng(a) => cmd_rng(&a),
        Command::Test(a) => cmd_test(&a),
        Command::Nbl(a) => cmd_nbl(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("noisebit: {e}");
            e.exit_code()
        }
    }
}

pub fn cmd_rng(a: &RngArgs) -> Result<i32, CliError> {
    let cfg = PipelineConfig {
        generators: a.generators,
        rho: a.rho,
        sigma: a.sigma,
        decimation: a.decimation,
        master_seed: a.seed,
    };
    let stream = cfg.run(a.samples)?;
    let meta = BitstreamMeta::new(&cfg, &stream);
    write_out(&a.out, &pack_bits(&stream.bits))?;
    write_out(&sidecar_path(&a.out), to_json(&meta).as_bytes())?;
    Ok(EXIT_OK)
}

/// Reads a packed bit file, trimming padding using the sidecar when present.
pub fn read_bits(path: &Path) -> Result<Vec<bool>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    let side = sidecar_path(path);
    let n = if side.exists() {
        let meta: BitstreamMeta = serde_json::from_str(&read_text(&side)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", side.display())))?;
        Some(meta.n)
    } else {
        None
    };
    Ok(unpack_bits(&bytes, n)?)
}

pub fn cmd_test(a: &TestArgs) -> Result<i32, CliError> {
    let bits = read_bits(&a.input)?;
    let battery = run_battery(&bits, a.alpha)?;
    let report = json!({
        "version": VERSION,
        "config": { "subcommand": "test", "args": a },
        "n": bits.len(),
        "battery": battery,
    });
    emit(&report, a.report.as_deref())?;
    Ok(if battery.pass { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Debug, Serialize)]
struct Measurement {
    string: String,
    estimate: Complex64,
    std_error: f64,
    half_width: f64,
    hoeffding_bound: f64,
    decision: bool,
    /// Exact amplitude (product form) or exact membership indicator (explicit).
    exact: Complex64,
}

pub fn cmd_nbl(a: &NblArgs) -> Result<i32, CliError> {
    let file = parse_state(&read_text(&a.state)?)?;
    let mut state = file.to_state()?;
    let seed = a.seed.unwrap_or(file.master_seed);
    let n = state.n();

    let mut gate_ops = OpCount::default();
    if let Some(gpath) = &a.gates {
        let ops = resolve_specs(&parse_gates(&read_text(gpath)?)?)?;
        match &mut state {
            SuperpositionState::ProductForm(p) => gate_ops = apply_sequence(p, &ops)?,
            SuperpositionState::Explicit(_) => {
                return Err(CliError::Usage("gates apply only to product-form states".into()))
            }
        }
    }

    let system = NoiseBitSystem::new(n, seed)?;
    let mut step_ops = OpCount::default();
    state.evaluate(&system.frame(1), &mut step_ops);

    let mut measurements = Vec::new();
    for s in &a.measure {
        let c: BitString = s.parse()?;
        if c.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: c.len() }.into());
        }
        let (est, exact) = match &state {
            SuperpositionState::Explicit(set) => {
                let member = if set.contains(&c) { 1.0 } else { 0.0 };
                (measure_membership(&system, &state, &c, a.steps)?, Complex64::new(member, 0.0))
            }
            SuperpositionState::ProductForm(p) => {
                (amplitude_estimate(&system, p, &c, a.steps)?, p.amplitude(&c, &mut OpCount::default())?)
            }
        };
        measurements.push(Measurement {
            string: c.to_string(),
            estimate: est.value,
            std_error: est.std_error,
            half_width: est.half_width,
            hoeffding_bound: est.bound,
            decision: est.decision,
            exact,
        });
    }

    let (kind, extended) = match &state {
        SuperpositionState::Explicit(_) => ("explicit", false),
        SuperpositionState::ProductForm(p) => ("product", p.uses_extended()),
    };
    let report = json!({
        "version": VERSION,
        "config": { "subcommand": "nbl", "args": a, "state_file": file, "master_seed": seed },
        "n": n,
        "kind": kind,
        "extended_precision": extended,
        "ops_per_step": step_ops,
        "ops_per_step_total": step_ops.total(),
        "gate_ops": gate_ops,
        "measurements": measurements,
    });
    emit(&report, a.report.as_deref())?;
    Ok(EXIT_OK)
}

pub fn cmd_bench(a: &BenchArgs) -> Result<i32, CliError> {
    let rows = scaling_table(a.max_n, a.steps, a.seed)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.to_csv());
        csv.push('\n');
    }
    match &a.out {
        Some(p) => {
            write_out(p, csv.as_bytes())?;
            let meta = json!({
                "version": VERSION,
                "config": { "subcommand": "bench", "args": a },
                "columns": CSV_HEADER.split(',').collect::<Vec<_>>(),
            });
            write_out(&sidecar_path(p), to_json(&meta).as_bytes())?;
        }
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}
