//! `triu`: reproducible tri-unitary circuit experiments.
//!
//! Every dataset is a CSV file whose `#` header records the full command
//! line configuration and a SHA-256 hash of the gate. Exit code 1 signals a
//! validation failure, 2 a violated size limit.

use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use triunitary::chain::{sequence_correlation_grid, Boundary, ChainCircuit, CorrelationGrid};
use triunitary::channel::classify_hierarchy;
use triunitary::entanglement::{growth_experiment, GateSource};
use triunitary::gates::{
    appendix_gate, gate_hash, is_perfect, is_triunitary, kicked_ising_half_periods, perfect_tensor,
    random_triunitary_params, seeded_rng, triunitary_gate, GateFile, KickedIsingParams,
};
use triunitary::io::{correlation_rows, kagome_rows, write_csv, EntropyRow, Metadata};
use triunitary::kagome::{build_kagome, Axis, KagomeSite};
use triunitary::{Error, Gate3, Pauli};

/// Worker count for seed sweeps; defaults to rayon's choice.
const WORKERS_ENV: &str = "TRIU_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "triu", version, about = "Exact experiments on circuits of tri-unitary gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report tri-unitarity residuals and perfectness of a gate.
    VerifyGate(GateArgs),
    /// Ergodic-hierarchy label and channel spectra as JSON.
    Classify(GateArgs),
    /// Brute-force correlators of the 1+1D chain as CSV.
    Correlations(CorrelationArgs),
    /// Entropy growth from the solvable state as CSV.
    Entanglement(EntanglementArgs),
    /// Brute-force correlators of the kagome circuit as CSV.
    KagomeCorrelations(KagomeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    Swap,
    Appendix,
    Perfect,
    KickedIsing,
    Random,
}

#[derive(Args, Debug, Clone)]
struct GateArgs {
    /// Named gate.
    #[arg(long, value_enum, conflicts_with = "gate_file")]
    preset: Option<Preset>,
    /// Gate JSON file.
    #[arg(long)]
    gate_file: Option<PathBuf>,
    /// Controlled-phase angle of the appendix gate (radians).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Single-qubit rotation angle of the appendix gate (radians).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    g: f64,
    /// Seed of the random preset.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kicked Ising next-nearest-neighbour coupling.
    #[arg(long = "J", default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    j: f64,
    /// Kicked Ising transverse field on sublattice A.
    #[arg(long = "b", default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    b: f64,
    /// Kicked Ising transverse field on sublattice B.
    #[arg(long = "b-prime", default_value_t = 0.3, allow_negative_numbers = true)]
    b_prime: f64,
    /// Kicked Ising nearest-neighbour coupling.
    #[arg(long = "J-prime", default_value_t = 0.0, allow_negative_numbers = true)]
    j_prime: f64,
}

#[derive(Args, Debug)]
struct CorrelationArgs {
    #[command(flatten)]
    gate: GateArgs,
    #[arg(long = "L", default_value_t = 12)]
    l: usize,
    #[arg(long, default_value = "periodic")]
    boundary: Boundary,
    #[arg(long = "tmax", default_value_t = 2)]
    t_max: usize,
    #[arg(long, default_value_t = 0)]
    anchor: usize,
    /// Late-time operator.
    #[arg(long, default_value = "Z")]
    a: Pauli,
    /// Early-time operator.
    #[arg(long = "op-b", default_value = "Z")]
    op_b: Pauli,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    /// One random tri-unitary gate per seed, uniform in spacetime.
    Random,
    /// Controlled-phase skeleton with Haar dressing on every gate.
    DressedCp,
    /// Perfect tensor with Haar dressing on every gate.
    DressedPerfect,
    /// The gate given by `--preset` or `--gate-file`.
    Gate,
}

#[derive(Args, Debug)]
struct EntanglementArgs {
    #[command(flatten)]
    gate: GateArgs,
    #[arg(long, value_enum, default_value = "random")]
    source: SourceKind,
    #[arg(long = "L", default_value_t = 12)]
    l: usize,
    #[arg(long, default_value = "periodic")]
    boundary: Boundary,
    /// Region as `start..end` (end exclusive); defaults to the left half.
    #[arg(long)]
    region: Option<String>,
    #[arg(long = "tmax", default_value_t = 4)]
    t_max: usize,
    /// Number of seeds, `0..seeds`.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KagomeArgs {
    #[command(flatten)]
    gate: GateArgs,
    #[arg(long, default_value_t = 4)]
    n1: usize,
    #[arg(long, default_value_t = 4)]
    n2: usize,
    #[arg(long, default_value_t = 1)]
    cycles: usize,
    /// Axis of the anchor site.
    #[arg(long, default_value = "x")]
    axis: Axis,
    /// Grid radius in unit cells.
    #[arg(long, default_value_t = 2)]
    radius: i64,
    #[arg(long, default_value = "Z")]
    a: Pauli,
    #[arg(long = "op-b", default_value = "Z")]
    op_b: Pauli,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A CLI failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_resource_bound() { 2 } else { 1 }, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("triu: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize =
            v.parse().map_err(|_| invalid(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(invalid(format!("{WORKERS_ENV} must be positive")));
        }
        // a second initialization only happens in tests; the first one wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::VerifyGate(args) => verify_gate(&args),
        Command::Classify(args) => classify(&args),
        Command::Correlations(args) => correlations(&args),
        Command::Entanglement(args) => entanglement(&args),
        Command::KagomeCorrelations(args) => kagome(&args),
    }
}

impl GateArgs {
    fn describe(&self) -> String {
        match (&self.gate_file, self.preset) {
            (Some(p), _) => format!("file:{}", p.display()),
            (None, Some(Preset::Appendix)) => format!("appendix(phi={},g={})", self.phi, self.g),
            (None, Some(Preset::Random)) => format!("random(seed={})", self.seed),
            (None, Some(Preset::KickedIsing)) => self.kicked_ising_label(),
            (None, Some(p)) => format!("{p:?}").to_lowercase(),
            (None, None) => "none".into(),
        }
    }

    fn kicked_ising_label(&self) -> String {
        format!("kicked-ising(J={},b={},b'={},J'={})", self.j, self.b, self.b_prime, self.j_prime)
    }

    /// The three-qubit gate, or `None` for the kicked Ising preset.
    fn gate(&self) -> CliResult<Option<Gate3>> {
        if let Some(path) = &self.gate_file {
            return Ok(Some(GateFile::read(path)?));
        }
        let g = match self.preset.ok_or_else(|| invalid("a gate is required: pass --preset or --gate-file"))? {
            Preset::Swap => Gate3::swap13(),
            Preset::Appendix => appendix_gate(self.phi, self.g),
            Preset::Perfect => perfect_tensor(),
            Preset::Random => triunitary_gate(&random_triunitary_params(&mut seeded_rng(self.seed)))?,
            Preset::KickedIsing => return Ok(None),
        };
        Ok(Some(g))
    }

    fn required_gate(&self) -> CliResult<Gate3> {
        self.gate()?.ok_or_else(|| invalid("the kicked-ising preset is a chain, not a single gate; use `correlations`"))
    }
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn verify_gate(args: &GateArgs) -> CliResult<ExitCode> {
    let g = args.required_gate()?;
    let report = is_triunitary(g.tensor());
    let out = json!({
        "gate": args.describe(),
        "gate_hash": gate_hash(&g),
        "unitarity_residual": g.unitarity_residual(),
        "residuals": report.residuals,
        "tri_unitary": report.tri_unitary,
        "perfect": is_perfect(g.tensor()),
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
    Ok(if report.tri_unitary { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn classify(args: &GateArgs) -> CliResult<ExitCode> {
    let g = args.required_gate()?;
    let report = classify_hierarchy(&g)?;
    let spectra: Vec<Vec<[f64; 2]>> =
        report.eigenvalues.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
    let out = json!({
        "gate": args.describe(),
        "gate_hash": gate_hash(&g),
        "label": report.label.to_string(),
        "eigenvalues": { "minus": spectra[0], "zero": spectra[1], "plus": spectra[2] },
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
    Ok(ExitCode::SUCCESS)
}

fn correlations(args: &CorrelationArgs) -> CliResult<ExitCode> {
    let (a, b) = (args.a.op(), args.op_b.op());
    let mut meta = Metadata::new();
    meta.push("command", "correlations")
        .push("gate", args.gate.describe())
        .push("L", args.l)
        .push("boundary", args.boundary)
        .push("tmax", args.t_max)
        .push("anchor", args.anchor)
        .push("a", args.a)
        .push("b", args.op_b)
        .push("seed", args.gate.seed);
    let grid: CorrelationGrid = match args.gate.gate()? {
        Some(g) => {
            meta.push("gate_hash", gate_hash(&g));
            ChainCircuit::uniform(args.l, args.boundary, g)?.correlation_grid(&a, &b, args.anchor, args.t_max)?
        }
        None => {
            let p = KickedIsingParams::uniform(
                args.l,
                args.boundary,
                args.gate.j,
                args.gate.b,
                args.gate.b_prime,
                args.gate.j_prime,
            );
            meta.push("gate_hash", "none");
            let layers = kicked_ising_half_periods(args.l, &p, args.boundary)?;
            sequence_correlation_grid(args.l, args.boundary, &layers, &a, &b, args.anchor, args.t_max)?
        }
    };
    write_csv(open_output(&args.out)?, &meta, &correlation_rows(&grid))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_region(s: &str, l: usize) -> CliResult<Vec<usize>> {
    let (a, b) = s.split_once("..").ok_or_else(|| invalid(format!("region must look like start..end, got {s:?}")))?;
    let a: usize = a.trim().parse().map_err(|_| invalid(format!("bad region start {a:?}")))?;
    let b: usize = b.trim().parse().map_err(|_| invalid(format!("bad region end {b:?}")))?;
    if a >= b || b > l {
        return Err(invalid(format!("region {a}..{b} must be non-empty and inside 0..{l}")));
    }
    Ok((a..b).collect())
}

fn entanglement(args: &EntanglementArgs) -> CliResult<ExitCode> {
    let region = match &args.region {
        Some(s) => parse_region(s, args.l)?,
        None => (0..args.l / 2).collect(),
    };
    let phi = args.gate.phi;
    let (source, gate_label, hash) = match args.source {
        SourceKind::Random => (GateSource::RandomFloquet, "random-floquet".to_string(), "per-seed".to_string()),
        SourceKind::DressedCp => {
            (GateSource::DressedCp { phi: [phi; 3] }, format!("dressed-cp(phi={phi})"), "per-gate".into())
        }
        SourceKind::DressedPerfect => (GateSource::DressedPerfect, "dressed-perfect".into(), "per-gate".into()),
        SourceKind::Gate => {
            let g = args.gate.required_gate()?;
            let hash = gate_hash(&g);
            (GateSource::Fixed(Box::new(g)), args.gate.describe(), hash)
        }
    };
    let row_phi = match args.source {
        SourceKind::DressedCp => phi,
        SourceKind::Gate if args.gate.preset == Some(Preset::Appendix) => phi,
        _ => f64::NAN,
    };
    let mut meta = Metadata::new();
    meta.push("command", "entanglement")
        .push("source", source.label())
        .push("gate", gate_label)
        .push("gate_hash", hash)
        .push("L", args.l)
        .push("boundary", args.boundary)
        .push("region", format!("{}..{}", region[0], region[region.len() - 1] + 1))
        .push("tmax", args.t_max)
        .push("seeds", args.seeds)
        .push("entropy_unit", "bits");
    let series = (0..args.seeds)
        .into_par_iter()
        .map(|seed| growth_experiment(&source, args.l, args.boundary, &region, args.t_max, seed))
        .collect::<Result<Vec<_>, Error>>()?;
    let rows: Vec<EntropyRow> = series
        .iter()
        .flat_map(|s| {
            s.points.iter().map(move |p| EntropyRow {
                t: p.t,
                seed: s.seed,
                phi: row_phi,
                s2_bits: p.s2,
                svn_bits: p.svn,
                flatness_residual: p.flatness,
            })
        })
        .collect();
    write_csv(open_output(&args.out)?, &meta, &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn kagome(args: &KagomeArgs) -> CliResult<ExitCode> {
    let g = args.gate.required_gate()?;
    let hash = gate_hash(&g);
    let c = build_kagome(args.n1, args.n2, g)?;
    let anchor = KagomeSite::new([1, 1], args.axis);
    let grid = c.correlation_grid(&args.a.op(), &args.op_b.op(), anchor, args.cycles, args.radius)?;
    let mut meta = Metadata::new();
    meta.push("command", "kagome-correlations")
        .push("gate", args.gate.describe())
        .push("gate_hash", hash)
        .push("n1", args.n1)
        .push("n2", args.n2)
        .push("cycles", args.cycles)
        .push("anchor", format!("cell=(1,1) axis={}", args.axis))
        .push("radius", args.radius)
        .push("a", args.a)
        .push("b", args.op_b)
        .push("offset_basis", "i1*(1,-1) + i2*(1,2) in cells")
        .push("sublattice_column", "axis of the site within its unit cell");
    write_csv(open_output(&args.out)?, &meta, &kagome_rows(&grid))?;
    Ok(ExitCode::SUCCESS)
}
