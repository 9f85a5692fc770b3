//! `sigmeas`: generation, exact distances and convergence diagnostics for
//! finite atomic signed measures.
//!
//! Subcommands: `gen` (family terms as JSON), `dist` (certified distance
//! bracket between two step functions), `diag` (per-index CSV trace),
//! `report` (convergence verdicts as JSON).
//!
//! Every rational crosses the interface as a `p/q` string; no floating point
//! appears anywhere, so identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success, 1 usage error, 2 contract violation, 3 report
//! self-check failure (the prefix evidence contradicts the vague-convergence
//! equivalence).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use sigmeas::diagnostics::{compute_trace, convergence_report, ReportConfig, SequenceSpec};
use sigmeas::generators::{self, FamilyId};
use sigmeas::metric::almost_basic_distance;
use sigmeas::{Error, Scalar, SignedMeasure, StepFunction};

#[derive(Parser)]
#[command(
    name = "sigmeas",
    version,
    about = "Exact computations with finite atomic signed measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one term of a built-in family as JSON (a measure, or a step
    /// function for the interval-stage families).
    Gen {
        /// Family name (escape_mass, typewriter, blowup_dipole,
        /// spreading_typewriter, cantor_stage, svc_stage, alternating_dirac)
        #[arg(long)]
        family: String,
        /// Term index
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified distance bracket between two step functions given as JSON
    /// files.
    Dist {
        /// First step function (JSON)
        #[arg(long)]
        f: PathBuf,
        /// Second step function (JSON)
        #[arg(long)]
        g: PathBuf,
        /// Bracket tolerance, a positive rational like 1/1000000
        #[arg(long)]
        tol: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-index CSV trace: distance bracket, local variation per radius,
    /// gaps per test function, total variation, tightness radius.
    Diag(SequenceArgs),
    /// Convergence verdicts (vague/loose/weak/basic/almost basic) as JSON,
    /// with the built-in consistency cross-check.
    Report(SequenceArgs),
}

#[derive(Args)]
struct SequenceArgs {
    /// Built-in family name (alternative to --input)
    #[arg(long, conflicts_with = "input")]
    family: Option<String>,
    /// Index range A:B for --family
    #[arg(long = "n-range", requires = "family")]
    n_range: Option<String>,
    /// JSON file {"measures": [...], "limit": {...}} (alternative to --family)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Radii for the local-variation profile, e.g. 1,2,5
    #[arg(long)]
    radii: Option<String>,
    /// Distance bracket tolerance
    #[arg(long)]
    tol: Option<String>,
    /// Grid for the pointwise-difference probe, e.g. -1/3,1/5,5/3
    #[arg(long)]
    grid: Option<String>,
    /// Grid points to exclude from the probe
    #[arg(long)]
    exclude: Option<String>,
    /// Tightness threshold
    #[arg(long)]
    eps: Option<String>,
    /// JSON file with an array of test functions, replacing the built-in set
    #[arg(long)]
    phis: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => 1,
            Error::Contract(_) | Error::Domain(_) => 2,
            Error::Inconsistent(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { family, n, out } => {
            let family = parse_family(&family)?;
            let json = if family.generates_step_functions() {
                let stage = match family {
                    FamilyId::CantorStage => generators::cantor_stage(n),
                    FamilyId::SvcStage => generators::svc_stage(n),
                    _ => unreachable!(),
                };
                serde_json::to_string(&stage).expect("serializable")
            } else {
                serde_json::to_string(&family.measure_term(n)?).expect("serializable")
            };
            write_output(&out, &json)
        }
        Command::Dist { f, g, tol, out } => {
            let tol = parse_positive_rational(&tol, "tol")?;
            let f: StepFunction = read_json(&f)?;
            let g: StepFunction = read_json(&g)?;
            let bracket = almost_basic_distance(&f, &g, &tol)?;
            write_output(&out, &serde_json::to_string(&bracket).expect("serializable"))
        }
        Command::Diag(args) => {
            let (spec, config) = build_run(&args)?;
            let trace = compute_trace(&spec, &config)?;
            write_output(&args.out, trace.to_csv().trim_end())
        }
        Command::Report(args) => {
            let (spec, config) = build_run(&args)?;
            let report = convergence_report(&spec, &config)?;
            for note in &report.notes {
                eprintln!("note: {note}");
            }
            write_output(
                &args.out,
                &serde_json::to_string(&report.verdicts).expect("serializable"),
            )?;
            report.consistency_check()?;
            Ok(())
        }
    }
}

/// Explicit sequence file: the terms and the claimed limit.
#[derive(Deserialize)]
struct SequenceFile {
    measures: Vec<SignedMeasure>,
    limit: SignedMeasure,
}

fn build_run(args: &SequenceArgs) -> Result<(SequenceSpec, ReportConfig), Failure> {
    let (spec, mut config) = match (&args.family, &args.input) {
        (Some(name), None) => {
            let family = parse_family(name)?;
            let (from, to) = match &args.n_range {
                Some(r) => parse_range(r)?,
                None => ReportConfig::default_range(family),
            };
            let spec = SequenceSpec::family(family, from, to, SignedMeasure::zero())?;
            (spec, ReportConfig::for_family(family, from, to))
        }
        (None, Some(path)) => {
            let file: SequenceFile = read_json(path)?;
            let spec = SequenceSpec::explicit(file.measures, file.limit)?;
            (spec, ReportConfig::generic())
        }
        _ => {
            return Err(Failure::usage(
                "exactly one of --family or --input is required",
            ))
        }
    };

    if let Some(radii) = &args.radii {
        config.radii = parse_rational_list(radii, "radii")?;
    }
    if let Some(tol) = &args.tol {
        config.tol = parse_positive_rational(tol, "tol")?;
    }
    if let Some(grid) = &args.grid {
        config.cdf_grid = parse_rational_list(grid, "grid")?;
    }
    if let Some(exclude) = &args.exclude {
        config.cdf_exclude = parse_rational_list(exclude, "exclude")?;
    }
    if let Some(eps) = &args.eps {
        config.tightness_eps = Scalar::from_str(eps).map_err(Failure::from)?;
    }
    if let Some(path) = &args.phis {
        config.phis = read_json(path)?;
    }
    Ok((spec, config))
}

fn parse_family(name: &str) -> Result<FamilyId, Failure> {
    name.parse::<FamilyId>()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn parse_positive_rational(text: &str, what: &str) -> Result<Scalar, Failure> {
    let value = Scalar::from_str(text).map_err(|e| Failure::usage(e.to_string()))?;
    if !value.is_positive() {
        return Err(Failure::usage(format!("{what} must be > 0, got {value}")));
    }
    Ok(value)
}

fn parse_rational_list(text: &str, what: &str) -> Result<Vec<Scalar>, Failure> {
    text.split(',')
        .map(|item| {
            Scalar::from_str(item.trim())
                .map_err(|_| Failure::usage(format!("malformed rational {item:?} in {what}")))
        })
        .collect()
}

fn parse_range(text: &str) -> Result<(u32, u32), Failure> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Failure::usage(format!("range must look like A:B, got {text:?}")))?;
    let from = a
        .trim()
        .parse::<u32>()
        .map_err(|_| Failure::usage(format!("bad range start {a:?}")))?;
    let to = b
        .trim()
        .parse::<u32>()
        .map_err(|_| Failure::usage(format!("bad range end {b:?}")))?;
    Ok((from, to))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 1,
        message: format!("cannot parse {}: {e}", path.display()),
    })
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{content}\n")).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}
