use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fieldquanta_core::catalog::{self, TheorySpec};
use fieldquanta_core::kernel::TolerancePolicy;
use fieldquanta_core::modes::{Dispersion, Lattice};
use fieldquanta_core::pipeline::{self, RunConfig, DEFAULT_SEED};
use fieldquanta_core::render;
use fieldquanta_core::Error;

#[derive(Parser)]
#[command(name = "fieldquanta", version, about = "Classify the particle content of linear field theories from their classical symmetries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the classification pipeline and print a spectrum report.
    Classify(ClassifyArgs),
    /// Print a worked example with intermediate matrices.
    Demo {
        /// One of so2-vs-so3, higgs, goldstone.
        name: String,
        #[arg(long, env = "FIELDQUANTA_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Check a spec file and list every violated invariant.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Write a builtin theory as a spec file.
    Export {
        #[arg(long)]
        builtin: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin theories.
    List,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Builtin theory, e.g. complex-kg or kg-internal(3).
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    builtin: Option<String>,
    /// Spec file in the fieldquanta-spec/1 format.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, env = "FIELDQUANTA_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Lattice check: sites (a power of two) and length, e.g. `64,2pi`.
    #[arg(long, value_name = "M,L")]
    modes: Option<String>,
    /// Use this dynamics for every field: `relativistic:MASS` or `schroedinger:MASS`.
    #[arg(long, value_name = "KIND:MASS")]
    dispersion: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    eps_rel: Option<f64>,
    #[arg(long)]
    eps_rank: Option<f64>,
}

/// Accepts a plain number or a multiple of pi such as `2pi`.
fn parse_length(s: &str) -> Result<f64, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot read length '{s}'"));
    match s.strip_suffix("pi") {
        Some("") => Ok(PI),
        Some(k) => k.parse::<f64>().map(|k| k * PI).map_err(|_| bad()),
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_modes(s: &str) -> Result<Lattice, Error> {
    let (m, l) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("--modes expects M,L, got '{s}'")))?;
    let m: usize = m
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("cannot read site count '{m}'")))?;
    Lattice::new(m, parse_length(l)?)
}

fn parse_dispersion(s: &str) -> Result<Dispersion, Error> {
    let (kind, mass) = s.split_once(':').unwrap_or((s, "1"));
    let mass: f64 = mass
        .parse()
        .map_err(|_| Error::InvalidInput(format!("cannot read mass '{mass}'")))?;
    let d = match kind {
        "relativistic" => Dispersion::Relativistic { mass },
        "schroedinger" => Dispersion::Schroedinger { mass },
        _ => return Err(Error::InvalidInput(format!("unknown dispersion '{kind}'"))),
    };
    d.validate()?;
    Ok(d)
}

fn tolerances(a: &ClassifyArgs) -> Result<TolerancePolicy, Error> {
    let d = TolerancePolicy::default();
    TolerancePolicy::new(a.eps_rel.unwrap_or(d.eps_rel), a.eps_rank.unwrap_or(d.eps_rank))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_theory(a: &ClassifyArgs, tol: &TolerancePolicy) -> Result<TheorySpec, Error> {
    match (&a.builtin, &a.spec) {
        (Some(name), _) => catalog::builtin(name),
        (None, Some(path)) => catalog::load(path, tol),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn classify(a: &ClassifyArgs) -> Result<i32, Error> {
    let tol = tolerances(a)?;
    let cfg = RunConfig {
        seed: a.seed,
        tol,
        modes: a.modes.as_deref().map(parse_modes).transpose()?,
        dispersion_override: a.dispersion.as_deref().map(parse_dispersion).transpose()?,
    };
    let theory = load_theory(a, &tol)?;
    let outcome = pipeline::classify_theory(&theory, &cfg)?;
    let text = match a.format {
        Format::Json => pipeline::to_json(&outcome.report),
        Format::Text => render::text_report(&outcome.report),
    };
    emit(&text, a.out.as_ref())?;
    if outcome.exit_code != 0 {
        eprintln!("error: cross-module consistency checks failed");
    }
    Ok(outcome.exit_code)
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Classify(a) => classify(&a),
        Command::Demo { name, seed } => {
            print!("{}", render::demo(&name, seed)?);
            Ok(0)
        }
        Command::Validate { spec } => {
            let tol = TolerancePolicy::default();
            let theory = catalog::load(&spec, &tol)?;
            println!("{}: valid ({} fields)", theory.name, theory.fields.len());
            Ok(0)
        }
        Command::Export { builtin, out } => {
            let theory = catalog::builtin(&builtin)?;
            emit(&catalog::to_json(&theory)?, out.as_ref())?;
            Ok(0)
        }
        Command::List => {
            for name in catalog::BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(0)
        }
    }
}

fn report_error(e: &Error) {
    match e.root() {
        Error::Validation(items) => {
            let prefix = match e {
                Error::Context { context, .. } => format!("{context}: "),
                _ => String::new(),
            };
            eprintln!("error: {prefix}validation failed");
            for item in items {
                eprintln!("  - {item}");
            }
        }
        _ => eprintln!("error: {e}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            report_error(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
