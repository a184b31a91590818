use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use evpos::harness::{
    self, catalog, orbit_decay, parse_generator, parse_model, parse_vector, run_classify, run_suite, ClassifyOptions,
    ModelInput, SuiteKind, EXIT_INPUT, EXIT_SOLVER,
};
use evpos::{Error, LatticeVector, OperatorModel};

#[derive(Parser)]
#[command(name = "evpos", version, about = "Eventual and asymptotic positivity of linear operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one operator and run the applicable checks.
    Classify {
        /// Model descriptor or matrix JSON file.
        model: Option<PathBuf>,
        /// Built-in example name (see `evpos examples`).
        #[arg(long, conflicts_with_all = ["model", "generate"])]
        example: Option<String>,
        /// Generator spec, inline JSON or a file.
        #[arg(long, conflicts_with = "model")]
        generate: Option<String>,
        /// Horizon for the eventual notions.
        #[arg(long, default_value_t = 30)]
        horizon: u64,
        #[arg(long, default_value_t = 200)]
        asymptotic_horizon: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the verifier checks.
        #[arg(long)]
        no_checks: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a batch suite and print its summary.
    Suite {
        #[arg(value_enum)]
        name: SuiteArg,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the summary and every report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the `n,d_plus,norm` CSV of an orbit.
    Orbit {
        /// Model file or built-in example name.
        model: String,
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in examples.
    Examples,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Properties,
    Catalog,
    Random,
}

impl From<SuiteArg> for SuiteKind {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Properties => SuiteKind::Properties,
            SuiteArg::Catalog => SuiteKind::Catalog,
            SuiteArg::Random => SuiteKind::Random,
        }
    }
}

enum Failure {
    Input(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::SingularResolvent { .. }
            | Error::NotAnEigenvalue { .. }
            | Error::Extrapolation(_)
            | Error::PositiveVectorNotFound(_) => Failure::Solver(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Input(e.to_string()))
}

fn load_model(arg: &str) -> Result<(String, OperatorModel), Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let d = parse_model(&read(path)?).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        Ok((arg.to_string(), d.build()?))
    } else if catalog::catalog_names().contains(&arg) {
        Ok((arg.to_string(), harness::build_example(arg)?))
    } else {
        Err(Failure::Input(format!("{arg}: no such file or built-in example")))
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Classify { model, example, generate, horizon, asymptotic_horizon, tol, seed, no_checks, out } => {
            let input = match (model, example, generate) {
                (Some(path), None, None) => {
                    let text = read(&path)?;
                    let descriptor =
                        parse_model(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    ModelInput::Model { id: path.display().to_string(), descriptor }
                }
                (None, Some(name), None) => ModelInput::Example(name),
                (None, None, Some(spec)) => {
                    let text = if spec.trim_start().starts_with('{') { spec } else { read(Path::new(&spec))? };
                    let spec = parse_generator(&text).map_err(|e| Failure::Input(format!("generator spec: {e}")))?;
                    ModelInput::Generate(spec)
                }
                _ => return Err(Failure::Input("give exactly one of MODEL, --example, --generate".into())),
            };
            let options =
                ClassifyOptions { eventual_horizon: horizon, asymptotic_horizon, tol, seed, checks: !no_checks };
            let report = run_classify(&input, &options)?;
            emit(out.as_deref(), &report.to_json()?)?;
            for e in &report.errors {
                eprintln!("solver failure: {e}");
            }
            if report.contradictions > 0 {
                eprintln!("{} contradiction(s)", report.contradictions);
            }
            Ok(report.exit_code())
        }
        Command::Suite { name, trials, seed, out } => {
            let kind = SuiteKind::from(name);
            let trials = trials.unwrap_or(match kind {
                SuiteKind::Properties => 10_000,
                SuiteKind::Random => 100,
                SuiteKind::Catalog => 1,
            });
            let outcome = run_suite(kind, seed, trials)?;
            let summary = json(&outcome.summary)?;
            if let Some(path) = out {
                let full = serde_json::json!({ "summary": outcome.summary, "reports": outcome.reports });
                emit(Some(&path), &json(&full)?)?;
            }
            emit(None, &summary)?;
            for f in &outcome.summary.failures {
                eprintln!("failure: {f}");
            }
            Ok(outcome.summary.exit_code())
        }
        Command::Orbit { model, vector, n, out } => {
            let (_, t) = load_model(&model)?;
            let entries =
                parse_vector(&read(&vector)?).map_err(|e| Failure::Input(format!("{}: {e}", vector.display())))?;
            let x = LatticeVector::new(entries, t.norm_kind().clone())?;
            let rows = orbit_decay(&t, &x, n)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| Failure::Input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
            let text = String::from_utf8(bytes).map_err(|e| Failure::Input(e.to_string()))?;
            emit(out.as_deref(), text.trim_end())?;
            Ok(0)
        }
        Command::Examples => {
            for e in catalog::catalog() {
                println!("{:<32} {}", e.name, e.summary);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            EXIT_SOLVER
        }
    };
    ExitCode::from(code as u8)
}
