//! `cfq`: reproduce the identification results and run the oracles on model files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cfq_core::classical::SampleLog;
use cfq_core::identify::BoundsJson;
use cfq_core::io::{load_model, Model};
use cfq_core::quantum::{build_rho_xy, tomography_table, Amplitudes};
use cfq_core::reproduce::{reproduce, Example};
use cfq_core::{is_identifiable, rational, toy, ConstraintLevel, CounterfactualQuery, Error, LinearTarget};

#[derive(Parser)]
#[command(name = "cfq", version, about = "Counterfactual identification with classical and quantum oracles")]
struct Cli {
    /// Model file (JSON with "pF" or "joint").
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Defaults to csv for simulate and tomography, json otherwise.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Rerun a scripted example; exits 1 if any claim fails.
    Reproduce {
        /// binary, appendix_b, model_ab, appendix_e, appendix_e_general or toy
        example: String,
    },
    /// LP bounds on a joint counterfactual given the model's constraints.
    Bounds(TargetArgs),
    /// Like `bounds`, plus the target's value under the model itself.
    Identify(TargetArgs),
    /// Classical oracle queries, x cycling through 0..n_x.
    Simulate {
        #[arg(long, default_value_t = 1000)]
        queries: usize,
    },
    /// Two-way joints read off ρ_XY.
    Tomography {
        /// Real input amplitudes, comma separated (default uniform).
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
    },
    /// Quantum vs toy-theory probabilities on the binary test grid.
    ToyCheck,
}

#[derive(clap::Args)]
struct TargetArgs {
    #[arg(long, default_value = "one-way")]
    level: String,
    /// Pairs "x:y,x':y'".
    #[arg(long)]
    target: String,
}

enum Failure {
    Usage(String),
    Claims(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Twelve significant digits.
fn fmt_float(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{v:.prec$}", prec = (11 - exp) as usize)
    } else {
        format!("{v:.11e}")
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn write_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn model(cli: &Cli) -> Result<Model, Failure> {
    let path = cli.model.as_ref().ok_or_else(|| Failure::Usage("--model is required".into()))?;
    Ok(load_model(path)?)
}

#[derive(Serialize)]
struct ClaimRow<'a> {
    report: &'a str,
    description: &'a str,
    expected: &'a str,
    computed: &'a str,
    pass: bool,
}

#[derive(Serialize)]
struct TomographyRow {
    x: usize,
    x_prime: usize,
    y: usize,
    y_prime: usize,
    value: String,
}

#[derive(Serialize)]
struct IdentifyJson {
    #[serde(flatten)]
    bounds: BoundsJson,
    model_value: String,
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let format = cli.output;
    match &cli.command {
        Command::Reproduce { example } => {
            let report = reproduce(example.parse::<Example>()?)?;
            let text = if format == Some(Format::Csv) {
                write_csv(report.claims.iter().map(|c| ClaimRow {
                    report: &report.name,
                    description: &c.description,
                    expected: &c.expected,
                    computed: &c.computed,
                    pass: c.pass,
                }))?
            } else {
                to_json(&report)
            };
            if report.passed() {
                Ok(text)
            } else {
                Err(Failure::Claims(text))
            }
        }
        Command::Bounds(args) | Command::Identify(args) => {
            let p = model(cli)?.response_distribution();
            let level = ConstraintLevel::parse(&args.level)?;
            let query = CounterfactualQuery::parse(&args.target)?;
            let target = LinearTarget::joint(p.n_x(), p.n_y(), &query)?;
            let sys = cfq_core::build_constraints(&p, &level)?;
            let id = is_identifiable(&target, &sys)?;
            let bounds = BoundsJson::from(&id);
            if matches!(cli.command, Command::Bounds(_)) {
                return match format {
                    Some(Format::Csv) => write_csv([(&bounds.lo, &bounds.hi, bounds.identifiable)])
                        .map(|body| format!("lo,hi,identifiable\n{body}")),
                    _ => Ok(to_json(&bounds)),
                };
            }
            let model_value = rational::format(&p.joint(&query)?);
            match format {
                Some(Format::Csv) => write_csv([(&bounds.lo, &bounds.hi, bounds.identifiable, &model_value)])
                    .map(|body| format!("lo,hi,identifiable,model_value\n{body}")),
                _ => Ok(to_json(&IdentifyJson { bounds, model_value })),
            }
        }
        Command::Simulate { queries } => {
            let p = model(cli)?.response_distribution();
            let log = SampleLog::round_robin(&p, *queries, cli.seed)?;
            match format {
                Some(Format::Json) => Ok(to_json(&log.records)),
                _ => Ok(log.to_csv()),
            }
        }
        Command::Tomography { alpha } => {
            let p = model(cli)?.response_distribution();
            let alpha = match alpha {
                Some(a) => Amplitudes::from_real(a)?,
                None => Amplitudes::uniform(p.n_x()),
            };
            let rho = build_rho_xy(&p, &alpha)?;
            let rows: Vec<TomographyRow> = tomography_table(&rho, &alpha)?
                .into_iter()
                .map(|(x, x_prime, y, y_prime, v)| TomographyRow { x, x_prime, y, y_prime, value: fmt_float(v) })
                .collect();
            match format {
                Some(Format::Json) => Ok(to_json(&serde_json::json!({ "rho": rho.to_json(), "two_way": rows }))),
                _ => write_csv(rows),
            }
        }
        Command::ToyCheck => {
            let rows = toy::compare_binary_equivalence()?;
            let all_equal = rows.iter().all(|r| r.equal);
            let text = if format == Some(Format::Csv) {
                let flat = rows.iter().map(|r| {
                    let pf = r.p_f.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
                    (&r.scenario, pf, &r.quantum, &r.toy, r.equal)
                });
                format!("scenario,pF,quantum,toy,equal\n{}", write_csv(flat)?)
            } else {
                to_json(&rows)
            };
            if all_equal {
                Ok(text)
            } else {
                Err(Failure::Claims(text))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Claims(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
