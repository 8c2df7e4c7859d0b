//! `equisplit` command-line tool.
//!
//! Every command prints one JSON document on stdout. Exit status is 0 on
//! success, 1 when a check fails and 2 for usage or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{debug, info};
use serde_json::{json, Value};

use equisplit::acceptance::{run_suite, SuiteConfig};
use equisplit::bundle::random_instance;
use equisplit::cohomology::{cech_cohomology, euler_check, h0_character, CechConfig};
use equisplit::format::{
    certificate_report_to_json, certificate_to_json, cohomology_to_json, instance_to_json, parse_certificate,
    parse_instance, summands_to_json, to_string, validation_to_json, Instance,
};
use equisplit::splitting::{equivariant_split, verify_certificate};
use equisplit::{Error, LineSummand, TorusAction, Weight};

#[derive(Parser, Debug)]
#[command(name = "equisplit", version, about = "Exact splitting of equivariant vector bundles on P^1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check shape, determinant and weight law of an instance.
    Validate { file: PathBuf },
    /// Graded H^0 and H^1 with Riemann-Roch and Serre-duality checks.
    Cohomology { file: PathBuf },
    /// Decompose into equivariant line bundles.
    Split {
        file: PathBuf,
        /// Write the splitting certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check a splitting certificate against an instance.
    Verify { file: PathBuf, cert: PathBuf },
    /// Generate a scrambled split bundle with its answer under "expected".
    Random {
        #[arg(long)]
        seed: u64,
        /// Comma-separated summands `n:l1:...:lr`.
        #[arg(long, allow_hyphen_values = true)]
        summands: String,
        #[arg(long)]
        ops: usize,
        /// Comma-separated base weights `a1,...,ar`; omitted means no torus.
        #[arg(long, allow_hyphen_values = true)]
        torus: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest,
}

/// Output document and exit status.
struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: 0 }
    }

    fn check(doc: Value, passed: bool) -> Self {
        Outcome {
            doc,
            code: if passed { 0 } else { 1 },
        }
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::InvalidArgument(message.into())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

fn error_doc(e: &Error) -> Value {
    let mut doc = json!({"error": e.to_string()});
    if let Error::Parse { pointer, message } = e {
        doc["pointer"] = json!(pointer);
        doc["message"] = json!(message);
    }
    doc
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Error> {
    let inst = parse_instance(&read(path)?)?;
    debug!(
        "loaded rank {} instance with torus rank {} from {}",
        inst.bundle.rank(),
        inst.bundle.torus().rank(),
        path.display()
    );
    Ok(inst)
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, Error> {
    s.split([',', ':'])
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.replace('−', "-")
                .parse::<i64>()
                .map_err(|_| usage(format!("{what}: {t:?} is not an integer")))
        })
        .collect()
}

fn parse_summand_list(s: &str, torus_rank: usize) -> Result<Vec<LineSummand>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|item| {
            let v = parse_ints(item, "summand")?;
            if v.len() != torus_rank + 1 {
                return Err(usage(format!(
                    "summand {item:?} needs a degree and {torus_rank} weight components"
                )));
            }
            Ok(LineSummand {
                n: v[0],
                lam: Weight(v[1..].to_vec()),
            })
        })
        .collect()
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Validate { file } => {
            let report = load(&file)?.bundle.validate();
            info!("{} violations", report.violations.len());
            let valid = report.is_valid();
            Ok(Outcome::check(validation_to_json(&report), valid))
        }
        Command::Cohomology { file } => {
            let bundle = load(&file)?.bundle;
            bundle.ensure_valid()?;
            let cfg = CechConfig::from_env();
            let h0 = h0_character(&bundle)?;
            let cech = cech_cohomology(&bundle, &cfg)?;
            info!("Čech complex stabilized at window {}", cech.window);
            let euler = euler_check(&bundle, &cfg)?;
            let mut doc = cohomology_to_json(&h0, &cech.h1, &euler);
            let agree = h0 == cech.h0;
            doc["oraclesAgree"] = json!(agree);
            Ok(Outcome::check(doc, agree && euler.passed()))
        }
        Command::Split { file, certificate } => {
            let bundle = load(&file)?.bundle;
            let (summands, cert) = equivariant_split(&bundle)?;
            info!("splitting type {:?}", summands.iter().map(|s| s.n).collect::<Vec<_>>());
            if let Some(path) = certificate {
                std::fs::write(&path, to_string(&certificate_to_json(&cert)))
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                info!("certificate written to {}", path.display());
            }
            Ok(Outcome::ok(json!({"summands": summands_to_json(&summands)})))
        }
        Command::Verify { file, cert } => {
            let bundle = load(&file)?.bundle;
            let cert = parse_certificate(&read(&cert)?, bundle.rank(), bundle.torus().rank())?;
            let report = verify_certificate(&bundle, &cert);
            for c in report.checks.iter().filter(|c| !c.passed) {
                info!("check ({}) {} failed: {}", c.id, c.name, c.detail);
            }
            let passed = report.passed();
            Ok(Outcome::check(certificate_report_to_json(&report), passed))
        }
        Command::Random {
            seed,
            summands,
            ops,
            torus,
        } => {
            let torus = match torus {
                Some(t) => TorusAction::new(parse_ints(&t, "torus")?),
                None => TorusAction::none(),
            };
            let summands = parse_summand_list(&summands, torus.rank())?;
            if summands.is_empty() {
                return Err(usage("at least one summand is required"));
            }
            let (bundle, answer) = random_instance(seed, &torus, &summands, ops)?;
            Ok(Outcome::ok(instance_to_json(&bundle, Some(&answer))))
        }
        Command::Selftest => {
            let outcomes = run_suite(&SuiteConfig::default());
            for o in &outcomes {
                info!("{}", o.line());
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let criteria: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id,
                        "name": o.name,
                        "passed": o.passed,
                        "cases": o.cases,
                        "detail": o.detail,
                    })
                })
                .collect();
            Ok(Outcome::check(json!({"passed": passed, "criteria": criteria}), passed))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = run(cli.command).unwrap_or_else(|e| {
        log::error!("{e}");
        Outcome {
            doc: error_doc(&e),
            code: exit_code(&e),
        }
    });
    print!("{}", to_string(&outcome.doc));
    ExitCode::from(outcome.code)
}
