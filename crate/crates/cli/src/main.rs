mod commands;
mod input;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{ChernArgs, CohomologyArgs, CrystallineArgs};
use detchern::Result;
use input::Source;
use report::{Diagnostic, Outcome, Report, VERSION};
use selftest::{Fault, Suite};

#[derive(Parser, Debug)]
#[command(name = "detchern", version, about = "Exact Chern classes, derived powers and crystalline obstructions on toy schemes")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Report timing_ms as 0 so that JSON output is byte-identical across runs
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// Built-in scheme: P1, P2, Pn or A1
    #[arg(long)]
    scheme: Option<String>,

    /// JSON document with base, scheme and named bundles
    #[arg(long)]
    input: Option<PathBuf>,

    /// Base ring: Z, Q, F<p> or Fp:<p> (overrides the document)
    #[arg(long)]
    base: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sheaf cohomology H^q(X, Ω^k ⊗ L) or algebraic de Rham cohomology
    Cohomology {
        #[command(flatten)]
        src: SchemeArgs,
        /// Line bundle L, e.g. "O(-2)"
        #[arg(long, default_value = "O(0)", allow_hyphen_values = true)]
        sheaf: String,
        /// Form degree k
        #[arg(long, default_value_t = 0)]
        forms: usize,
        /// Cohomological degree (all degrees if omitted)
        #[arg(long)]
        q: Option<usize>,
        /// Hypercohomology of the de Rham complex instead
        #[arg(long)]
        de_rham: bool,
        /// de Rham degree (all degrees if omitted)
        #[arg(long)]
        n: Option<usize>,
        /// Override the weight box |w_i| ≤ bound
        #[arg(long)]
        bound: Option<i32>,
    },
    /// Chern classes from the Atiyah class via det(1 − tA)
    Chern {
        #[command(flatten)]
        src: SchemeArgs,
        /// "O(a)+O(b)", "trivial:r" or a document bundle name
        #[arg(long, allow_hyphen_values = true)]
        bundle: String,
        /// Use the block-split product formula instead of Newton's identities
        #[arg(long)]
        split: bool,
    },
    /// Teichmüller obstruction of a line bundle against c_1^dR over F_p
    Crystalline {
        #[command(flatten)]
        src: SchemeArgs,
        #[arg(long, allow_hyphen_values = true)]
        bundle: String,
        /// The prime p
        #[arg(long)]
        p: Option<u64>,
        /// Split classes a_i (multiples of h) for the divided-power series
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        classes: Option<Vec<i64>>,
        /// Truncation of the divided-power series
        #[arg(long)]
        truncation: Option<usize>,
        /// Use a randomly perturbed lift of the charts
        #[arg(long)]
        lift_seed: Option<u64>,
    },
    /// Run the seeded property suites
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Negative control: corrupt every computed value before comparison
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cohomology { .. } => "cohomology",
            Command::Chern { .. } => "chern",
            Command::Crystalline { .. } => "crystalline",
            Command::Selftest { .. } => "selftest",
        }
    }
}

fn load(src: &SchemeArgs) -> Result<Source> {
    Source::load(src.scheme.as_deref(), src.input.as_deref(), src.base.as_deref())
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Cohomology {
            src,
            sheaf,
            forms,
            q,
            de_rham,
            n,
            bound,
        } => commands::cohomology(
            &load(src)?,
            &CohomologyArgs {
                sheaf: sheaf.clone(),
                forms: *forms,
                q: *q,
                de_rham: *de_rham,
                n: *n,
                bound: *bound,
            },
        ),
        Command::Chern { src, bundle, split } => commands::chern(
            &load(src)?,
            &ChernArgs {
                bundle: bundle.clone(),
                split: *split,
            },
        ),
        Command::Crystalline {
            src,
            bundle,
            p,
            classes,
            truncation,
            lift_seed,
        } => {
            // the prime alone determines the base for built-in schemes
            let base = src.base.clone().or_else(|| p.map(|p| format!("F{p}")));
            let source = Source::load(src.scheme.as_deref(), src.input.as_deref(), base.as_deref())?;
            commands::crystalline(
                &source,
                *p,
                &CrystallineArgs {
                    bundle: bundle.clone(),
                    classes: classes.clone(),
                    truncation: *truncation,
                    lift_seed: *lift_seed,
                },
            )
        }
        Command::Selftest {
            suite,
            seed,
            inject_fault,
        } => {
            let suite: Suite = suite.parse()?;
            let props = selftest::run(suite, *seed, Fault(*inject_fault));
            let passed = props.iter().all(|p| p.passed());
            let text = props
                .iter()
                .map(|p| {
                    let status = if p.passed() { "PASS" } else { "FAIL" };
                    let mut line = format!("[{status}] {}: {} ({} cases)", p.suite, p.name, p.cases);
                    if let Some(first) = p.failures.first() {
                        line.push_str(&format!("; first failure: {first}"));
                    }
                    line
                })
                .chain(std::iter::once(format!(
                    "{} of {} properties passed (seed {seed})",
                    props.iter().filter(|p| p.passed()).count(),
                    props.len()
                )))
                .collect();
            Ok(Outcome {
                base: "mixed".into(),
                results: json!({"seed": seed, "passed": passed, "properties": props}),
                text,
                passed,
            })
        }
    }
}

/// The base as requested on the command line, for error reports.
fn requested_base(cmd: &Command) -> Option<String> {
    match cmd {
        Command::Cohomology { src, .. } | Command::Chern { src, .. } => src.base.clone(),
        Command::Crystalline { src, p, .. } => src.base.clone().or_else(|| p.map(|p| format!("F{p}"))),
        Command::Selftest { .. } => Some("mixed".into()),
    }
}

fn location(cmd: &Command) -> String {
    match cmd {
        Command::Cohomology { src, .. } | Command::Chern { src, .. } | Command::Crystalline { src, .. } => {
            match (&src.input, &src.scheme) {
                (Some(p), _) => p.display().to_string(),
                (None, Some(s)) => format!("--scheme {s}"),
                (None, None) => "command line".into(),
            }
        }
        Command::Selftest { .. } => "command line".into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let timing_ms = if cli.deterministic {
        0
    } else {
        u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX)
    };
    let command = cli.command.name();
    match outcome {
        Ok(out) => {
            match cli.format {
                Format::Json => {
                    let report = Report {
                        command,
                        base: &out.base,
                        results: &out.results,
                        timing_ms,
                        version: VERSION,
                    };
                    println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
                }
                Format::Text => {
                    for line in &out.text {
                        println!("{line}");
                    }
                    if !cli.deterministic {
                        println!("({command}, base {}, {timing_ms} ms, detchern {VERSION})", out.base);
                    }
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            let diag = Diagnostic::from_error(&e, &location(&cli.command));
            match cli.format {
                Format::Json => {
                    let body = json!({
                        "command": command,
                        "base": requested_base(&cli.command),
                        "error": diag,
                        "timing_ms": timing_ms,
                        "version": VERSION,
                    });
                    println!("{}", serde_json::to_string_pretty(&body).expect("serializable diagnostic"));
                }
                Format::Text => eprintln!("{}", diag.render()),
            }
            ExitCode::from(report::exit_code(&e))
        }
    }
}
