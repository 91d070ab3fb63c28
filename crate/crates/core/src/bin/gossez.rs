use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gossez_core::expr::{self, Env, Expr, ExprError, Func, Value};
use gossez_core::format::value_json;
use gossez_core::suite::{self, OutputFormat, RunConfig};
use gossez_core::{Exact, Kernel, Mutant, Mutation};

const EXIT_PASS: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "gossez", version, about = "Exact certificates for Gossez's operator and type (D) monotonicity")]
struct Cli {
    #[arg(long, global = true, default_value_t = RunConfig::default().seed)]
    seed: u64,
    #[arg(long, global = true, default_value_t = RunConfig::default().sample_count)]
    samples: usize,
    #[arg(long, global = true, default_value_t = RunConfig::default().max_support)]
    max_support: usize,
    #[arg(long, global = true, default_value_t = RunConfig::default().max_magnitude)]
    max_magnitude: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run the checks against a deliberately broken kernel.
    #[arg(long, global = true, hide = true, value_parser = parse_mutation)]
    mutate: Option<Mutation>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression.
    Eval { expr: String },
    /// Run the counterexample pipeline and every invariant suite.
    VerifyPaper,
    /// Run every property on seeded random inputs.
    RandomCheck,
    /// Solve A x = y for a finitely supported y.
    Solve { y: String },
    /// Type (D) gap of T at (x*, x**).
    Gap { xstar: String, xss: String },
    /// Closure membership of (x**, x*).
    Member { xss: String, xstar: String },
    /// Inverse-extension certificate for (x0**, x0***).
    Invcert { xss: String, xsss: String },
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        seed: cli.seed,
        sample_count: cli.samples,
        max_support: cli.max_support,
        max_magnitude: cli.max_magnitude,
        output_format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Machine => OutputFormat::Machine,
        },
    };
    let kernel: Box<dyn Kernel> = match cli.mutate {
        Some(m) => Box::new(Mutant(m)),
        None => Box::new(Exact),
    };
    ExitCode::from(run(&cli.command, &config, kernel.as_ref()))
}

fn run(command: &Command, config: &RunConfig, kernel: &dyn Kernel) -> u8 {
    let machine = config.output_format == OutputFormat::Machine;
    match command {
        Command::VerifyPaper | Command::RandomCheck => {
            if let Err(msg) = config.validate() {
                return usage_error(machine, "E-CONFIG", &msg);
            }
            let report = match command {
                Command::VerifyPaper => suite::verify_paper(config, kernel),
                _ => suite::random_suite(config, kernel),
            };
            print!("{}", report.render());
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Command::Eval { expr } => emit(machine, expr::eval_str(expr)),
        Command::Solve { y } => emit(machine, call(Func::Ainv, &[y])),
        Command::Gap { xstar, xss } => emit(machine, call(Func::Gap, &[xstar, xss])),
        Command::Member { xss, xstar } => emit(machine, call(Func::Member, &[xss, xstar])),
        Command::Invcert { xss, xsss } => emit(machine, call(Func::Invcert, &[xss, xsss])),
    }
}

fn call(func: Func, args: &[&String]) -> Result<Value, ExprError> {
    let args = args.iter().map(|a| expr::parse(a)).collect::<Result<Vec<_>, _>>()?;
    expr::eval(&Expr::Call(func, args), &Env::default())
}

fn emit(machine: bool, result: Result<Value, ExprError>) -> u8 {
    match result {
        Ok(value) if machine => {
            println!("{}", serde_json::to_string_pretty(&value_json(&value)).expect("serialisable"));
            EXIT_PASS
        }
        Ok(value) => {
            println!("{value}");
            EXIT_PASS
        }
        Err(err) => usage_error(machine, err.code(), &err.to_string()),
    }
}

fn usage_error(machine: bool, code: &str, message: &str) -> u8 {
    if machine {
        let doc = json!({ "error": { "code": code, "message": message } });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
    } else {
        eprintln!("error[{code}]: {message}");
    }
    EXIT_USAGE
}
