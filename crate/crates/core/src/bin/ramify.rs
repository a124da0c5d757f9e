use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ramify::cli::{verify_suite, RunConfig, RunOptions, TaskOptions};

#[derive(Parser)]
#[command(name = "ramify", version, about = "Ramification breaks, Herbrand functions and refined Swan conductors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Working t-adic precision; overrides the config.
    #[arg(long, global = true, value_name = "N")]
    precision: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the Herbrand function segments of every breaks result as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    emit_herbrand_csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a TOML or JSON config.
    Run { config: PathBuf },
    /// Run every invariant on the built-in corpus or on the objects of a config.
    Verify {
        #[arg(long, default_value = "built-in", value_name = "built-in|PATH")]
        corpus: String,
        #[arg(long, hide = true)]
        inject_b1_sign_error: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("ramify: {msg}");
    ExitCode::from(2)
}

fn write_csv(path: &Option<PathBuf>, csv: String) -> Result<(), ExitCode> {
    if let Some(p) = path {
        std::fs::write(p, csv).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = RunOptions { precision: cli.precision, ..Default::default() };
    match cli.command {
        Command::Run { config } => {
            let cfg = match RunConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let report = match ramify::cli::run(&cfg, &opts) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Md => print!("{}", report.to_markdown()),
            }
            if let Err(code) = write_csv(&cli.emit_herbrand_csv, report.herbrand_csv()) {
                return code;
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Verify { corpus, inject_b1_sign_error } => {
            opts.task = TaskOptions { mutate_b1: inject_b1_sign_error };
            let cfg = if corpus == "built-in" {
                None
            } else {
                match RunConfig::load(corpus.as_ref()) {
                    Ok(c) => Some(c),
                    Err(e) => return config_error(e),
                }
            };
            let outcome = match verify_suite(cfg.as_ref(), &opts) {
                Ok(o) => o,
                Err(e) => return config_error(e),
            };
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&outcome).expect("reports serialize")),
                Format::Md => {
                    print!("{}", outcome.report.to_markdown());
                    println!("## suite\n");
                    for c in &outcome.suite_checks {
                        let detail = c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
                        println!("- {}{detail}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
                    }
                }
            }
            if let Err(code) = write_csv(&cli.emit_herbrand_csv, outcome.report.herbrand_csv()) {
                return code;
            }
            if outcome.passed {
                return ExitCode::SUCCESS;
            }
            for f in outcome.failures() {
                eprintln!("failed: {f}");
            }
            if let Some(r) = &outcome.reproducer {
                eprintln!("reproducer config:\n{}", r.to_toml());
            }
            ExitCode::from(1)
        }
    }
}
